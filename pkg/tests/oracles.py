"""Slow, independent reference computations for the test-suite.

Nothing here imports tracenorm: fields are modelled as tuples of
coefficients mod p with schoolbook polynomial arithmetic.
"""

import itertools


def pmul(a, b, f, p):
    """Product of coefficient tuples a, b modulo monic f (all lowest degree first)."""
    d = len(f) - 1
    prod = [0] * (2 * d)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    for i in range(2 * d - 1, d - 1, -1):
        c = prod[i]
        if c:
            for j in range(d + 1):
                prod[i - d + j] = (prod[i - d + j] - c * f[j]) % p
    return tuple(prod[:d])


def padd(a, b, p):
    return tuple((x + y) % p for x, y in zip(a, b))


def ppow(a, e, f, p):
    d = len(f) - 1
    out = (1,) + (0,) * (d - 1)
    while e:
        if e & 1:
            out = pmul(out, a, f, p)
        a = pmul(a, a, f, p)
        e >>= 1
    return out


def divides(g, f, p):
    r = list(f)
    dg = len(g) - 1
    inv = pow(g[-1], -1, p)
    for i in range(len(r) - 1, dg - 1, -1):
        c = r[i] * inv % p
        if c:
            for j in range(dg + 1):
                r[i - dg + j] = (r[i - dg + j] - c * g[j]) % p
    return not any(r[:dg])


def irreducible_by_factors(f, p):
    """Exhaustive search for a monic factor of degree 1 .. deg(f)//2."""
    d = len(f) - 1
    for k in range(1, d // 2 + 1):
        for low in itertools.product(range(p), repeat=k):
            if divides(tuple(low) + (1,), f, p):
                return False
    return True


def first_irreducible(p, d):
    for low in itertools.product(range(p), repeat=d):
        f = tuple(reversed(low)) + (1,)
        if irreducible_by_factors(f, p):
            return f
    raise AssertionError("no irreducible polynomial")


def trace_norm_table_prime(p, m):
    """counts[(a, b)] = #{alpha in GF(p^m): Tr alpha = a, Norm alpha = b} for prime p.

    Trace and norm land in the constants of the polynomial model.
    """
    f = first_irreducible(p, m)
    zero = (0,) * m
    counts = {}
    e = (p**m - 1) // (p - 1)
    for alpha in itertools.product(range(p), repeat=m):
        t, y = zero, alpha
        for _ in range(m):
            t = padd(t, y, p)
            y = ppow(y, p, f, p)
        nrm = ppow(alpha, e, f, p) if any(alpha) else zero
        assert not any(t[1:]) and not any(nrm[1:])
        key = (t[0], nrm[0])
        counts[key] = counts.get(key, 0) + 1
    return counts


def toric_count_prime(p, u, n):
    """#{x in (F_p*)^n : x_1 + ... + x_n + u / (x_1 ... x_n) = 1}."""
    count = 0
    for xs in itertools.product(range(1, p), repeat=n):
        prod = 1
        for x in xs:
            prod = prod * x % p
        if (sum(xs) + u * pow(prod, -1, p)) % p == 1:
            count += 1
    return count


def toric_count_poly(p, f, u, n):
    """Same count over GF(p^deg f); u is a coefficient tuple."""
    d = len(f) - 1
    q = p**d
    elems = [t for t in itertools.product(range(p), repeat=d) if any(t)]
    one = (1,) + (0,) * (d - 1)
    count = 0
    for xs in itertools.product(elems, repeat=n):
        s = (0,) * d
        prod = one
        for x in xs:
            s = padd(s, x, p)
            prod = pmul(prod, x, f, p)
        inv = ppow(prod, q - 2, f, p)
        if padd(s, pmul(u, inv, f, p), p) == one:
            count += 1
    return count


def element_order_mod(g, p):
    k, x = 1, g % p
    while x != 1:
        x = x * g % p
        k += 1
    return k
