"""Table-driven finite fields GF(p^k), subfield embeddings, relative trace and norm.

Elements are plain integers in ``[0, q)``: the base-``p`` digits of the integer
are the coefficients of the element in the polynomial basis ``1, x, x^2, ...``
of the stored modulus.  Multiplication goes through exp/log tables built from a
fixed primitive element; addition is digit-wise mod ``p``.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    FieldSpecError,
    LimitExceeded,
    NotASubfieldCardinality,
    NotInSubfieldImage,
    NotPrime,
    RootNotFound,
    SearchExhausted,
    TableLimitExceeded,
)

TABLE_LIMIT = 1 << 20

Poly = list  # coefficients over GF(p), lowest degree first


# ---------------------------------------------------------------------------
# integer helpers


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` by trial division, ascending."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, k)`` with ``q == p**k``; raise if ``q`` is not a prime power."""
    if q < 2:
        raise FieldSpecError(f"{q} is not a prime power")
    fs = prime_factors(q)
    if len(fs) != 1:
        raise FieldSpecError(f"{q} is not a prime power")
    p, k = fs[0], 0
    while q > 1:
        q //= p
        k += 1
    return p, k


_SPEC_RE = re.compile(r"^\s*(\d+)\s*(?:\^\s*(\d+))?\s*$")


def parse_field_spec(spec: str) -> tuple[int, int]:
    """Parse ``"b^e"`` (or a bare ``"q"``) into ``(p, k)`` for ``q = b**e``.

    The base may itself be a prime power, so ``"4^1"`` names GF(4).
    """
    m = _SPEC_RE.match(str(spec))
    if not m:
        raise FieldSpecError(f"bad field spec {spec!r}; expected e.g. '3^2'")
    base = int(m.group(1))
    exp = int(m.group(2)) if m.group(2) is not None else 1
    if exp < 1:
        raise FieldSpecError(f"bad field spec {spec!r}: exponent must be >= 1")
    return prime_power(base**exp)


# ---------------------------------------------------------------------------
# polynomials over GF(p)


def _trim(a: Poly) -> Poly:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a: Sequence[int], f: Sequence[int], p: int) -> Poly:
    """Remainder of ``a`` modulo the monic polynomial ``f``."""
    r = [c % p for c in a]
    df = len(f) - 1
    for i in range(len(r) - 1, df - 1, -1):
        c = r[i]
        if c:
            off = i - df
            for j in range(df + 1):
                r[off + j] = (r[off + j] - c * f[j]) % p
    return _trim(r[:df])


def poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> Poly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def poly_mulmod(a, b, f, p) -> Poly:
    return poly_mod(poly_mul(a, b, p), f, p)


def poly_powmod(a: Sequence[int], e: int, f: Sequence[int], p: int) -> Poly:
    result: Poly = [1]
    base = poly_mod(a, f, p)
    while e:
        if e & 1:
            result = poly_mulmod(result, base, f, p)
        base = poly_mulmod(base, base, f, p)
        e >>= 1
    return poly_mod(result, f, p)


def poly_sub(a, b, p) -> Poly:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def poly_divmod(a, b, p) -> tuple[Poly, Poly]:
    r = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(b[-1], -1, p)
    qt = [0] * max(len(r) - len(b) + 1, 0)
    while len(r) >= len(b):
        c = r[-1] * inv % p
        off = len(r) - len(b)
        qt[off] = c
        for j in range(len(b)):
            r[off + j] = (r[off + j] - c * b[j]) % p
        _trim(r)
    return _trim(qt), r


def poly_gcd(a, b, p) -> Poly:
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    while b:
        a, b = b, poly_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Ben-Or test: ``f`` monic of degree ``d`` is irreducible iff
    ``gcd(f, x^(p^i) - x) == 1`` for ``1 <= i <= d // 2``."""
    f = list(f)
    d = len(f) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    if f[0] % p == 0:
        return False
    x = [0, 1]
    h = x
    for _ in range(d // 2):
        h = poly_powmod(h, p, f, p)
        if len(poly_gcd(f, poly_sub(h, x, p), p)) > 1:
            return False
    return True


# ---------------------------------------------------------------------------
# the field descriptor


def _digits(x: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        x, r = divmod(x, p)
        out.append(r)
    return out


def _undigits(ds: Sequence[int], p: int) -> int:
    x = 0
    for d in reversed(ds):
        x = x * p + d
    return x


@dataclass(frozen=True, eq=False)
class FieldDescriptor:
    """GF(p^k) with complete exp/log tables.

    ``exp_table[i]`` is the encoding of ``generator**i`` for ``0 <= i < q - 1``;
    ``log_table[x]`` inverts it for ``x != 0`` and is ``-1`` at ``0``.
    """

    p: int
    k: int
    modulus: tuple[int, ...]
    generator: int
    exp_table: np.ndarray = field(repr=False)
    log_table: np.ndarray = field(repr=False)
    seed: int = 0
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def order(self) -> int:
        """Order of the multiplicative group."""
        return self.p**self.k - 1

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.k}, modulus={self.modulus_str()}, generator={self.generator})"

    def modulus_str(self) -> str:
        terms = []
        for i in range(len(self.modulus) - 1, -1, -1):
            c = self.modulus[i]
            if not c:
                continue
            mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
            terms.append(mono if c == 1 and i else (f"{c}" if i == 0 else f"{c}*{mono}"))
        return " + ".join(terms)

    def element_str(self, x: int) -> str:
        ds = self.digits(x)
        terms = []
        for i in range(len(ds) - 1, -1, -1):
            c = ds[i]
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mono = "x" if i == 1 else f"x^{i}"
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms) if terms else "0"

    # -- scalar arithmetic -------------------------------------------------

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(self, value)

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    def digits(self, x: int) -> list[int]:
        return _digits(x, self.p, self.k)

    def from_digits(self, ds: Sequence[int]) -> int:
        return _undigits([d % self.p for d in ds], self.p)

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` under Z -> GF(q)."""
        return n % self.p

    def check(self, x: int) -> int:
        if not 0 <= x < self.q:
            raise ValueError(f"{x} is not an element of GF({self.q})")
        return x

    def add(self, x: int, y: int) -> int:
        if self.p == 2:
            return x ^ y
        if self.k == 1:
            return (x + y) % self.p
        p = self.p
        out, mult = 0, 1
        while x or y:
            x, a = divmod(x, p)
            y, b = divmod(y, p)
            out += ((a + b) % p) * mult
            mult *= p
        return out

    def neg(self, x: int) -> int:
        if self.p == 2:
            return x
        if self.k == 1:
            return (-x) % self.p
        p = self.p
        out, mult = 0, 1
        while x:
            x, a = divmod(x, p)
            out += ((-a) % p) * mult
            mult *= p
        return out

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def log(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("log of zero")
        return int(self.log_table[x])

    def exp(self, i: int) -> int:
        return int(self.exp_table[i % self.order])

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        return int(self.exp_table[(int(self.log_table[x]) + int(self.log_table[y])) % self.order])

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return int(self.exp_table[(-int(self.log_table[x])) % self.order])

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def pow(self, x: int, e: int) -> int:
        if x == 0:
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if e == 0 else 0
        return int(self.exp_table[(int(self.log_table[x]) * e) % self.order])

    def poly_mul(self, x: int, y: int) -> int:
        """Multiply through the polynomial representation, bypassing the tables."""
        return self.from_digits(
            poly_mulmod(self.digits(x), self.digits(y), self.modulus, self.p)
        )

    def element_order(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("zero has no multiplicative order")
        lg = int(self.log_table[x])
        from math import gcd

        return self.order // gcd(self.order, lg)

    # -- vectorised arithmetic ---------------------------------------------

    def digits_array(self, x: np.ndarray) -> np.ndarray:
        """Shape ``x.shape + (k,)`` array of base-p digits."""
        x = np.asarray(x, dtype=np.int64)
        out = np.empty(x.shape + (self.k,), dtype=np.int64)
        for i in range(self.k):
            x, out[..., i] = np.divmod(x, self.p)
        return out

    def add_arrays(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        if self.p == 2:
            return x ^ y
        if self.k == 1:
            return (x + y) % self.p
        p = self.p
        out = np.zeros(np.broadcast_shapes(x.shape, y.shape), dtype=np.int64)
        mult = 1
        for _ in range(self.k):
            x, a = np.divmod(x, p)
            y, b = np.divmod(y, p)
            out += ((a + b) % p) * mult
            mult *= p
        return out

    def neg_arrays(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        if self.p == 2:
            return x.copy()
        if self.k == 1:
            return (-x) % self.p
        p = self.p
        out = np.zeros_like(x)
        mult = 1
        for _ in range(self.k):
            x, a = np.divmod(x, p)
            out += ((-a) % p) * mult
            mult *= p
        return out

    def mul_arrays(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        lx = self.log_table[x]
        ly = self.log_table[y]
        out = self.exp_table[(lx + ly) % self.order]
        return np.where((x == 0) | (y == 0), 0, out)


class FieldElement:
    """Convenience wrapper pairing an encoding with its field."""

    __slots__ = ("field", "value")

    def __init__(self, field: FieldDescriptor, value: int):
        self.field = field
        self.value = field.check(int(value))

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise ValueError("elements of different fields")
            return other.value
        return self.field.from_int(int(other))

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._other(other), self.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.value, self._other(other)))

    def __rtruediv__(self, other):
        return FieldElement(self.field, self.field.div(self._other(other), self.value))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return other.field is self.field and other.value == self.value
        if isinstance(other, int):
            return self.value == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.value))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.field.element_str(self.value)} in GF({self.field.q})"


# ---------------------------------------------------------------------------
# construction


def _seeded_start(seed: int, size: int) -> int:
    if seed == 0:
        return 0
    return random.Random(seed).randrange(size)


def _find_irreducible(p: int, degree: int, seed: int) -> tuple[int, ...]:
    size = p**degree
    start = _seeded_start(seed, size)
    for i in range(size):
        low = _digits((start + i) % size, p, degree)
        f = low + [1]
        if is_irreducible(f, p):
            return tuple(f)
    raise SearchExhausted(f"no irreducible polynomial of degree {degree} over GF({p})")


def _is_primitive(ds: list[int], f: Sequence[int], p: int, order: int, factors: list[int]) -> bool:
    if not _trim(list(ds)):
        return False
    if poly_powmod(ds, order, f, p) != [1]:
        return False
    return all(poly_powmod(ds, order // r, f, p) != [1] for r in factors)


def _find_generator(p: int, k: int, f: Sequence[int], seed: int) -> int:
    q = p**k
    order = q - 1
    factors = prime_factors(order) if order > 1 else []
    start = _seeded_start(seed, order)
    for i in range(order):
        cand = 1 + (start + i) % order
        if _is_primitive(_digits(cand, p, k), f, p, order, factors):
            return cand
    raise SearchExhausted(f"no primitive element in GF({q})")


def _power_columns(p: int, k: int, f: Sequence[int], g: int, count: int) -> np.ndarray:
    """Coefficient vectors of ``g**0 .. g**(count-1)`` as a ``(k, count)`` array."""
    gd = _digits(g, p, k)
    mat = np.zeros((k, k), dtype=np.int64)
    for j in range(k):
        col = poly_mulmod(gd, [0] * j + [1], f, p)
        mat[: len(col), j] = col
    cols = np.zeros((k, count), dtype=np.int64)
    cols[0, 0] = 1
    filled, step = 1, mat
    # doubling: columns [L, 2L) are M^L applied to columns [0, L)
    while filled < count:
        take = min(filled, count - filled)
        cols[:, filled : filled + take] = (step @ cols[:, :take]) % p
        filled += take
        step = (step @ step) % p
    return cols


def _build_field(p: int, k: int, seed: int, limit: int) -> FieldDescriptor:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if k < 1:
        raise ValueError("extension degree must be >= 1")
    q = p**k
    if q > limit:
        raise TableLimitExceeded(f"GF({p}^{k}) has {q} elements, limit is {limit}")
    modulus = _find_irreducible(p, k, seed)
    gen = _find_generator(p, k, modulus, seed)
    cols = _power_columns(p, k, modulus, gen, q - 1)
    weights = np.array([p**i for i in range(k)], dtype=np.int64)
    exp_table = weights @ cols
    log_table = np.full(q, -1, dtype=np.int64)
    log_table[exp_table] = np.arange(q - 1, dtype=np.int64)
    if q > 1 and (log_table[1:] < 0).any():
        raise SearchExhausted(f"generator {gen} of GF({q}) is not primitive")
    exp_table.setflags(write=False)
    log_table.setflags(write=False)
    return FieldDescriptor(p, k, modulus, gen, exp_table, log_table, seed)


@lru_cache(maxsize=64)
def _cached_field(p: int, k: int, seed: int, limit: int) -> FieldDescriptor:
    return _build_field(p, k, seed, limit)


def build_prime_field(p: int, seed: int = 0, limit: int = TABLE_LIMIT) -> FieldDescriptor:
    """GF(p) with a primitive root as generator."""
    return _cached_field(p, 1, seed, limit)


def build_extension(
    base: FieldDescriptor, degree: int, seed: int = 0, limit: int = TABLE_LIMIT
) -> FieldDescriptor:
    """GF(base.q ** degree), built directly over the prime field.

    Use :func:`embed` to relate it to ``base``.
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    q = base.q**degree
    if q > limit:
        raise LimitExceeded(f"GF({q}) exceeds the table limit {limit}")
    return _cached_field(base.p, base.k * degree, seed, limit)


def build_field(p: int, k: int, seed: int = 0, limit: int = TABLE_LIMIT) -> FieldDescriptor:
    return _cached_field(p, k, seed, limit)


def field_from_spec(spec: str, seed: int = 0, limit: int = TABLE_LIMIT) -> FieldDescriptor:
    p, k = parse_field_spec(spec)
    return build_field(p, k, seed, limit)


# ---------------------------------------------------------------------------
# embeddings


@dataclass(frozen=True, eq=False)
class TowerEmbedding:
    """Ring embedding ``sub -> big`` with inverse lookup on its image."""

    sub: FieldDescriptor
    big: FieldDescriptor
    root: int  # image of sub.generator
    forward: np.ndarray = field(repr=False)
    inverse: np.ndarray = field(repr=False)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def degree(self) -> int:
        return self.big.k // self.sub.k

    def to_big(self, v: int) -> int:
        return int(self.forward[v])

    def to_sub(self, x: int) -> int:
        v = int(self.inverse[x])
        if v < 0:
            raise NotInSubfieldImage(f"{x} is not in the image of GF({self.sub.q})")
        return v

    def in_image(self, x: int) -> bool:
        return int(self.inverse[x]) >= 0


def minimal_polynomial(fd: FieldDescriptor, x: int) -> tuple[int, ...]:
    """Minimal polynomial of ``x`` over GF(p), lowest degree first."""
    conj = [x]
    y = fd.pow(x, fd.p)
    while y != x:
        conj.append(y)
        y = fd.pow(y, fd.p)
    poly = [1]  # coefficients as field encodings
    for c in conj:
        # poly * (X - c)
        nc = fd.neg(c)
        out = [0] * (len(poly) + 1)
        for i, a in enumerate(poly):
            out[i + 1] = fd.add(out[i + 1], a)
            out[i] = fd.add(out[i], fd.mul(a, nc))
        poly = out
    if any(c >= fd.p for c in poly):
        raise RootNotFound("minimal polynomial has coefficients outside GF(p)")
    return tuple(poly)


def _eval_prime_poly(fd: FieldDescriptor, poly: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(poly):
        acc = fd.add(fd.mul(acc, x), c)
    return acc


def embed(sub: FieldDescriptor, big: FieldDescriptor) -> TowerEmbedding:
    """Embed ``sub`` into ``big`` by sending ``sub.generator`` to a root of its
    minimal polynomial in ``big``.

    Roots are searched in the canonical order ``h, h^2, ...`` of
    ``h = big.generator ** ((Q-1)/(q-1))``, i.e. over the elements whose order
    divides ``q - 1``.
    """
    if sub.p != big.p or big.k % sub.k != 0:
        raise NotASubfieldCardinality(f"GF({sub.q}) is not a subfield of GF({big.q})")
    if sub is big:
        ident = np.arange(sub.q, dtype=np.int64)
        return TowerEmbedding(sub, big, sub.generator, ident, ident)
    minpoly = minimal_polynomial(sub, sub.generator)
    step = big.order // sub.order
    root_log = None
    for j in range(1, sub.order + 1):
        cand = big.exp(j * step)
        if _eval_prime_poly(big, minpoly, cand) == 0:
            root_log = (j * step) % big.order
            break
    if root_log is None:
        raise RootNotFound(f"minimal polynomial of GF({sub.q}) generator has no root in GF({big.q})")
    forward = np.zeros(sub.q, dtype=np.int64)
    idx = np.arange(sub.order, dtype=np.int64)
    forward[sub.exp_table] = big.exp_table[(idx * root_log) % big.order]
    inverse = np.full(big.q, -1, dtype=np.int64)
    inverse[forward] = np.arange(sub.q, dtype=np.int64)
    forward.setflags(write=False)
    inverse.setflags(write=False)
    return TowerEmbedding(sub, big, big.exp(root_log), forward, inverse)


@lru_cache(maxsize=64)
def build_tower(p: int, k: int, m: int, seed: int = 0, limit: int = TABLE_LIMIT) -> TowerEmbedding:
    """GF(p^k) inside GF(p^(k m)), both built over GF(p) and then embedded."""
    sub = build_field(p, k, seed, limit)
    big = build_extension(sub, m, seed, limit)
    return embed(sub, big)


def tower_from_spec(spec: str, m: int, seed: int = 0, limit: int = TABLE_LIMIT) -> TowerEmbedding:
    p, k = parse_field_spec(spec)
    return build_tower(p, k, m, seed, limit)


def prime_subfield_embedding(fd: FieldDescriptor) -> TowerEmbedding:
    """GF(p) inside ``fd``; used for the absolute trace."""
    emb = fd._cache.get("prime_embedding")
    if emb is None:
        emb = embed(build_prime_field(fd.p, fd.seed), fd) if fd.k > 1 else embed(fd, fd)
        fd._cache["prime_embedding"] = emb
    return emb


# ---------------------------------------------------------------------------
# trace and norm


def trace_rel(emb: TowerEmbedding, alpha: int) -> int:
    """``alpha + alpha^q + ... + alpha^(q^(m-1))`` pulled back into the subfield."""
    big, q = emb.big, emb.sub.q
    acc, y = 0, alpha
    for _ in range(emb.degree):
        acc = big.add(acc, y)
        y = big.pow(y, q)
    return emb.to_sub(acc)


def norm_rel(emb: TowerEmbedding, alpha: int) -> int:
    if alpha == 0:
        return 0
    return emb.to_sub(emb.big.pow(alpha, emb.big.order // emb.sub.order))


def norm_of_base_element(emb: TowerEmbedding, v: int) -> int:
    """Norm of an element already in the subfield: ``v ** m``."""
    return emb.sub.pow(v, emb.degree)


def trace_table(emb: TowerEmbedding) -> np.ndarray:
    """Relative trace of every element of ``emb.big``, as subfield encodings.

    Uses GF(p)-linearity: the trace is fixed by its values on the polynomial
    basis ``x^j`` of the big field.
    """
    tab = emb._cache.get("trace")
    if tab is None:
        big, sub = emb.big, emb.sub
        basis_tr = [trace_rel(emb, big.p**j) for j in range(big.k)]
        tr_digits = np.array([sub.digits(t) for t in basis_tr], dtype=np.int64)  # (K, k)
        weights = np.array([sub.p**i for i in range(sub.k)], dtype=np.int64)
        coords = big.digits_array(np.arange(big.q, dtype=np.int64))  # (Q, K)
        tab = ((coords @ tr_digits) % big.p) @ weights
        tab.setflags(write=False)
        emb._cache["trace"] = tab
    return tab


def norm_table(emb: TowerEmbedding) -> np.ndarray:
    """Relative norm of every element of ``emb.big``, as subfield encodings."""
    tab = emb._cache.get("norm")
    if tab is None:
        big = emb.big
        e = big.order // emb.sub.order
        logs = big.log_table[1:]
        images = big.exp_table[(logs * e) % big.order]
        tab = np.zeros(big.q, dtype=np.int64)
        tab[1:] = emb.inverse[images]
        if (tab[1:] < 0).any():
            raise NotInSubfieldImage("norm landed outside the subfield image")
        tab.setflags(write=False)
        emb._cache["norm"] = tab
    return tab


def absolute_trace_table(fd: FieldDescriptor) -> np.ndarray:
    """Tr_{GF(q)/GF(p)} of every element, as integers in ``[0, p)``."""
    tab = fd._cache.get("abs_trace")
    if tab is None:
        tab = trace_table(prime_subfield_embedding(fd))
        fd._cache["abs_trace"] = tab
    return tab


def iter_nonzero_pairs(fd: FieldDescriptor) -> Iterator[tuple[int, int]]:
    for a in fd.nonzero():
        for b in fd.nonzero():
            yield a, b
