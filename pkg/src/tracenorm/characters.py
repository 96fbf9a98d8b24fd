"""Additive and multiplicative characters, Gauss sums, and the Gauss-sum
closed forms for the toric count and the trace/norm count.

Values are floating-point complex numbers carrying an explicit absolute error
bound.  Anything that claims an integer goes through :meth:`ComplexValue.to_int`,
which refuses to round when the bound does not single out one integer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotDivisible, RoundingFailure, ZeroArgument
from .fields import (
    FieldDescriptor,
    TowerEmbedding,
    absolute_trace_table,
    build_extension,
    embed,
    norm_table,
    trace_table,
)

EPS = float(np.finfo(float).eps)
# per-term error of exp(2*pi*i*r) for exactly reduced rational r
_TERM_ERR = 16 * EPS


def unit_sum_error(count: int) -> float:
    """Error bound for a pairwise sum of ``count`` unit-modulus terms."""
    if count <= 0:
        return 0.0
    return 4.0 * count * (_TERM_ERR + math.ceil(math.log2(count + 1)) * EPS)


@dataclass(frozen=True)
class ComplexValue:
    value: complex
    err: float = 0.0

    @classmethod
    def exact(cls, z) -> "ComplexValue":
        return cls(complex(z), 0.0)

    def __add__(self, other) -> "ComplexValue":
        if not isinstance(other, ComplexValue):
            other = ComplexValue.exact(other)
        s = self.value + other.value
        return ComplexValue(s, self.err + other.err + 2 * EPS * abs(s))

    __radd__ = __add__

    def __neg__(self) -> "ComplexValue":
        return ComplexValue(-self.value, self.err)

    def __sub__(self, other) -> "ComplexValue":
        if not isinstance(other, ComplexValue):
            other = ComplexValue.exact(other)
        return self + (-other)

    def __mul__(self, other) -> "ComplexValue":
        if not isinstance(other, ComplexValue):
            other = ComplexValue.exact(other)
        a, b = abs(self.value), abs(other.value)
        prod = self.value * other.value
        err = a * other.err + b * self.err + self.err * other.err + 4 * EPS * abs(prod)
        return ComplexValue(prod, err)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "ComplexValue":
        if e < 0:
            raise ValueError("negative powers are not supported")
        result = ComplexValue.exact(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conjugate(self) -> "ComplexValue":
        return ComplexValue(self.value.conjugate(), self.err)

    def residual(self) -> float:
        """Distance from the nearest Gaussian integer with zero imaginary part."""
        return abs(self.value - round(self.value.real))

    def to_int(self) -> int:
        """The unique integer within the error bound, or ``RoundingFailure``."""
        if self.err >= 0.5:
            raise RoundingFailure(f"accumulated error {self.err:.3g} >= 0.5")
        n = round(self.value.real)
        if abs(self.value - n) > max(self.err, 1e-300):
            raise RoundingFailure(
                f"{self.value} is not within {self.err:.3g} of an integer"
            )
        return int(n)

    def close_to(self, other: "ComplexValue") -> bool:
        return bool(abs(self.value - other.value) <= self.err + other.err)


def _phase_sum(num: np.ndarray, den: int) -> ComplexValue:
    """``sum exp(2 pi i num/den)`` with ``num`` reduced exactly mod ``den``."""
    r = (num % den).astype(np.float64) / den
    z = np.exp(2j * np.pi * r)
    return ComplexValue(complex(z.sum()), unit_sum_error(len(num)))


def _phase(num: int, den: int) -> ComplexValue:
    r = (num % den) / den
    return ComplexValue(complex(np.exp(2j * np.pi * r)), _TERM_ERR)


# ---------------------------------------------------------------------------
# characters


@dataclass(frozen=True, eq=False)
class MultiplicativeCharacter:
    """``chi_k(g^j) = exp(2 pi i k j / (q-1))`` for the field's stored generator g."""

    field: FieldDescriptor
    index: int

    def __post_init__(self):
        object.__setattr__(self, "index", self.index % self.field.order)

    def __eq__(self, other):
        return (
            isinstance(other, MultiplicativeCharacter)
            and other.field is self.field
            and other.index == self.index
        )

    def __hash__(self):
        return hash((id(self.field), self.index))

    @property
    def is_trivial(self) -> bool:
        return self.index == 0

    def __mul__(self, other: "MultiplicativeCharacter") -> "MultiplicativeCharacter":
        return MultiplicativeCharacter(self.field, self.index + other.index)

    def __pow__(self, e: int) -> "MultiplicativeCharacter":
        return MultiplicativeCharacter(self.field, self.index * e)

    def conjugate(self) -> "MultiplicativeCharacter":
        return MultiplicativeCharacter(self.field, -self.index)

    def __call__(self, x: int) -> ComplexValue:
        return mult_char_value(self, x)

    def __repr__(self):
        return f"chi_{self.index} on GF({self.field.q})"


def characters(fd: FieldDescriptor) -> list[MultiplicativeCharacter]:
    return [MultiplicativeCharacter(fd, k) for k in range(fd.order)]


def additive_char(fd: FieldDescriptor, x: int) -> ComplexValue:
    """Canonical additive character ``exp(2 pi i Tr(x) / p)``."""
    t = int(absolute_trace_table(fd)[x])
    if t == 0:
        return ComplexValue.exact(1)
    return _phase(t, fd.p)


def mult_char_value(chi: MultiplicativeCharacter, x: int) -> ComplexValue:
    if x == 0:
        raise ZeroArgument("multiplicative characters are evaluated on nonzero elements")
    fd = chi.field
    num = chi.index * fd.log(x)
    if num % fd.order == 0:
        return ComplexValue.exact(1)
    return _phase(num, fd.order)


def gauss_sum(chi: MultiplicativeCharacter) -> ComplexValue:
    """``G(chi) = sum over x != 0 of psi(x) chi(x)``."""
    fd = chi.field
    cache = fd._cache.setdefault("gauss", {})
    g = cache.get(chi.index)
    if g is None:
        xs = np.arange(1, fd.q, dtype=np.int64)
        tr = absolute_trace_table(fd)[xs]
        lg = fd.log_table[xs]
        # psi(x) chi(x) = exp(2 pi i (tr/p + k lg/(q-1)))
        num = tr * fd.order + chi.index * lg * fd.p
        g = _phase_sum(num, fd.p * fd.order)
        cache[chi.index] = g
    return g


def gauss_sums(fd: FieldDescriptor) -> list[ComplexValue]:
    return [gauss_sum(chi) for chi in characters(fd)]


# ---------------------------------------------------------------------------
# closed forms


def _character_sum(fd: FieldDescriptor, n: int, c: int) -> ComplexValue:
    """``sum_chi G(chi)^(n+1) G(conj(chi)^(n+1)) conj(chi)(c)``."""
    total = ComplexValue.exact(0)
    for chi in characters(fd):
        bar = chi.conjugate()
        term = gauss_sum(chi) ** (n + 1) * gauss_sum(bar ** (n + 1)) * mult_char_value(bar, c)
        total = total + term
    return total


def _signed_one(fd: FieldDescriptor, e: int) -> int:
    """``(-1)^e`` as a field element (equal to 1 in characteristic 2)."""
    return fd.pow(fd.neg(1), e)


def closed_form_toric_value(fd: FieldDescriptor, u: int, n: int) -> ComplexValue:
    """Numerical value of ``q(q-1) N(u)`` via Gauss sums."""
    if u == 0:
        raise ZeroArgument("u must be nonzero")
    c = fd.mul(_signed_one(fd, n + 1), u)
    return _character_sum(fd, n, c) + (fd.q - 1) ** (n + 1)


def closed_form_trace_norm_value(fd: FieldDescriptor, a: int, b: int, n: int) -> ComplexValue:
    """Numerical value of ``q(q-1) N_{n+1}(a, b)`` via Gauss sums."""
    if a == 0 or b == 0:
        raise ZeroArgument("a and b must be nonzero")
    c = fd.mul(_signed_one(fd, n + 1), fd.div(b, fd.pow(a, n + 1)))
    s = _character_sum(fd, n, c)
    if n % 2:
        s = -s
    return s + (fd.q ** (n + 1) - 1)


def _divide_exact(v: ComplexValue, fd: FieldDescriptor) -> int:
    total = v.to_int()
    den = fd.q * (fd.q - 1)
    if total % den:
        raise NotDivisible(f"{total} is not divisible by q(q-1) = {den}")
    return total // den


def closed_form_toric(fd: FieldDescriptor, u: int, n: int) -> int:
    """``N(u)`` computed from Gauss sums alone."""
    return _divide_exact(closed_form_toric_value(fd, u, n), fd)


def closed_form_trace_norm(fd: FieldDescriptor, a: int, b: int, n: int) -> int:
    """``N_{n+1}(a, b)`` computed from Gauss sums alone."""
    return _divide_exact(closed_form_trace_norm_value(fd, a, b, n), fd)


# ---------------------------------------------------------------------------
# Davenport-Hasse


def lifted_gauss_sum(emb: TowerEmbedding, chi: MultiplicativeCharacter) -> ComplexValue:
    """``sum over x in big* of psi(Tr x) chi(Norm x)``, by enumeration of the big field."""
    if chi.field is not emb.sub:
        raise ValueError("character must live on the subfield of the tower")
    sub, big = emb.sub, emb.big
    xs = np.arange(1, big.q, dtype=np.int64)
    tr = absolute_trace_table(sub)[trace_table(emb)[xs]]
    lg = sub.log_table[norm_table(emb)[xs]]
    num = tr * sub.order + chi.index * lg * sub.p
    return _phase_sum(num, sub.p * sub.order)


def _tower_for(chi: MultiplicativeCharacter, m: int) -> TowerEmbedding:
    fd = chi.field
    return embed(fd, build_extension(fd, m, fd.seed))


def davenport_hasse_sides(
    chi: MultiplicativeCharacter, m: int, emb: TowerEmbedding | None = None
) -> tuple[ComplexValue, ComplexValue]:
    """Both sides of ``sum psi_m(x) chi(Norm x) = (-1)^(m-1) G(chi)^m``."""
    if emb is None:
        emb = _tower_for(chi, m)
    if emb.degree != m:
        raise ValueError(f"tower has degree {emb.degree}, expected {m}")
    lhs = lifted_gauss_sum(emb, chi)
    rhs = gauss_sum(chi) ** m
    if (m - 1) % 2:
        rhs = -rhs
    return lhs, rhs


def davenport_hasse_check(
    chi: MultiplicativeCharacter, m: int, emb: TowerEmbedding | None = None
) -> bool:
    lhs, rhs = davenport_hasse_sides(chi, m, emb)
    if lhs.err + rhs.err >= 0.5:
        raise RoundingFailure("error budget too large to decide the identity")
    return bool(lhs.close_to(rhs))
