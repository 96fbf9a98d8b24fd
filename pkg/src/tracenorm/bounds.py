"""Bound and divisibility predicates over count records.

Every radius has the form ``A + B*sqrt(q)`` with rational ``A, B >= 0``; all
verdicts are decided with exact rational/integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .counting import CountRecord, main_term_toric, main_term_trace_norm
from .errors import (
    BadHypothesis,
    CharacteristicDividesDegree,
    NotPrime,
    NotSpecialU,
)
from .fields import FieldDescriptor, is_prime, prime_power


def _sign_surd(x: Fraction, y: Fraction, q: int) -> int:
    """Sign of ``x + y*sqrt(q)``, exactly."""
    if y == 0:
        return (x > 0) - (x < 0)
    if x == 0:
        return (y > 0) - (y < 0)
    if (x > 0) == (y > 0):
        return 1 if x > 0 else -1
    # opposite signs: compare x^2 with y^2 q
    diff = x * x - y * y * q
    if diff == 0:
        return 0
    return (1 if diff > 0 else -1) * (1 if x > 0 else -1)


@dataclass(frozen=True)
class SurdRadius:
    """The real number ``rational + sqrt_coeff * sqrt(q)``."""

    rational: Fraction
    sqrt_coeff: Fraction
    q: int

    @classmethod
    def power_of_root_q(cls, coeff, q: int, twice_exp: int) -> "SurdRadius":
        """``coeff * q^(twice_exp / 2)``."""
        coeff = Fraction(coeff)
        if twice_exp % 2 == 0:
            return cls(coeff * q ** (twice_exp // 2), Fraction(0), q)
        return cls(Fraction(0), coeff * q ** ((twice_exp - 1) // 2), q)

    def __add__(self, other: "SurdRadius") -> "SurdRadius":
        assert self.q == other.q
        return SurdRadius(self.rational + other.rational, self.sqrt_coeff + other.sqrt_coeff, self.q)

    def __float__(self) -> float:
        return float(self.rational) + float(self.sqrt_coeff) * self.q**0.5

    def compare(self, value: Fraction) -> int:
        """Sign of ``self - value``."""
        return _sign_surd(self.rational - value, self.sqrt_coeff, self.q)

    def __le__(self, other: "SurdRadius") -> bool:
        return _sign_surd(other.rational - self.rational, other.sqrt_coeff - self.sqrt_coeff, self.q) >= 0

    def __lt__(self, other: "SurdRadius") -> bool:
        return _sign_surd(other.rational - self.rational, other.sqrt_coeff - self.sqrt_coeff, self.q) > 0

    def __str__(self) -> str:
        parts = []
        if self.rational:
            parts.append(str(self.rational))
        if self.sqrt_coeff:
            parts.append(f"{self.sqrt_coeff}*sqrt({self.q})")
        return " + ".join(parts) or "0"


@dataclass(frozen=True)
class BoundVerdict:
    bound_name: str
    center: Fraction
    radius: SurdRadius
    deviation: Fraction
    holds: bool
    tight: bool

    @property
    def ratio(self) -> float:
        """``deviation^2 / radius^2`` (inf for a zero radius with nonzero deviation)."""
        r = float(self.radius)
        if r == 0:
            return 0.0 if self.deviation == 0 else float("inf")
        return float(self.deviation) ** 2 / r**2

    def __bool__(self) -> bool:
        return self.holds


def verdict(name: str, observed: int | Fraction, center, radius: SurdRadius) -> BoundVerdict:
    center = Fraction(center)
    dev = abs(Fraction(observed) - center)
    holds = radius.compare(dev) >= 0
    # tight: dev >= radius - 1, i.e. dev^2 >= (radius - 1)^2 clamped at 0
    tight = _sign_surd(dev - radius.rational + 1, -radius.sqrt_coeff, radius.q) >= 0
    return BoundVerdict(name, center, radius, dev, holds, tight)


def _require_nonzero(record: CountRecord) -> None:
    if record.a == 0 or record.b == 0:
        raise BadHypothesis("this bound needs a and b nonzero")


def katz_radius(q: int, n: int) -> SurdRadius:
    return SurdRadius.power_of_root_q(n + 1, q, n - 1)


def improved_radius(q: int, n: int) -> SurdRadius:
    return SurdRadius.power_of_root_q(n, q, n - 1)


def katz_bound(record: CountRecord) -> BoundVerdict:
    """``|N_{n+1}(a,b) - (q^(n+1)-1)/(q(q-1))| <= (n+1) q^((n-1)/2)``."""
    _require_nonzero(record)
    q, n = record.q, record.n
    center = Fraction(q ** (n + 1) - 1, q * (q - 1))
    return verdict("katz", record.N_trace_norm, center, katz_radius(q, n))


def improved_bound(record: CountRecord) -> BoundVerdict:
    """``|N_{n+1}(a,b) - (q^n-1)/(q-1)| <= n q^((n-1)/2)``."""
    _require_nonzero(record)
    q, n = record.q, record.n
    return verdict("improved", record.N_trace_norm, main_term_trace_norm(q, n), improved_radius(q, n))


def improved_implies_katz(q: int, n: int) -> bool:
    """Distance between the two centres plus the improved radius fits in Katz's radius."""
    gap = abs(Fraction(main_term_trace_norm(q, n)) - Fraction(q ** (n + 1) - 1, q * (q - 1)))
    widened = improved_radius(q, n) + SurdRadius(gap, Fraction(0), q)
    return widened <= katz_radius(q, n)


def zero_trace_bound(fd: FieldDescriptor, b: int, n: int, count: int) -> BoundVerdict:
    """``|N_{n+1}(0,b) - (q^n-1)/(q-1)| <= (d-1) q^((n-1)/2)``, ``d = gcd(n+1, q-1)``."""
    if b == 0:
        raise BadHypothesis("b must be nonzero")
    q = fd.q
    d = gcd(n + 1, q - 1)
    radius = SurdRadius.power_of_root_q(d - 1, q, n - 1)
    return verdict("zero_trace", count, main_term_trace_norm(q, n), radius)


def toric_bound(record: CountRecord) -> BoundVerdict:
    """``|N(u) - ((q-1)^n - (-1)^n)/q| <= n q^((n-1)/2)``."""
    if record.N_toric is None:
        raise BadHypothesis("record has no toric count")
    q, n = record.q, record.n
    return verdict("toric", record.N_toric, main_term_toric(q, n), improved_radius(q, n))


def frobenius_trace_bound(record: CountRecord) -> BoundVerdict:
    """``|T(u)| <= n q^((n-1)/2)``."""
    if record.frobenius_trace is None:
        raise BadHypothesis("record has no Frobenius trace")
    return verdict("frobenius", record.frobenius_trace, 0, improved_radius(record.q, record.n))


def special_u(fd: FieldDescriptor, n: int) -> int:
    """``(n+1)^(-(n+1))`` in GF(q)."""
    if (n + 1) % fd.p == 0:
        raise CharacteristicDividesDegree(f"p = {fd.p} divides n + 1 = {n + 1}")
    return fd.inv(fd.pow(fd.from_int(n + 1), n + 1))


def special_radius(q: int, n: int, refined: bool = True) -> SurdRadius:
    """``(n-1) q^((n-1)/2)``, or for even n with ``refined``,
    ``(n-2) q^((n-1)/2) + q^((n-2)/2)``."""
    if refined and n % 2 == 0:
        return SurdRadius.power_of_root_q(n - 2, q, n - 1) + SurdRadius.power_of_root_q(1, q, n - 2)
    return SurdRadius.power_of_root_q(n - 1, q, n - 1)


def special_u_bound(record: CountRecord, fd: FieldDescriptor, refined: bool = True) -> BoundVerdict:
    """Sharper toric bound at ``u = (n+1)^(-(n+1))``."""
    if record.N_toric is None:
        raise BadHypothesis("record has no toric count")
    n = record.n
    su = special_u(fd, n)
    if record.u != su:
        raise NotSpecialU(f"u = {record.u} is not (n+1)^-(n+1) = {su}")
    name = "special_even" if refined and n % 2 == 0 else "special"
    return verdict(name, record.N_toric, main_term_toric(record.q, n), special_radius(record.q, n, refined))


def prime_degree_interval(q: int, ell: int) -> tuple[int, int]:
    """``ell*ceil((M - r)/ell), ell*floor((M + r)/ell)`` with
    ``M = (q^(ell-1)-1)/(q-1)`` and ``r = (ell-1) q^((ell-2)/2)``."""
    if ell < 3 or not is_prime(ell):
        raise NotPrime(f"{ell} is not a prime >= 3")
    prime_power(q)
    main = main_term_trace_norm(q, ell - 1)
    # r = c*sqrt(q) since ell - 2 is odd
    c = (ell - 1) * q ** ((ell - 3) // 2)
    s = isqrt(c * c * q)  # floor(r); ceil(-r) = -floor(r)
    low_int = main - s  # ceil(M - r)
    high_int = main + s  # floor(M + r)
    low = ell * -((-low_int) // ell)
    high = ell * (high_int // ell)
    return low, high


def fixed_point_count(fd: FieldDescriptor, ell: int, a: int, b: int) -> int:
    """``R = #{c in GF(q) : ell*c = a, c^ell = b}``."""
    lf = fd.from_int(ell)
    if lf == 0:
        return 0 if a else sum(1 for c in fd.elements() if fd.pow(c, ell) == b)
    c = fd.div(a, lf)
    return 1 if fd.pow(c, ell) == b else 0


def divisibility_check(fd: FieldDescriptor, ell: int, a: int, b: int, count: int) -> bool:
    """``(N_ell(a, b) - R) = 0 mod ell``."""
    if not is_prime(ell):
        raise NotPrime(f"{ell} is not prime")
    if a == 0 or b == 0:
        raise BadHypothesis("a and b must be nonzero")
    return (count - fixed_point_count(fd, ell, a, b)) % ell == 0


def interval_check(record: CountRecord) -> bool:
    """Does ``N_ell(a, b)`` (``ell = n + 1``) lie in :func:`prime_degree_interval`?"""
    _require_nonzero(record)
    low, high = prime_degree_interval(record.q, record.n + 1)
    return low <= record.N_trace_norm <= high
