import cmath

import pytest

from tracenorm.characters import (
    ComplexValue,
    MultiplicativeCharacter,
    additive_char,
    characters,
    closed_form_toric,
    closed_form_toric_value,
    closed_form_trace_norm,
    davenport_hasse_check,
    davenport_hasse_sides,
    gauss_sum,
    mult_char_value,
)
from tracenorm.errors import RoundingFailure, ZeroArgument
from tracenorm.fields import build_field, build_tower, trace_rel

from oracles import toric_count_prime, trace_norm_table_prime

FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (11, 1), (13, 1)]


def zeta(k, n):
    return cmath.exp(2j * cmath.pi * k / n)


def test_additive_character_examples():
    assert additive_char(build_field(2, 1), 0).value == 1
    assert abs(additive_char(build_field(2, 1), 1).value + 1) < 1e-15
    gf4 = build_field(2, 2)
    emb = build_tower(2, 1, 2)
    for w in (2, 3):
        assert trace_rel(emb, w) == 1
        assert abs(additive_char(gf4, w).value + 1) < 1e-15


def test_multiplicative_character_examples():
    f3 = build_field(3, 1)
    for x in (1, 2):
        assert mult_char_value(MultiplicativeCharacter(f3, 0), x).value == 1
    assert abs(mult_char_value(MultiplicativeCharacter(f3, 1), 2).value + 1) < 1e-15
    f5 = build_field(5, 1)
    lg = next(j for j in range(4) if pow(f5.generator, j, 5) == 4)
    assert abs(mult_char_value(MultiplicativeCharacter(f5, 2), 4).value - zeta(2 * lg, 4)) < 1e-15
    with pytest.raises(ZeroArgument):
        mult_char_value(MultiplicativeCharacter(f5, 1), 0)


def test_character_group_structure():
    fd = build_field(7, 1)
    a, b = MultiplicativeCharacter(fd, 2), MultiplicativeCharacter(fd, 5)
    assert (a * b).index == 1
    assert a.conjugate().index == 4
    assert MultiplicativeCharacter(fd, 6).is_trivial
    for x in fd.nonzero():
        assert abs((a * b)(x).value - a(x).value * b(x).value) < 1e-14


@pytest.mark.parametrize("p,k", FIELDS)
def test_orthogonality(p, k):
    fd = build_field(p, k)
    for chi in characters(fd)[1:]:
        assert abs(sum(chi(x).value for x in fd.nonzero())) < 1e-12
    assert abs(sum(additive_char(fd, x).value for x in fd.elements())) < 1e-12


def test_gauss_sum_quadratic_mod_three_by_direct_summation():
    f3 = build_field(3, 1)
    chi = MultiplicativeCharacter(f3, 1)
    # psi(1) chi(1) + psi(2) chi(2) = z3 - z3^2
    expected = zeta(1, 3) - zeta(2, 3)
    g = gauss_sum(chi)
    assert abs(g.value - expected) < 1e-14
    assert abs(abs(g.value) ** 2 - 3) < 1e-12


@pytest.mark.parametrize("p,k", FIELDS + [(2, 6), (3, 3), (61, 1)])
def test_gauss_sum_modulus_and_trivial(p, k):
    fd = build_field(p, k)
    q = fd.q
    assert gauss_sum(MultiplicativeCharacter(fd, 0)).to_int() == -1
    for chi in characters(fd)[1:]:
        g = gauss_sum(chi)
        assert abs(abs(g.value) ** 2 - q) < 1e-6
        # G(chi) G(conj chi) = chi(-1) q
        prod = g * gauss_sum(chi.conjugate())
        assert abs(prod.value - chi(fd.neg(1)).value * q) <= prod.err + 1e-12


def test_complex_value_rounding_gate():
    assert ComplexValue(3.0000000001, 1e-9).to_int() == 3
    with pytest.raises(RoundingFailure):
        ComplexValue(3.0, 0.5).to_int()
    with pytest.raises(RoundingFailure):
        ComplexValue(3.2, 1e-9).to_int()
    with pytest.raises(RoundingFailure):
        ComplexValue(3 + 0.1j, 1e-9).to_int()


def test_complex_value_error_propagation():
    a = ComplexValue(2.0, 1e-10)
    b = ComplexValue(3.0, 2e-10)
    assert (a + b).err >= 3e-10
    assert (a * b).err >= 2 * 2e-10 + 3 * 1e-10
    assert (a**3).err > a.err


# -- closed forms -----------------------------------------------------------


def test_closed_form_toric_examples():
    assert closed_form_toric(build_field(2, 1), 1, 1) == 0
    assert closed_form_toric(build_field(3, 1), 1, 2) == 0
    assert closed_form_toric(build_field(3, 1), 2, 1) == 0
    assert toric_count_prime(3, 2, 1) == 0


def test_closed_form_trace_norm_examples():
    assert closed_form_trace_norm(build_field(2, 1), 1, 1, 1) == 2
    assert trace_norm_table_prime(2, 2)[(1, 1)] == 2
    assert closed_form_trace_norm(build_field(3, 1), 1, 1, 2) == 3
    assert trace_norm_table_prime(3, 3)[(1, 1)] == 3


@pytest.mark.parametrize("p,n", [(5, 1), (5, 2), (7, 2), (5, 3), (3, 4)])
def test_closed_form_toric_matches_integer_oracle(p, n):
    fd = build_field(p, 1)
    for u in fd.nonzero():
        assert closed_form_toric(fd, u, n) == toric_count_prime(p, u, n)


@pytest.mark.parametrize("p,n", [(5, 1), (5, 2), (7, 2), (3, 3)])
def test_closed_form_trace_norm_matches_polynomial_oracle(p, n):
    fd = build_field(p, 1)
    table = trace_norm_table_prime(p, n + 1)
    for a in fd.nonzero():
        for b in fd.nonzero():
            assert closed_form_trace_norm(fd, a, b, n) == table.get((a, b), 0)


def test_closed_form_values_are_divisible_integers():
    fd = build_field(2, 3)
    v = closed_form_toric_value(fd, 3, 3)
    assert v.to_int() % (fd.q * (fd.q - 1)) == 0
    assert v.residual() < 1e-6


# -- Davenport-Hasse --------------------------------------------------------


def test_davenport_hasse_trivial_character_q2():
    fd = build_field(2, 1)
    lhs, rhs = davenport_hasse_sides(MultiplicativeCharacter(fd, 0), 2)
    assert lhs.to_int() == -1 and rhs.to_int() == -1


def test_davenport_hasse_quadratic_q3_m2_by_direct_sum():
    fd = build_field(3, 1)
    chi = MultiplicativeCharacter(fd, 1)
    emb = build_tower(3, 1, 2)
    from tracenorm.fields import norm_rel

    direct = sum(
        additive_char(fd, trace_rel(emb, x)).value * chi(norm_rel(emb, x)).value
        for x in emb.big.nonzero()
    )
    lhs, rhs = davenport_hasse_sides(chi, 2, emb)
    assert abs(lhs.value - direct) < 1e-12
    assert davenport_hasse_check(chi, 2, emb)


def test_davenport_hasse_gf4_cubed():
    fd = build_field(2, 2)
    assert all(davenport_hasse_check(chi, 3) for chi in characters(fd))


def test_davenport_hasse_rejects_wrong_degree():
    fd = build_field(3, 1)
    with pytest.raises(ValueError):
        davenport_hasse_sides(MultiplicativeCharacter(fd, 1), 3, build_tower(3, 1, 2))
