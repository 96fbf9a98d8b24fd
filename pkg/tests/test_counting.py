import pytest
from hypothesis import given, settings, strategies as st

from tracenorm.counting import (
    count_toric,
    count_toric_ext,
    count_toric_naive,
    count_trace_norm,
    frobenius_trace,
    lemma21_check,
    main_term_toric,
    main_term_trace_norm,
    partition_identities,
    toric_counts_by_system,
    toric_from_frobenius_trace,
    toric_parameter,
    trace_norm_histogram,
)
from tracenorm.errors import BudgetExceeded, ZeroU
from tracenorm.fields import build_field, build_tower

from oracles import toric_count_poly, toric_count_prime, trace_norm_table_prime

# (p, k, n) with q^(n+1) small enough for quick enumeration
TOWERS = [(2, 1, 1), (2, 1, 3), (3, 1, 2), (2, 2, 2), (5, 1, 2), (5, 1, 3), (7, 1, 2), (3, 2, 2), (2, 3, 2)]


def test_trace_norm_zero_norm_cases():
    tower = build_tower(3, 1, 3)
    assert count_trace_norm(tower, 0, 0) == 1
    assert count_trace_norm(tower, 1, 0) == 0
    assert count_trace_norm(tower, 2, 0) == 0


def test_trace_norm_gf4():
    assert count_trace_norm(build_tower(2, 1, 2), 1, 1) == 2


@pytest.mark.parametrize("p,m", [(2, 2), (2, 4), (3, 2), (3, 3), (5, 2), (5, 3), (7, 3), (3, 5)])
def test_trace_norm_matches_polynomial_oracle(p, m):
    tower = build_tower(p, 1, m)
    table = trace_norm_table_prime(p, m)
    for a in range(p):
        for b in range(p):
            assert count_trace_norm(tower, a, b) == table.get((a, b), 0)


def test_toric_examples():
    assert count_toric(build_field(2, 1), 1, 1) == 0
    assert count_toric(build_field(3, 1), 1, 2) == 0
    assert toric_count_prime(3, 1, 2) == 0


@pytest.mark.parametrize("p,k", [(2, 1), (3, 1), (2, 2), (5, 1), (2, 3), (3, 2), (13, 1)])
def test_toric_n1_at_most_two(p, k):
    fd = build_field(p, k)
    for u in fd.nonzero():
        assert count_toric(fd, u, 1) in (0, 1, 2)


@pytest.mark.parametrize("p,n", [(3, 3), (5, 2), (5, 3), (7, 2), (7, 3), (11, 2)])
def test_toric_matches_integer_oracle(p, n):
    fd = build_field(p, 1)
    for u in fd.nonzero():
        assert count_toric(fd, u, n) == toric_count_prime(p, u, n)


@pytest.mark.parametrize("p,k,n", [(2, 2, 2), (3, 2, 2), (2, 3, 3), (2, 2, 3)])
def test_reduced_full_and_system_counts_agree(p, k, n):
    fd = build_field(p, k)
    sysc = toric_counts_by_system(fd, n)
    for u in fd.nonzero():
        fast = count_toric(fd, u, n)
        assert fast == count_toric(fd, u, n, full=True) == count_toric_naive(fd, u, n)
        assert fast == sysc[u]


def test_toric_over_prime_power_matches_polynomial_oracle():
    fd = build_field(3, 2)
    f = fd.modulus
    for u in (1, 2, 5):
        assert count_toric(fd, u, 2) == toric_count_poly(3, f, tuple(fd.digits(u)), 2)


def test_parallel_equals_serial():
    fd = build_field(13, 1)
    for u in (1, 5, 12):
        assert count_toric(fd, u, 4, workers=4) == count_toric(fd, u, 4, workers=1)


def test_toric_errors():
    fd = build_field(5, 1)
    with pytest.raises(ZeroU):
        count_toric(fd, 0, 2)
    with pytest.raises(BudgetExceeded):
        count_toric(fd, 1, 3, budget=10)
    with pytest.raises(BudgetExceeded):
        trace_norm_histogram(build_tower(5, 1, 4), budget=10)


def test_toric_ext_examples():
    f2 = build_field(2, 1)
    assert count_toric_ext(f2, 1, 1, 1) == count_toric(f2, 1, 1)
    assert count_toric_ext(f2, 1, 1, 2) == 2
    # 64 tuples over GF(9)*, checked against schoolbook GF(9) = GF(3)[x]/(x^2+1)
    assert toric_count_poly(3, (1, 0, 1), (1, 0), 2) == 12
    assert count_toric_ext(build_field(3, 1), 1, 2, 2) == 12


# -- Frobenius trace --------------------------------------------------------


def test_frobenius_trace_examples():
    assert frobenius_trace(3, 2, 0) == 1
    assert frobenius_trace(2, 1, 0) == -1
    for nu in (0, 1, 2):
        assert frobenius_trace(7, 1, nu) == nu - 1
    assert all(type(frobenius_trace(5, n, 3)) is int for n in range(1, 6))


@settings(max_examples=200)
@given(st.integers(2, 50), st.integers(1, 7), st.integers(-10**6, 10**6))
def test_frobenius_trace_round_trip(q, n, t):
    assert frobenius_trace(q, n, toric_from_frobenius_trace(q, n, t)) == t
    # |N - main| = |T|
    assert abs(toric_from_frobenius_trace(q, n, t) - main_term_toric(q, n)) == abs(t)


@settings(max_examples=200)
@given(st.integers(2, 200), st.integers(1, 10))
def test_main_terms_are_integers(q, n):
    assert main_term_trace_norm(q, n) * (q - 1) == q**n - 1
    assert main_term_toric(q, n) * q == (q - 1) ** n - (-1) ** n


# -- Lemma identity ---------------------------------------------------------


def test_lemma_examples():
    ok, rec = lemma21_check(build_tower(2, 1, 2), 1, 1)
    assert ok and rec.N_trace_norm == 2 and rec.N_toric == 0
    assert rec.N_trace_norm == 1 + (-1) * (0 - 1)
    ok, rec = lemma21_check(build_tower(3, 1, 3), 1, 1)
    assert ok and rec.N_trace_norm == 3 and rec.N_toric == 0


def test_lemma_all_pairs_q5_n2():
    tower = build_tower(5, 1, 3)
    results = [lemma21_check(tower, a, b)[0] for a in range(1, 5) for b in range(1, 5)]
    assert len(results) == 16 and all(results)


@pytest.mark.parametrize("p,k,n", TOWERS)
def test_count_depends_only_on_u(p, k, n):
    tower = build_tower(p, k, n + 1)
    fd = tower.sub
    by_u = {}
    for a in fd.nonzero():
        for b in fd.nonzero():
            u = toric_parameter(fd, a, b, n)
            by_u.setdefault(u, set()).add(count_trace_norm(tower, a, b))
    assert all(len(v) == 1 for v in by_u.values())


@pytest.mark.parametrize("p,k,n", TOWERS)
def test_partition_identities(p, k, n):
    assert partition_identities(build_tower(p, k, n + 1))


def test_partition_sums_explicit():
    tower = build_tower(3, 1, 3)
    hist = trace_norm_histogram(tower)
    q, m = 3, 3
    for a in range(q):
        assert hist[a, 1:].sum() == q ** (m - 1) - (a == 0)
    for b in range(1, q):
        assert hist[:, b].sum() == (q**m - 1) // (q - 1)
    assert hist[:, 1:].sum() == q**m - 1
