from fractions import Fraction

import pytest

from unitroot.errors import ConfigError
from unitroot.exact import quad_pow
from unitroot.padic import PadicScalar
from unitroot.trace import (
    build_D,
    build_L,
    compute_A,
    compute_C_exact,
    compute_C_padic,
    embed,
    enumerate_terms,
    validate_parameters,
    working_precision,
)

from oracles import naive_A


@pytest.mark.parametrize("p, N", [(2, 7), (9, 7), (5, 4), (5, 10), (3, 6), (5, 5)])
def test_validate_rejects(p, N):
    with pytest.raises(ConfigError):
        validate_parameters(p, N)


def test_working_precision():
    assert working_precision(5, 6, 20) == 23
    assert working_precision(5, 4, 20) == 22
    assert working_precision(3, 9, 20) == 24


@pytest.mark.parametrize("p, N, m, count", [(5, 7, 1, 10), (3, 5, 1, 4)])
def test_term_counts(p, N, m, count):
    assert len(enumerate_terms(p, N, m)) == count


def test_distinct_traces_m2():
    assert len({term.t for term in enumerate_terms(5, 7, 2)}) == 16


def test_terms_are_consistent():
    for term in enumerate_terms(5, 7, 2):
        assert term.t * term.t - 4 * 25 == term.f ** 2 * term.d_K
        assert term.f % term.c == 0 and term.h >= 1 and term.B >= 0
        g = term.gamma_padic(20)
        assert g.val == 0 and (g - term.t).val >= 1
        ge = term.gamma_exact
        assert ge * ge - ge * term.t + 25 == 0


@pytest.mark.parametrize("p, N, m, k, M", [(5, 7, 1, 2, 20), (5, 7, 2, -3, 12), (3, 5, 2, 4, 15), (7, 5, 1, 0, 10)])
def test_A_matches_integer_oracle(p, N, m, k, M):
    assert compute_A(p, N, m, k, M).residue() == naive_A(p, N, m, k, M)


def test_C_relation_and_embedding():
    p, N, M = 5, 7, 20
    for m in range(1, 4):
        for k in range(-2, 5):
            direct = compute_A(p, N, m, k + 2, M) - compute_A(p, N, m, k, M) * p ** m
            assert direct.agrees_with(compute_C_padic(p, N, m, k, M), M)
            assert embed(compute_C_exact(p, N, m, k), p, M).agrees_with(direct, M)


def test_C_at_k0_is_rational():
    for m in (1, 2, 3):
        c = compute_C_exact(5, 7, m, 0)
        assert not c.support()
        assert c.rational_part().denominator == 1


def test_negative_k_uses_conjugate_over_norm():
    term = enumerate_terms(5, 7, 1)[0]
    g = term.gamma_exact
    gbar = g.conjugate()
    q = term.norm
    for k in (1, 2, 5):
        assert term.gamma_power(-k) == quad_pow(gbar, k, term.t, q) * Fraction(1, q ** k)


def test_D_is_integral_and_truncates():
    hi = build_D(5, 7, 2, 6, 25)
    lo = build_D(5, 7, 2, 6, 20)
    assert hi.is_integral() and lo.is_integral()
    assert hi.truncate_precision(20) == lo


def test_L_routes_agree():
    res = build_L(5, 7, 2, 5, 15)
    assert res.agreement
    assert res.series.is_integral()
    assert res.series == res.other


def test_single_route():
    exp_only = build_L(5, 7, 2, 4, 12, route="exp")
    quot_only = build_L(5, 7, 2, 4, 12, route="quot")
    assert exp_only.agreement is None
    assert exp_only.series == quot_only.series


def test_bad_route():
    with pytest.raises(ConfigError):
        build_L(5, 7, 2, 4, 12, route="sideways")
