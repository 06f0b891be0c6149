from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from unitroot.padic import PadicScalar, PrecisionError
from unitroot.series import (
    PadicSeries,
    exp_weighted,
    log_series,
    lower_hull,
    newton_polygon,
    newton_polygon_from_valuations,
    scale_argument,
    series_divide,
)

P = 5
M = 20


def S(*vals, prec=M):
    return PadicSeries.from_integers(P, list(vals), prec)


def scalars(vals, prec=M):
    return [PadicScalar.from_rational(v, P, prec) for v in vals]


def test_exp_of_T():
    e = exp_weighted(scalars([1, 0, 0, 0, 0, 0]))
    for n, a in enumerate(e.coeffs):
        assert a.agrees_with(PadicScalar.from_rational(Fraction(1, factorial(n)), P, 40))
    # 1/5! loses one digit
    assert e[5].val == -1 and e[5].prec == M - 1


def test_log_of_one_plus_T():
    c = log_series(S(1, 1, 0, 0, 0))
    # log(1+T) = T - T^2/2 + T^3/3 - ..., so c_m = (-1)^(m+1)
    assert [x.residue() for x in c] == [1, P ** M - 1, 1, P ** M - 1]


def test_log_rejects_bad_constant():
    with pytest.raises(ValueError):
        log_series(S(2, 1))


@given(st.lists(st.integers(-10**6, 10**6), min_size=1, max_size=8))
@settings(max_examples=60)
def test_exp_log_roundtrip(cs):
    c = scalars(cs, 30)
    back = log_series(exp_weighted(c))
    for x, y in zip(c, back):
        assert x.agrees_with(y, 30 - 2)


def test_divide_examples():
    one_minus = S(1, -1, 0, 0, 0)
    geo = series_divide(S(1, 0, 0, 0, 0), one_minus)
    assert [x.residue() for x in geo.coeffs] == [1] * 5
    h = series_divide(S(1, 2, 1, 0), S(1, 1, 0, 0))
    assert [x.residue() for x in h.coeffs[:3]] == [1, 1, 0]
    assert h[3].is_zero()
    with pytest.raises(ValueError):
        series_divide(S(1, 0), S(5, 1))


@given(st.lists(st.integers(-1000, 1000), min_size=6, max_size=6),
       st.lists(st.integers(-1000, 1000), min_size=5, max_size=5))
@settings(max_examples=60)
def test_divide_then_multiply(f, gtail):
    g = S(1, *gtail)
    F = S(*f)
    assert (series_divide(F, g) * g).first_disagreement(F) is None


def test_newton_polygon_examples():
    np1 = newton_polygon_from_valuations([0, 0, 1, 3])
    assert np1.slopes() == [0, 1, 2]
    np2 = newton_polygon_from_valuations([0, 2, 2])
    assert np2.slopes() == [1, 1]
    np3 = newton_polygon_from_valuations([0, 1, 0])
    assert np3.slopes() == [0, 0]


def test_lower_hull_drops_collinear_points():
    assert lower_hull([(0, 0), (1, 1), (2, 2), (3, 5)]) == [(0, 0), (2, 2), (3, 5)]


def test_scaling_shifts_slopes():
    f = S(1, 3, 25, 7, 625 * 2)
    before = newton_polygon(f).slopes()
    after = newton_polygon(scale_argument(f, 1)).slopes()
    assert after == [s + 1 for s in before]


def test_inexact_zero_decertifies_vertex():
    # v = (0, ?, 3, >=2, 8): the unknown coefficient at index 3 could sink below (2, 3)
    vals = [PadicScalar.from_rational(1, P, M), PadicScalar.zero(P),
            PadicScalar.from_rational(P ** 3, P, M), PadicScalar.zero(P, 2),
            PadicScalar.from_rational(P ** 8, P, M)]
    np_ = newton_polygon(PadicSeries(P, vals))
    assert np_.vertices == ((0, 0), (2, 3), (4, 8))
    assert np_.certified == (True, False, True)
    assert np_.certified_multiplicity(Fraction(3, 2)) == 0


def test_exp_precision_exhausted():
    c = scalars([1] * 30, prec=1)
    with pytest.raises(PrecisionError):
        exp_weighted(c)


def test_truncate_precision_and_degree():
    f = S(1, 2, 3, 4)
    assert f.truncate(2).degree == 2
    assert f.truncate_precision(5).min_precision() == 5
