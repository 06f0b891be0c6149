"""Class-number trace formula for the U_p characteristic series and the unit root L-function.

For ``m >= 1`` the p-adic units of norm ``p^m`` generating imaginary quadratic
fields are parameterized by their traces ``t`` with ``p !| t`` and
``t^2 < 4p^m``; each ``gamma`` is the unit root of ``x^2 - t x + p^m``.  For
every order ``O`` containing ``gamma`` we record ``h(O)`` and the number of
points of exact order ``N`` in ``O/NO`` fixed by ``p^m/gamma``.  Then

    A_m(k) = sum h(O) B_N(O, gamma) gamma^k / (gamma^2 - p^m)
    C_m(k) = sum h(O) B_N(O, gamma) gamma^k = A_m(k+2) - p^m A_m(k)
    D(k, T) = exp(sum A_m(k) T^m / m)
    L(k, T) = exp(sum C_m(k) T^m / m) = D(k+2, T) / D(k, pT)
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Optional

from sympy import divisors, isprime

from .errors import ConfigError, InvariantError, RouteDisagreement
from .exact import MultiQuadElement, QuadElement, quad_pow, squarefree_decompose
from .orders import (
    OrderSpec,
    bn_count,
    class_number,
    class_number_cache,
    clear_class_numbers,
    conjugate_in_order,
    fundamental_discriminant,
    root_in_order,
    seed_class_numbers,
)
from .padic import PadicScalar, hensel_sqrt, hensel_unit_root, sqrt_branch
from .series import NewtonPolygon, PadicSeries, exp_weighted, newton_polygon, scale_argument, series_divide

log = logging.getLogger(__name__)

ROUTES = ("exp", "quot", "both")


def validate_parameters(p: int, N: int) -> None:
    if not isinstance(p, int) or p <= 2 or not isprime(p):
        raise ConfigError(f"p must be an odd prime, got {p}")
    if not isinstance(N, int) or N <= 4:
        raise ConfigError(f"N must be an integer > 4, got {N}")
    if gcd(N, p) != 1:
        raise ConfigError(f"N={N} must be prime to p={p}")


def working_precision(p: int, m_max: int, target: int) -> int:
    """Digits to carry so that ``target`` digits survive the divisions by ``n <= m_max``."""
    e = 0
    while p ** (e + 1) <= m_max:
        e += 1
    return target + e + 2


@dataclass(frozen=True)
class TraceTerm:
    m: int
    t: int
    d_K: int
    f: int
    c: int
    h: int
    B: int
    radicand: int
    sign: int
    gamma_exact: QuadElement
    p: int

    @property
    def norm(self) -> int:
        return self.p ** self.m

    @property
    def weight(self) -> int:
        return self.h * self.B

    def gamma_padic(self, prec: int) -> PadicScalar:
        return hensel_unit_root(self.t, self.p, self.m, prec)

    def gamma_power(self, k: int) -> QuadElement:
        return quad_pow(self.gamma_exact, k, self.t, self.norm)


def iota_sqrt(d: int, p: int, prec: int) -> PadicScalar:
    """The fixed embedding of ``sqrt(d)``: the Hensel lift of the root in ``[1, (p-1)/2]``."""
    return hensel_sqrt(d, p, prec, sqrt_branch(d, p))


@lru_cache(maxsize=None)
def _terms(p: int, N: int, m: int) -> tuple[TraceTerm, ...]:
    q = p ** m
    tmax = isqrt(4 * q - 1)
    out = []
    for t in range(-tmax, tmax + 1):
        if t % p == 0:
            continue
        disc = t * t - 4 * q
        dec = squarefree_decompose(disc)
        s0, d0 = dec.square_part, dec.radical
        d_K = fundamental_discriminant(d0)
        f = s0 if d_K == d0 else s0 // 2
        if f * f * d_K != disc:
            raise InvariantError(f"bad conductor split of {disc}")
        r0 = sqrt_branch(d0, p)
        sign = 1 if (s0 * r0 - t) % p == 0 else -1
        if (sign * s0 * r0 - t) % p:
            raise InvariantError(f"no unit-root branch for t={t}")
        gamma = QuadElement(Fraction(t, 2), Fraction(sign * s0, 2), d0)
        if gamma * gamma.conjugate() != q:
            raise InvariantError(f"norm of gamma(t={t}) is not p^m")
        for c in divisors(f):
            order = OrderSpec(d_K, c)
            gbar = conjugate_in_order(root_in_order(t, f, order, sign))
            out.append(TraceTerm(
                m=m, t=t, d_K=d_K, f=f, c=c,
                h=class_number(order.D),
                B=bn_count(order, gbar, N),
                radicand=d0, sign=sign, gamma_exact=gamma, p=p,
            ))
    return tuple(out)


def enumerate_terms(p: int, N: int, m: int) -> list[TraceTerm]:
    """One term per (trace, order) pair, sorted by trace then conductor."""
    validate_parameters(p, N)
    if m < 1:
        raise ConfigError("m must be positive")
    return list(_terms(p, N, m))


def _terms_worker(args):
    p, N, m, table = args
    seed_class_numbers(table)
    terms = _terms(p, N, m)
    return m, terms, class_number_cache()


def prefetch_terms(p: int, N: int, m_max: int, workers: Optional[int] = None) -> None:
    """Fill the term cache for ``m <= m_max``, optionally in worker processes."""
    validate_parameters(p, N)
    todo = [m for m in range(1, m_max + 1) if (p, N, m) not in _prefetched]
    if not todo:
        return
    log.debug("enumerating trace terms for p=%d N=%d m=%s", p, N, todo)
    if workers and workers > 1 and len(todo) > 1:
        table = class_number_cache()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for m, terms, h_table in pool.map(_terms_worker, [(p, N, m, table) for m in todo]):
                _prefetched[(p, N, m)] = terms
                seed_class_numbers(h_table)
    else:
        for m in todo:
            _prefetched[(p, N, m)] = _terms(p, N, m)


_prefetched: dict = {}


def clear_caches() -> None:
    """Forget trace terms and class numbers computed in this process."""
    _prefetched.clear()
    _terms.cache_clear()
    clear_class_numbers()


def _cached_terms(p: int, N: int, m: int) -> tuple[TraceTerm, ...]:
    got = _prefetched.get((p, N, m))
    return got if got is not None else _terms(p, N, m)


def compute_A(p: int, N: int, m: int, k: int, prec: int) -> PadicScalar:
    """``A_m(k)`` modulo ``p**prec``."""
    validate_parameters(p, N)
    q = p ** m
    total = PadicScalar.zero(p)
    for term in _cached_terms(p, N, m):
        if term.B == 0:
            continue
        g = term.gamma_padic(prec)
        den = g * g - q
        if g.val != 0 or den.val != 0:
            raise InvariantError(f"gamma(t={term.t}) or gamma^2 - p^m is not a unit")
        total = total + (g ** k / den) * term.weight
    return total


def compute_C_padic(p: int, N: int, m: int, k: int, prec: int) -> PadicScalar:
    """``C_m(k)`` summed directly from the p-adic unit roots."""
    validate_parameters(p, N)
    total = PadicScalar.zero(p)
    for term in _cached_terms(p, N, m):
        if term.B:
            total = total + term.gamma_padic(prec) ** k * term.weight
    return total


def compute_C_exact(p: int, N: int, m: int, k: int) -> MultiQuadElement:
    """``C_m(k)`` as an exact element of the compositum of the fields ``Q(gamma)``."""
    validate_parameters(p, N)
    total = MultiQuadElement()
    for term in _cached_terms(p, N, m):
        if term.B:
            total = total + term.gamma_power(k) * term.weight
    return total


def embed(x: MultiQuadElement, p: int, prec: int) -> PadicScalar:
    """Image of ``x`` in Q_p under the fixed embedding, modulo ``p**prec``.

    Evaluation is linear in the radicand basis, so it is a ring map on each
    quadratic subfield ``Q(sqrt(d))`` separately.
    """
    total = PadicScalar.zero(p)
    for d, q in x.terms.items():
        if d == 1:
            total = total + PadicScalar.from_rational(q, p, prec)
            continue
        num_v = _pval(q.numerator, p) - _pval(q.denominator, p)
        extra = max(0, -num_v)
        total = total + iota_sqrt(d, p, prec + extra) * q
    return total.truncate(prec)


def _pval(n: int, p: int) -> int:
    v = 0
    while n and n % p == 0:
        n //= p
        v += 1
    return v


# series ----------------------------------------------------------------------

def _D_work(p: int, N: int, k: int, m_max: int, work: int) -> PadicSeries:
    A = [compute_A(p, N, m, k, work) for m in range(1, m_max + 1)]
    return exp_weighted(A, p)


def build_D(p: int, N: int, k: int, m_max: int, prec: int, workers: Optional[int] = None) -> PadicSeries:
    """``D(k, T)`` truncated at degree ``m_max`` to ``prec`` digits."""
    validate_parameters(p, N)
    _check_sizes(m_max, prec)
    prefetch_terms(p, N, m_max, workers)
    work = working_precision(p, m_max, prec)
    return _D_work(p, N, k, m_max, work).truncate_precision(prec)


def _check_sizes(m_max: int, prec: int) -> None:
    if m_max < 1:
        raise ConfigError("m_max must be positive")
    if prec < 1:
        raise ConfigError("precision must be positive")


@dataclass
class LSeriesResult:
    p: int
    N: int
    k: int
    m_max: int
    precision: int
    route: str
    series: PadicSeries
    polygon: NewtonPolygon
    agreement: Optional[bool] = None
    other: Optional[PadicSeries] = field(default=None, repr=False)

    @property
    def min_precision(self):
        return self.series.min_precision()


def l_series_exponential(p: int, N: int, k: int, m_max: int, work: int) -> PadicSeries:
    C = [embed(compute_C_exact(p, N, m, k), p, work) for m in range(1, m_max + 1)]
    return exp_weighted(C, p)


def l_series_quotient(p: int, N: int, k: int, m_max: int, work: int, perturb=None) -> PadicSeries:
    """``D(k+2, T) / D(k, pT)``; ``perturb`` maps ``m`` to an amount added to ``A_m(k+2)``."""
    A = [compute_A(p, N, m, k + 2, work) for m in range(1, m_max + 1)]
    for m, delta in (perturb or {}).items():
        A[m - 1] = A[m - 1] + delta
    num = exp_weighted(A, p)
    den = scale_argument(_D_work(p, N, k, m_max, work), 1)
    return series_divide(num, den)


def build_L(
    p: int,
    N: int,
    k: int,
    m_max: int,
    prec: int,
    route: str = "both",
    workers: Optional[int] = None,
) -> LSeriesResult:
    """The unit root L-function of weight ``k`` via one or both routes.

    With ``route="both"`` the two routes must agree within tracked precision,
    otherwise :class:`RouteDisagreement` is raised.
    """
    validate_parameters(p, N)
    _check_sizes(m_max, prec)
    if route not in ROUTES:
        raise ConfigError(f"route must be one of {ROUTES}")
    prefetch_terms(p, N, m_max, workers)
    work = working_precision(p, m_max, prec)

    exp_s = quot_s = None
    if route in ("exp", "both"):
        exp_s = l_series_exponential(p, N, k, m_max, work).truncate_precision(prec)
    if route in ("quot", "both"):
        quot_s = l_series_quotient(p, N, k, m_max, work).truncate_precision(prec)

    agreement = None
    if exp_s is not None and quot_s is not None:
        idx = exp_s.first_disagreement(quot_s)
        if idx is not None:
            raise RouteDisagreement(idx, f" ({exp_s[idx]!r} vs {quot_s[idx]!r})")
        agreement = True
    main = exp_s if exp_s is not None else quot_s
    return LSeriesResult(p, N, k, m_max, prec, route, main, newton_polygon(main), agreement, quot_s)
