"""Finite, checkable reports on the trace-formula series.

Each ``check_*`` function returns a report object; none of them raise on a
failed check (the report says so), only on bad input.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from sympy import factorint

from .errors import ConfigError, InvariantError
from .exact import MultiQuadElement, is_squarefree, mq_field_degree, mq_is_zero
from .series import NewtonPolygon, PadicSeries, newton_polygon, scale_argument, series_divide
from .trace import (
    _D_work,
    compute_A,
    compute_C_exact,
    embed,
    l_series_exponential,
    l_series_quotient,
    prefetch_terms,
    validate_parameters,
    working_precision,
)


# identity -------------------------------------------------------------------

@dataclass
class IdentityReport:
    p: int
    N: int
    k: int
    m_max: int
    precision: int
    exponential: PadicSeries
    quotient: PadicSeries
    agree: bool
    first_mismatch: Optional[int]
    min_precision: int


def check_identity(p, N, k, m_max, prec, perturb=None, workers=None) -> IdentityReport:
    """Compare ``exp(sum C_m T^m/m)`` with ``D(k+2,T)/D(k,pT)`` coefficient by coefficient.

    ``perturb`` ({m: amount}) is added to ``A_m(k+2)`` on the quotient side
    only, for fault-injection tests.
    """
    validate_parameters(p, N)
    prefetch_terms(p, N, m_max, workers)
    work = working_precision(p, m_max, prec)
    e = l_series_exponential(p, N, k, m_max, work).truncate_precision(prec)
    q = l_series_quotient(p, N, k, m_max, work, perturb).truncate_precision(prec)
    idx = e.first_disagreement(q)
    min_prec = min(min(e.precisions()), min(q.precisions()))
    return IdentityReport(p, N, k, m_max, prec, e, q, idx is None, idx, min_prec)


# continuity -----------------------------------------------------------------

@dataclass
class ContinuityRow:
    m: int
    A_diff_valuation: float
    C_diff_valuation: float
    A_ok: bool
    C_ok: bool


@dataclass
class ContinuityReport:
    p: int
    N: int
    k: int
    s: int
    shifted_k: int
    modulus_exponent: int
    rows: list[ContinuityRow]

    @property
    def ok(self) -> bool:
        return all(r.A_ok and r.C_ok for r in self.rows)


def check_continuity(p, N, k, s, m_max, prec, workers=None) -> ContinuityReport:
    """``A_m(k) = A_m(k + (p-1)p^s)`` and the same for ``C_m``, modulo ``p^(s+1)``."""
    validate_parameters(p, N)
    if s < 0:
        raise ConfigError("s must be nonnegative")
    need = s + 1
    if prec < need:
        raise ConfigError(f"precision {prec} cannot resolve congruences mod p^{need}")
    prefetch_terms(p, N, m_max, workers)
    k2 = k + (p - 1) * p ** s
    rows = []
    for m in range(1, m_max + 1):
        dA = compute_A(p, N, m, k, prec) - compute_A(p, N, m, k2, prec)
        dC = embed(compute_C_exact(p, N, m, k), p, prec) - embed(compute_C_exact(p, N, m, k2), p, prec)
        rows.append(ContinuityRow(m, dA.val, dC.val, dA.val >= need, dC.val >= need))
    return ContinuityReport(p, N, k, s, k2, need, rows)


# poles ----------------------------------------------------------------------

@dataclass
class PoleCertificate:
    p: int
    N: int
    k: int
    m_max: int
    precision: int
    denominator_polygon: NewtonPolygon
    numerator_polygon: NewtonPolygon
    ordinary_multiplicity: int
    numerator_slope_one: int
    certified_poles: int
    lower_bound_only: bool
    L_integral: bool
    circle_valuation: int = -1
    denominator_zero_circles: list = field(default_factory=list)

    def pole_circles(self) -> list[tuple[int, int]]:
        """``(v_p(T), count)`` for each circle carrying certified poles."""
        return [(self.circle_valuation, self.certified_poles)] if self.certified_poles else []


def _last_unit_index(f: PadicSeries) -> int:
    return max(i for i, c in enumerate(f.coeffs) if not c.is_zero() and c.val == 0)


def pole_certificate(p, N, k, m_max, prec, workers=None) -> PoleCertificate:
    """Poles of ``L = D(k+2,T)/D(k,pT)`` certified on the circle ``|T|_p = p``.

    Unit coefficients of ``D(k,T)`` at index ``d`` force at least ``d`` zeros of
    ``D(k,T)`` on ``|T| = 1`` (all coefficients are integral), hence at least
    ``d`` zeros of ``D(k,pT)`` on ``|T| = p``.  Numerator zeros on that circle
    come from slope-1 segments of ``D(k+2,T)``; each may cancel one pole, so
    they are subtracted.
    """
    validate_parameters(p, N)
    prefetch_terms(p, N, m_max, workers)
    work = working_precision(p, m_max, prec)
    den = _D_work(p, N, k, m_max, work).truncate_precision(prec)
    num = _D_work(p, N, k + 2, m_max, work).truncate_precision(prec)
    for name, f in (("D(k,T)", den), ("D(k+2,T)", num)):
        if not f.is_integral():
            raise InvariantError(f"{name} has a non-integral coefficient: {f.valuations()}")
    den_np, num_np = newton_polygon(den), newton_polygon(num)
    d0 = _last_unit_index(den)
    n1 = num_np.multiplicity(Fraction(1))
    circles = [
        (-1 - s, n, den_np.segment_certified(i)) for i, (s, n) in enumerate(den_np.segments)
    ]
    if any(v > -1 for v, _, _ in circles):
        raise InvariantError("a zero of D(k,pT) inside |T|_p < p")
    L = series_divide(num, scale_argument(den, 1))
    uncertain = not all(den_np.certified) or not all(num_np.certified)
    return PoleCertificate(
        p, N, k, m_max, prec, den_np, num_np,
        ordinary_multiplicity=d0,
        numerator_slope_one=n1,
        certified_poles=max(0, d0 - n1),
        lower_bound_only=uncertain,
        L_integral=L.is_integral(),
        denominator_zero_circles=circles,
    )


def find_pole_witness(p, N, ks: Sequence[int], m_max, prec) -> Optional[PoleCertificate]:
    for k in ks:
        cert = pole_certificate(p, N, k, m_max, prec)
        if cert.certified_poles >= 1:
            return cert
    return None


# field generation -----------------------------------------------------------

@dataclass
class FieldGenerationRow:
    m: int
    value: MultiQuadElement
    support: tuple[int, ...]
    degree: int
    cumulative_degree: int


@dataclass
class FieldGenerationReport:
    p: int
    N: int
    k: int
    rows: list[FieldGenerationRow]
    contained_fields: tuple[int, ...]

    @property
    def degrees(self) -> list[int]:
        return [r.cumulative_degree for r in self.rows]


def field_generation_report(p, N, k, m_max) -> FieldGenerationReport:
    """Growth of ``Q(C_1(k), ..., C_m(k))`` read off the radicand supports.

    Each ``C_m`` lies in a compositum of quadratic fields; by the independence
    of square roots, ``Q(C_m)`` is generated by the square roots in its support.
    """
    validate_parameters(p, N)
    if k < 1:
        raise ConfigError("field generation is stated for k >= 1")
    rows = []
    seen: set[int] = set()
    for m in range(1, m_max + 1):
        c = compute_C_exact(p, N, m, k)
        supp = tuple(sorted(c.support()))
        seen.update(supp)
        rows.append(FieldGenerationRow(m, c, supp, mq_field_degree(supp), mq_field_degree(seen)))
    return FieldGenerationReport(p, N, k, rows, tuple(sorted(seen)))


# independence ---------------------------------------------------------------

def _check_radicands(radicands: Sequence[int]) -> None:
    if len(set(radicands)) != len(radicands):
        raise ConfigError("radicands must be distinct")
    for d in radicands:
        if not is_squarefree(d):
            raise ConfigError(f"{d} is not squarefree")


def independence_check(coeffs: Sequence, radicands: Sequence[int]) -> bool:
    """True iff ``sum coeffs[i]*sqrt(radicands[i])`` is nonzero."""
    if len(coeffs) != len(radicands):
        raise ConfigError("coefficient and radicand lists differ in length")
    _check_radicands(radicands)
    x = MultiQuadElement(dict(zip(radicands, (Fraction(c) for c in coeffs))))
    return not mq_is_zero(x)


def generated_field_degree(coeffs: Sequence, radicands: Sequence[int]) -> int:
    """Degree of ``Q(sum coeffs[i] sqrt(radicands[i]))``, from the nonzero-coefficient radicands."""
    _check_radicands(radicands)
    return mq_field_degree([d for c, d in zip(coeffs, radicands) if c and d != 1])


def rank_mod2(radicands: Sequence[int]) -> int:
    """GF(2) rank of the exponent vectors of ``radicands``, by row reduction on a dense matrix."""
    primes = sorted({q for d in radicands for q in factorint(abs(d))})
    cols = {q: i + 1 for i, q in enumerate(primes)}
    mat = np.zeros((len(radicands), len(primes) + 1), dtype=np.uint8)
    for r, d in enumerate(radicands):
        mat[r, 0] = d < 0
        for q in factorint(abs(d)):
            mat[r, cols[q]] = 1
    rank = 0
    for col in range(mat.shape[1]):
        piv = next((r for r in range(rank, mat.shape[0]) if mat[r, col]), None)
        if piv is None:
            continue
        mat[[rank, piv]] = mat[[piv, rank]]
        for r in range(mat.shape[0]):
            if r != rank and mat[r, col]:
                mat[r] ^= mat[rank]
        rank += 1
    return rank


@dataclass
class IndependenceReport:
    trials: int
    zero_reported: int
    degree_mismatches: int

    @property
    def ok(self) -> bool:
        return self.zero_reported == 0 and self.degree_mismatches == 0


def random_squarefree(rng: random.Random, bound: int) -> int:
    while True:
        d = rng.randint(-bound, bound)
        if d != 0 and is_squarefree(d):
            return d


def independence_suite(trials: int = 1000, seed: int = 0, max_terms: int = 6, bound: int = 200) -> IndependenceReport:
    """Random nonzero combinations over distinct squarefree radicands of both signs."""
    rng = random.Random(seed)
    zero = mism = 0
    for _ in range(trials):
        n = rng.randint(1, max_terms)
        rads: list[int] = []
        while len(rads) < n:
            d = random_squarefree(rng, bound)
            if d not in rads:
                rads.append(d)
        coeffs = [Fraction(rng.randint(-50, 50), rng.randint(1, 20)) for _ in rads]
        if not any(coeffs):
            coeffs[0] = Fraction(1)
        if not independence_check(coeffs, rads):
            zero += 1
        nz = [d for c, d in zip(coeffs, rads) if c]
        if generated_field_degree(coeffs, rads) != 2 ** rank_mod2(nz):
            mism += 1
    return IndependenceReport(trials, zero, mism)
