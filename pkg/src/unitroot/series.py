"""Truncated power series over p-adic scalars and their Newton polygons."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import inf
from typing import Iterable, Sequence

from .padic import PadicScalar, PrecisionError


class PadicSeries:
    """``a_0 + a_1 T + ... + a_n T^n + O(T^(n+1))`` with per-coefficient precision."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Iterable[PadicScalar]):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise ValueError("a series needs at least a constant term")
        if any(c.p != p for c in coeffs):
            raise ValueError("coefficients over a different prime")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("PadicSeries is immutable")

    def __reduce__(self):
        return (PadicSeries, (self.p, self.coeffs))

    @classmethod
    def from_integers(cls, p: int, values: Sequence[int], prec: int) -> "PadicSeries":
        return cls(p, [PadicScalar.from_rational(v, p, prec) for v in values])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i: int) -> PadicScalar:
        return self.coeffs[i]

    def __len__(self):
        return len(self.coeffs)

    def valuations(self) -> list:
        return [c.val for c in self.coeffs]

    def precisions(self) -> list:
        return [c.prec for c in self.coeffs]

    def min_precision(self):
        return min(c.prec for c in self.coeffs[1:]) if self.degree else self.coeffs[0].prec

    def truncate(self, degree: int) -> "PadicSeries":
        return PadicSeries(self.p, self.coeffs[: degree + 1])

    def truncate_precision(self, prec: int) -> "PadicSeries":
        return PadicSeries(self.p, [c.truncate(prec) for c in self.coeffs])

    def is_integral(self) -> bool:
        return all(c.val >= 0 for c in self.coeffs)

    def __mul__(self, other: "PadicSeries") -> "PadicSeries":
        n = min(self.degree, other.degree)
        out = []
        for k in range(n + 1):
            acc = self.coeffs[0] * other.coeffs[k]
            for j in range(1, k + 1):
                acc = acc + self.coeffs[j] * other.coeffs[k - j]
            out.append(acc)
        return PadicSeries(self.p, out)

    def first_disagreement(self, other: "PadicSeries"):
        """Index of the first coefficient where the two differ within tracked precision."""
        for i, (a, b) in enumerate(zip(self.coeffs, other.coeffs)):
            if not a.agrees_with(b):
                return i
        return None

    def __eq__(self, other):
        if not isinstance(other, PadicSeries):
            return NotImplemented
        return self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __repr__(self):
        return f"PadicSeries(p={self.p}, degree={self.degree})"


def _one(p: int, prec) -> PadicScalar:
    return PadicScalar(p, 0, 1, max(int(prec), 1))


def _check_precision(x: PadicScalar, n: int) -> None:
    if not x.is_exact_zero() and x.prec <= 0:
        raise PrecisionError(f"coefficient {n} has no p-adic digits left (precision {x.prec})")


def exp_weighted(c: Sequence[PadicScalar], p: int | None = None) -> PadicSeries:
    """``exp(sum c_m T^m / m)`` for ``c = [c_1, ..., c_M]``, truncated at degree ``M``.

    Coefficients come from ``n a_n = sum_{m=1..n} c_m a_{n-m}``, ``a_0 = 1``.
    """
    if p is None:
        p = c[0].p
    top = max((x.prec for x in c if not x.is_exact_zero()), default=1)
    a = [_one(p, top)]
    for n in range(1, len(c) + 1):
        acc = c[0] * a[n - 1]
        for m in range(2, n + 1):
            acc = acc + c[m - 1] * a[n - m]
        an = acc * Fraction(1, n)
        _check_precision(an, n)
        a.append(an)
    return PadicSeries(p, a)


def log_series(f: PadicSeries) -> list[PadicScalar]:
    """Inverse of :func:`exp_weighted`: ``c_n = n a_n - sum_{m<n} c_m a_{n-m}``."""
    a = f.coeffs
    if not (a[0] - 1).is_zero():
        raise ValueError("series must have constant term 1")
    c: list[PadicScalar] = []
    for n in range(1, len(a)):
        acc = a[n] * n
        for m in range(1, n):
            acc = acc - c[m - 1] * a[n - m]
        _check_precision(acc, n)
        c.append(acc)
    return c


def scale_argument(f: PadicSeries, j: int) -> PadicSeries:
    """Substitute ``T -> p^j T``."""
    return PadicSeries(f.p, [x.lift_shift(i * j) for i, x in enumerate(f.coeffs)])


def series_divide(f: PadicSeries, g: PadicSeries) -> PadicSeries:
    """``h`` with ``h*g = f`` to the common truncation degree."""
    if not g.coeffs[0].is_unit():
        raise ValueError("divisor must have a unit constant term")
    n = min(f.degree, g.degree)
    inv0 = g.coeffs[0].inverse()
    h: list[PadicScalar] = []
    for k in range(n + 1):
        acc = f.coeffs[k]
        for j in range(1, k + 1):
            acc = acc - g.coeffs[j] * h[k - j]
        hk = acc * inv0
        _check_precision(hk, k)
        h.append(hk)
    return PadicSeries(f.p, h)


# Newton polygons -------------------------------------------------------------

@dataclass(frozen=True)
class NewtonPolygon:
    vertices: tuple[tuple[int, int], ...]
    certified: tuple[bool, ...]
    segments: tuple[tuple[Fraction, int], ...]

    def slopes(self) -> list[Fraction]:
        """Slopes with multiplicity, left to right."""
        return [s for s, n in self.segments for _ in range(n)]

    def multiplicity(self, slope) -> int:
        return sum(n for s, n in self.segments if s == slope)

    def certified_multiplicity(self, slope) -> int:
        """Length of the segment of this slope when both its endpoints are certified, else 0."""
        for i, (s, n) in enumerate(self.segments):
            if s == slope:
                return n if self.certified[i] and self.certified[i + 1] else 0
        return 0

    def segment_certified(self, i: int) -> bool:
        return self.certified[i] and self.certified[i + 1]

    @property
    def length(self) -> int:
        return sum(n for _, n in self.segments)


def lower_hull(points: Sequence[tuple[int, float]]) -> list[tuple[int, float]]:
    """Vertices of the lower convex hull, left to right; collinear points dropped."""
    pts = sorted(points)
    hull: list[tuple[int, float]] = []
    for x, y in pts:
        if hull and hull[-1][0] == x:
            if y >= hull[-1][1]:
                continue
            hull.pop()
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * (x - x1) >= (y - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append((x, y))
    return hull


def newton_polygon(f: PadicSeries) -> NewtonPolygon:
    """Lower convex hull of ``(i, v_p(a_i))``.

    Coefficients known only to vanish mod ``p^prec`` are not plotted, but a
    vertex is certified only if it survives when each of them is placed at
    its lowest possible valuation ``prec``.
    """
    known = [(i, c.val) for i, c in enumerate(f.coeffs) if not c.is_zero()]
    unknown = [(i, c.prec) for i, c in enumerate(f.coeffs) if c.is_zero() and not c.is_exact_zero()]
    hull = lower_hull(known)
    worst = set(lower_hull(known + unknown)) if unknown else set(hull)
    certified = tuple(v in worst for v in hull)
    segments = tuple(
        (Fraction(y2 - y1, x2 - x1), x2 - x1) for (x1, y1), (x2, y2) in zip(hull, hull[1:])
    )
    return NewtonPolygon(tuple((int(x), int(y)) for x, y in hull), certified, segments)


def newton_polygon_from_valuations(vals: Sequence) -> NewtonPolygon:
    pts = [(i, v) for i, v in enumerate(vals) if v != inf]
    hull = lower_hull(pts)
    segments = tuple(
        (Fraction(y2 - y1, x2 - x1), x2 - x1) for (x1, y1), (x2, y2) in zip(hull, hull[1:])
    )
    return NewtonPolygon(tuple(hull), tuple(True for _ in hull), segments)
