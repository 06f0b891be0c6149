"""Exact rational, quadratic and multiquadratic arithmetic.

Elements of a compositum of quadratic fields are stored as finite sums
``sum(q_d * sqrt(d))`` keyed by squarefree integers ``d`` (``d = 1`` is the
rational part).  For negative ``d`` we use ``sqrt(d) = i * sqrt(|d|)``, which
fixes the sign rule ``sqrt(d1) * sqrt(d2) = -g * sqrt(d1 d2 / g^2)`` when both
radicands are negative.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Union

from sympy import factorint

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class SquarefreeDecomposition:
    input: int
    square_part: int
    radical: int


def squarefree_decompose(n: int) -> SquarefreeDecomposition:
    """Write ``n = s**2 * d0`` with ``s > 0`` and ``d0`` squarefree (sign kept in ``d0``)."""
    if n == 0:
        raise ValueError("cannot decompose 0")
    s, d0 = 1, -1 if n < 0 else 1
    for q, e in factorint(abs(n)).items():
        s *= q ** (e // 2)
        if e % 2:
            d0 *= q
    return SquarefreeDecomposition(n, s, d0)


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for e in factorint(abs(n)).values())


def _radical_product(d1: int, d2: int) -> tuple[int, int]:
    """Return ``(coef, d)`` with ``sqrt(d1) * sqrt(d2) = coef * sqrt(d)``."""
    g = gcd(d1, d2)
    coef = -g if (d1 < 0 and d2 < 0) else g
    return coef, d1 * d2 // (g * g)


class QuadElement:
    """``a + b*sqrt(d)`` with rational ``a, b`` and squarefree ``d``."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a: Rational, b: Rational = 0, d: int = 1):
        a, b = Fraction(a), Fraction(b)
        if b == 0 or d == 1:
            a, b, d = a + b, Fraction(0), 1
        elif d == 0 or not is_squarefree(d):
            raise ValueError(f"radicand {d} is not squarefree")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("QuadElement is immutable")

    def __reduce__(self):
        return (QuadElement, (self.a, self.b, self.d))

    def _coerce(self, other) -> "QuadElement":
        if isinstance(other, QuadElement):
            if self.d != 1 and other.d != 1 and other.d != self.d:
                raise ValueError("elements live in different quadratic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadElement(other)
        return NotImplemented

    def _field(self, other: "QuadElement") -> int:
        return self.d if self.d != 1 else other.d

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QuadElement(self.a + other.a, self.b + other.b, self._field(other))

    __radd__ = __add__

    def __neg__(self):
        return QuadElement(-self.a, -self.b, self.d)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = self._field(other)
        a = self.a * other.a + self.b * other.b * d
        b = self.a * other.b + self.b * other.a
        return QuadElement(a, b, d)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadElement":
        return QuadElement(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def trace(self) -> Fraction:
        return 2 * self.a

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QuadElement(other)
        if not isinstance(other, QuadElement):
            return NotImplemented
        return (self.a, self.b, self.d) == (other.a, other.b, other.d)

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __repr__(self):
        if self.d == 1:
            return f"QuadElement({self.a})"
        return f"QuadElement({self.a} + {self.b}*sqrt({self.d}))"

    def to_multiquad(self) -> "MultiQuadElement":
        return MultiQuadElement({1: self.a, self.d: self.b} if self.d != 1 else {1: self.a})

    def __complex__(self):
        return complex(self.a) + float(self.b) * _csqrt(self.d)


def _csqrt(d: int) -> complex:
    return complex(0, abs(d) ** 0.5) if d < 0 else complex(d ** 0.5)


def quad_pow(x: QuadElement, k: int, trace: int, norm: int) -> QuadElement:
    """Exact ``x**k`` for ``x`` a root of ``X^2 - trace*X + norm``.

    Uses ``x^j = trace*x^(j-1) - norm*x^(j-2)``; for ``k < 0`` the same
    recurrence runs on ``x^-1 = (trace - x)/norm``.
    """
    if x * x != trace * x - norm:
        raise ValueError(f"{x!r} is not a root of X^2 - {trace}X + {norm}")
    if k < 0:
        if norm == 0:
            raise ZeroDivisionError("non-invertible element")
        inv = (trace - x) * Fraction(1, norm)
        # inv is a root of X^2 - (trace/norm) X + 1/norm
        return _pow_by_recurrence(inv, -k, Fraction(trace, norm), Fraction(1, norm))
    return _pow_by_recurrence(x, k, Fraction(trace), Fraction(norm))


def _pow_by_recurrence(x: QuadElement, k: int, t: Fraction, n: Fraction) -> QuadElement:
    # linear in k; fine at the exponents used here (|k| well below 10^3)
    prev, cur = QuadElement(1, 0, x.d), x
    if k == 0:
        return prev
    for _ in range(k - 1):
        prev, cur = cur, t * cur - n * prev
    return cur


class MultiQuadElement:
    """Element of ``Q(sqrt(d) : d in support)``, stored as ``{d: coefficient}``.

    Keys are squarefree integers; zero coefficients are never stored, so an
    empty map is zero.  Instances are immutable.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, Rational] | None = None):
        acc: dict[int, Fraction] = {}
        for d, q in (terms or {}).items():
            if d == 0:
                raise ValueError("radicand 0")
            dec = squarefree_decompose(d)
            coef = Fraction(q) * dec.square_part
            if coef:
                acc[dec.radical] = acc.get(dec.radical, Fraction(0)) + coef
        object.__setattr__(self, "_terms", {d: q for d, q in sorted(acc.items()) if q})

    def __setattr__(self, name, value):
        raise AttributeError("MultiQuadElement is immutable")

    def __reduce__(self):
        return (MultiQuadElement, (self._terms,))

    @classmethod
    def _raw(cls, terms: dict[int, Fraction]) -> "MultiQuadElement":
        # keys already squarefree
        obj = object.__new__(cls)
        object.__setattr__(obj, "_terms", {d: q for d, q in sorted(terms.items()) if q})
        return obj

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def support(self) -> frozenset[int]:
        """Radicands other than 1 with nonzero coefficient."""
        return frozenset(d for d in self._terms if d != 1)

    def rational_part(self) -> Fraction:
        return self._terms.get(1, Fraction(0))

    def coefficient(self, d: int) -> Fraction:
        return self._terms.get(d, Fraction(0))

    def _coerce(self, other):
        if isinstance(other, MultiQuadElement):
            return other
        if isinstance(other, QuadElement):
            return other.to_multiquad()
        if isinstance(other, (int, Fraction)):
            return MultiQuadElement._raw({1: Fraction(other)})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self._terms)
        for d, q in other._terms.items():
            acc[d] = acc.get(d, Fraction(0)) + q
        return MultiQuadElement._raw(acc)

    __radd__ = __add__

    def __neg__(self):
        return MultiQuadElement._raw({d: -q for d, q in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc: dict[int, Fraction] = {}
        for d1, q1 in self._terms.items():
            for d2, q2 in other._terms.items():
                coef, d = _radical_product(d1, d2)
                acc[d] = acc.get(d, Fraction(0)) + coef * q1 * q2
        return MultiQuadElement._raw(acc)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._terms == other._terms

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def __bool__(self):
        return not mq_is_zero(self)

    def __complex__(self):
        return sum((float(q) * _csqrt(d) for d, q in self._terms.items()), complex(0))

    def __repr__(self):
        if not self._terms:
            return "MultiQuadElement(0)"
        parts = [str(q) if d == 1 else f"{q}*sqrt({d})" for d, q in self._terms.items()]
        return f"MultiQuadElement({' + '.join(parts)})"


def mq_is_zero(x: MultiQuadElement) -> bool:
    # square roots of distinct squarefree integers (signs allowed) are linearly
    # independent over Q, so zero iff every normalized coefficient vanishes
    return all(q == 0 for q in x.terms.values())


def exponent_vector(d: int) -> frozenset:
    """Support of ``d`` over GF(2): its prime factors, plus ``-1`` if negative."""
    dec = squarefree_decompose(d)
    if dec.square_part != 1:
        raise ValueError(f"{d} is not squarefree")
    primes = set(factorint(abs(d)))
    if d < 0:
        primes.add(-1)
    return frozenset(primes)


def gf2_rank(vectors: Iterable[frozenset]) -> int:
    """Rank over GF(2) of sets viewed as indicator vectors (symmetric difference is addition)."""
    pivots: dict = {}
    rank = 0
    for v in vectors:
        v = set(v)
        while v:
            lead = min(v)
            if lead in pivots:
                v ^= pivots[lead]
            else:
                pivots[lead] = v
                rank += 1
                break
    return rank


def mq_field_degree(radicands: Iterable[int]) -> int:
    """Degree over Q of ``Q(sqrt(d) : d in radicands)``."""
    vecs = []
    for d in radicands:
        if d in (0, 1):
            raise ValueError("radicands must differ from 0 and 1")
        vecs.append(exponent_vector(d))
    return 2 ** gf2_rank(vecs)


__all__ = [
    "MultiQuadElement",
    "QuadElement",
    "SquarefreeDecomposition",
    "exponent_vector",
    "gf2_rank",
    "is_squarefree",
    "mq_field_degree",
    "mq_is_zero",
    "quad_pow",
    "squarefree_decompose",
]
