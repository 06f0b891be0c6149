"""p-adic numbers at finite, explicitly tracked precision.

A :class:`PadicScalar` stands for ``p**val * unit + O(p**prec)`` where ``prec``
is the absolute precision.  Three kinds of values exist:

* nonzero: ``unit`` is a p-adic unit known modulo ``p**(prec - val)``;
* inexact zero: ``unit == 0`` and ``val == prec`` (known to vanish mod ``p**prec``);
* exact zero: ``val == prec == math.inf``.

Precision rules: sums keep the smaller absolute precision, products and
quotients keep the smaller relative precision.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

INF = math.inf


class PrecisionError(ArithmeticError):
    """Raised when a computation runs out of tracked p-adic digits."""


def valuation(n: int, p: int) -> float:
    if n == 0:
        return INF
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def split_unit(n: int, p: int) -> tuple[int, int]:
    """``n = p**v * u`` with ``p`` not dividing ``u``; ``n`` nonzero."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


class PadicScalar:
    __slots__ = ("p", "val", "unit", "prec")

    def __init__(self, p: int, val, unit: int, prec):
        if val == INF:
            unit, prec = 0, INF
        elif unit == 0:
            val = prec
        else:
            if prec <= val:
                raise PrecisionError("relative precision must be positive for a nonzero value")
            if unit % p == 0:
                raise ValueError("unit part divisible by p")
            unit %= p ** (prec - val)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "val", val)
        object.__setattr__(self, "unit", unit)
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, name, value):
        raise AttributeError("PadicScalar is immutable")

    def __reduce__(self):
        return (PadicScalar, (self.p, self.val, self.unit, self.prec))

    # construction ---------------------------------------------------------

    @classmethod
    def zero(cls, p: int, prec=INF) -> "PadicScalar":
        if prec == INF:
            return cls(p, INF, 0, INF)
        return cls(p, prec, 0, prec)

    @classmethod
    def from_rational(cls, x: Union[int, Fraction], p: int, prec: int) -> "PadicScalar":
        """Image of a rational number, truncated to absolute precision ``prec``."""
        x = Fraction(x)
        if x == 0:
            return cls.zero(p)
        vn, un = split_unit(x.numerator, p)
        vd, ud = split_unit(x.denominator, p)
        v = vn - vd
        if prec <= v:
            return cls.zero(p, prec)
        mod = p ** (prec - v)
        return cls(p, v, un * pow(ud, -1, mod), prec)

    @classmethod
    def from_residue(cls, r: int, p: int, prec: int) -> "PadicScalar":
        """The class of ``r`` modulo ``p**prec``."""
        r %= p ** prec
        if r == 0:
            return cls.zero(p, prec)
        v, u = split_unit(r, p)
        return cls(p, v, u, prec)

    # accessors ------------------------------------------------------------

    @property
    def relprec(self):
        return self.prec - self.val

    def is_exact_zero(self) -> bool:
        return self.val == INF

    def is_zero(self) -> bool:
        """True when the value is zero to its known precision."""
        return self.unit == 0

    def is_unit(self) -> bool:
        return self.unit != 0 and self.val == 0

    def residue(self, prec=None) -> int:
        """Representative in ``[0, p**prec)``; requires ``val >= 0``."""
        prec = self.prec if prec is None else prec
        if self.unit == 0:
            return 0
        if self.val < 0:
            raise ValueError("value is not p-integral")
        if prec > self.prec:
            raise PrecisionError(f"asked for {prec} digits, only {self.prec} known")
        return (self.unit * self.p ** self.val) % self.p ** prec

    def triple(self) -> tuple:
        """``(valuation, unit residue, precision)``; used for serialization."""
        if self.is_exact_zero():
            return ("inf", 0, "inf")
        return (self.val, self.unit, self.prec)

    def truncate(self, prec) -> "PadicScalar":
        """Drop digits beyond absolute precision ``prec``."""
        if prec >= self.prec:
            return self
        if self.val >= prec:
            return PadicScalar.zero(self.p, prec)
        return PadicScalar(self.p, self.val, self.unit, prec)

    def lift_shift(self, j: int) -> "PadicScalar":
        """Multiply by ``p**j`` exactly."""
        if self.is_exact_zero():
            return self
        return PadicScalar(self.p, self.val + j, self.unit, self.prec + j)

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "PadicScalar":
        if isinstance(other, PadicScalar):
            if other.p != self.p:
                raise ValueError("mixing different primes")
            return other
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return PadicScalar.zero(self.p)
            # enough digits that the exact operand never limits the result
            need = max(self.prec if self.prec != INF else 0, 0) + abs(_val_q(other, self.p)) + 1
            return PadicScalar.from_rational(other, self.p, int(need))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_exact_zero():
            return self
        if self.is_exact_zero():
            return other
        p = self.p
        prec = min(self.prec, other.prec)
        v = min(self.val, other.val)
        if v >= prec:
            return PadicScalar.zero(p, prec)
        s = self.unit * p ** (self.val - v) + other.unit * p ** (other.val - v)
        s %= p ** (prec - v)
        if s == 0:
            return PadicScalar.zero(p, prec)
        e, u = split_unit(s, p)
        return PadicScalar(p, v + e, u, prec)

    __radd__ = __add__

    def __neg__(self):
        if self.unit == 0:
            return self
        return PadicScalar(self.p, self.val, -self.unit, self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and other != 0:
            # exact rational factor: shifts valuation, keeps relative precision
            vq = _val_q(other, self.p)
            if self.is_exact_zero():
                return self
            if self.unit == 0:
                return PadicScalar.zero(self.p, self.prec + vq)
            q = Fraction(other) / Fraction(self.p) ** vq
            mod = self.p ** self.relprec
            u = q.numerator * pow(q.denominator, -1, mod)
            return PadicScalar(self.p, self.val + vq, self.unit * u, self.prec + vq)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_exact_zero() or other.is_exact_zero():
            return PadicScalar.zero(self.p)
        prec = min(self.val + other.prec, other.val + self.prec)
        val = self.val + other.val
        if self.unit == 0 or other.unit == 0:
            return PadicScalar.zero(self.p, prec)
        return PadicScalar(self.p, val, self.unit * other.unit, prec)

    __rmul__ = __mul__

    def inverse(self) -> "PadicScalar":
        if self.unit == 0:
            if self.is_exact_zero():
                raise ZeroDivisionError("division by exact zero")
            raise PrecisionError("division by a value indistinguishable from zero")
        r = self.relprec
        return PadicScalar(self.p, -self.val, pow(self.unit, -1, self.p ** r), r - self.val)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by exact zero")
            return self * (1 / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return padic_div(self, other)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            if self.unit == 0:
                raise PrecisionError("zero to the power 0")
            return PadicScalar(self.p, 0, 1, self.relprec)
        if self.unit == 0:
            if self.is_exact_zero():
                return self
            return PadicScalar.zero(self.p, self.prec + (k - 1) * self.val)
        r = self.relprec
        return PadicScalar(self.p, k * self.val, pow(self.unit, k, self.p ** r), k * self.val + r)

    # comparison -----------------------------------------------------------

    def agrees_with(self, other: "PadicScalar", prec=None) -> bool:
        """Equal modulo ``p**prec`` (default: the smaller of the two precisions)."""
        bound = min(self.prec, other.prec)
        if prec is not None:
            bound = min(bound, prec)
        return (self - other).val >= bound

    def __eq__(self, other):
        if not isinstance(other, PadicScalar):
            return NotImplemented
        return (self.p, self.val, self.unit, self.prec) == (other.p, other.val, other.unit, other.prec)

    def __hash__(self):
        return hash((self.p, self.val, self.unit, self.prec))

    def __repr__(self):
        if self.is_exact_zero():
            return f"PadicScalar(p={self.p}, 0)"
        return f"PadicScalar(p={self.p}, val={self.val}, unit={self.unit}, prec={self.prec})"


def _val_q(x, p: int) -> int:
    x = Fraction(x)
    return split_unit(x.numerator, p)[0] - split_unit(x.denominator, p)[0]


def padic_div(x: PadicScalar, y: PadicScalar) -> PadicScalar:
    """``x / y``: valuation ``val(x) - val(y)``, relative precision the smaller of the two."""
    if y.is_exact_zero():
        raise ZeroDivisionError("division by exact zero")
    if y.unit == 0:
        raise PrecisionError("division by a value indistinguishable from zero")
    if x.is_exact_zero():
        return x
    val = x.val - y.val
    if x.unit == 0:
        return PadicScalar.zero(x.p, val)
    r = min(x.relprec, y.relprec)
    mod = x.p ** r
    return PadicScalar(x.p, val, x.unit * pow(y.unit, -1, mod), val + r)


def _check_odd_prime(p: int) -> None:
    from sympy import isprime

    if p == 2 or not isprime(p):
        raise ValueError(f"p must be an odd prime, got {p}")


def hensel_unit_root(t: int, p: int, m: int, prec: int) -> PadicScalar:
    """The root of ``x^2 - t x + p^m`` that is a p-adic unit (``x = t mod p``)."""
    _check_odd_prime(p)
    if t % p == 0:
        raise ValueError(f"p={p} divides t={t}: no unit root")
    if m < 1:
        raise ValueError("m must be positive")
    q = p ** m
    # Newton's method; f'(x) = 2x - t = x - conj(x) is a unit at the unit root
    mod, x, digits = p, t % p, 1
    while digits < prec:
        digits = min(2 * digits, prec)
        mod = p ** digits
        fx = x * x - t * x + q
        x = (x - fx * pow(2 * x - t, -1, mod)) % mod
    return PadicScalar(p, 0, x, prec)


def hensel_sqrt(a: int, p: int, prec: int, r0: int) -> PadicScalar:
    """Square root of the p-adic unit ``a`` congruent to ``r0`` modulo ``p``."""
    _check_odd_prime(p)
    if a % p == 0:
        raise ValueError("a must be a p-adic unit")
    if (r0 * r0 - a) % p:
        if pow(a, (p - 1) // 2, p) != 1:
            raise ValueError(f"{a} is not a square modulo {p}")
        raise ValueError(f"{r0} is not a square root of {a} modulo {p}")
    x, digits = r0 % p, 1
    while digits < prec:
        digits = min(2 * digits, prec)
        mod = p ** digits
        x = (x - (x * x - a) * pow(2 * x, -1, mod)) % mod
    return PadicScalar(p, 0, x, prec)


def sqrt_branch(a: int, p: int) -> int:
    """Canonical square root of ``a`` mod ``p``: the one in ``[1, (p-1)/2]``."""
    for r in range(1, (p - 1) // 2 + 1):
        if (r * r - a) % p == 0:
            return r
    raise ValueError(f"{a} is not a nonzero square modulo {p}")
