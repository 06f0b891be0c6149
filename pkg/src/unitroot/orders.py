"""Imaginary quadratic orders: discriminants, class numbers, fixed-point counts.

An order of conductor ``c`` in the field of fundamental discriminant ``d_K``
has Z-basis ``{1, theta}`` with ``theta = c * omega``, ``omega = (d_K + sqrt(d_K))/2``.
Then ``theta**2 = c*d_K*theta - c**2*(d_K**2 - d_K)/4``.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from math import gcd, isqrt

import numpy as np
from sympy import factorint, divisors

from .exact import is_squarefree


def fundamental_discriminant(d0: int) -> int:
    """Discriminant of ``Q(sqrt(d0))`` for a negative squarefree ``d0``."""
    if d0 >= 0:
        raise ValueError(f"expected a negative radicand, got {d0}")
    if not is_squarefree(d0):
        raise ValueError(f"{d0} is not squarefree")
    return d0 if d0 % 4 == 1 else 4 * d0


def is_fundamental_discriminant(d: int) -> bool:
    if d % 4 == 1:
        return is_squarefree(d)
    if d % 4 == 0:
        r = d // 4
        return r % 4 in (2, 3) and is_squarefree(r)
    return False


def check_discriminant(D: int) -> None:
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a negative discriminant (need D < 0, D = 0,1 mod 4)")


# class numbers ----------------------------------------------------------------

_class_numbers: dict[int, int] = {}
_class_lock = threading.Lock()


def reduced_forms(D: int) -> list[tuple[int, int, int]]:
    """Reduced primitive positive definite forms ``(a, b, c)`` of discriminant ``D``.

    Reduced means ``|b| <= a <= c`` with ``b >= 0`` whenever ``|b| == a`` or ``a == c``.
    """
    check_discriminant(D)
    amax = isqrt(-D // 3)
    a = np.arange(1, amax + 1, dtype=np.int64)[:, None]
    b = np.arange(-amax, amax + 1, dtype=np.int64)[None, :]
    num = b * b - D
    ok = (b > -a) & (b <= a) & (num % (4 * a) == 0)
    c = np.where(ok, num // (4 * a), 0)
    ok &= c >= a
    ok &= ~((c == a) & (b < 0))
    ok &= np.gcd(np.gcd(a, b), c) == 1
    ia, ib = np.nonzero(ok)
    return sorted((int(a[i, 0]), int(b[0, j]), int(c[i, j])) for i, j in zip(ia, ib))


def _count_reduced(D: int) -> int:
    return len(reduced_forms(D))


def class_number(D: int) -> int:
    """Number of proper classes of primitive forms of discriminant ``D < 0``."""
    check_discriminant(D)
    h = _class_numbers.get(D)
    if h is None:
        h = _count_reduced(D)
        with _class_lock:
            _class_numbers[D] = h
    return h


def class_number_cache() -> dict[int, int]:
    """Snapshot of the in-memory class number table."""
    with _class_lock:
        return dict(_class_numbers)


def seed_class_numbers(table: dict[int, int]) -> None:
    with _class_lock:
        _class_numbers.update(table)


def clear_class_numbers() -> None:
    with _class_lock:
        _class_numbers.clear()


# orders and their elements ---------------------------------------------------

@dataclass(frozen=True)
class OrderSpec:
    d_K: int
    conductor: int

    def __post_init__(self):
        if self.d_K >= 0 or not is_fundamental_discriminant(self.d_K):
            raise ValueError(f"{self.d_K} is not a negative fundamental discriminant")
        if self.conductor < 1:
            raise ValueError("conductor must be positive")

    @property
    def D(self) -> int:
        return self.conductor ** 2 * self.d_K

    @property
    def theta_trace(self) -> int:
        return self.conductor * self.d_K

    @property
    def theta_norm(self) -> int:
        return self.conductor ** 2 * (self.d_K ** 2 - self.d_K) // 4


@dataclass(frozen=True)
class OrderElement:
    """``A + B*theta`` in the order."""

    order: OrderSpec
    A: int
    B: int

    def norm(self) -> int:
        o = self.order
        return self.A ** 2 + self.A * self.B * o.theta_trace + self.B ** 2 * o.theta_norm

    def trace(self) -> int:
        return 2 * self.A + self.B * self.order.theta_trace


def root_in_order(t: int, f: int, order: OrderSpec, sign: int = 1) -> OrderElement:
    """Coordinates of ``(t + sign*f*sqrt(d_K))/2`` in ``order``; needs ``conductor | f``."""
    c, dk = order.conductor, order.d_K
    if f % c:
        raise ValueError(f"conductor {c} does not divide {f}")
    if (t - f * dk) % 2:
        raise ValueError("(t + f sqrt(d_K))/2 is not integral")
    # sqrt(d_K) = 2*omega - d_K and theta = c*omega
    return OrderElement(order, (t - sign * f * dk) // 2, sign * f // c)


def conjugate_in_order(x: OrderElement) -> OrderElement:
    return OrderElement(x.order, x.trace() - x.A, -x.B)


def multiplication_matrix(x: OrderElement) -> tuple[tuple[int, int], tuple[int, int]]:
    """Matrix of ``y -> x*y`` on the basis ``{1, theta}`` (columns are images)."""
    o = x.order
    return ((x.A, -x.B * o.theta_norm), (x.B, x.A + x.B * o.theta_trace))


def _kernel_size(mat, n: int) -> int:
    """Number of ``v`` in ``(Z/n)^2`` with ``mat @ v = 0`` mod ``n``, via Smith normal form."""
    (a, b), (c, d) = mat
    e1 = gcd(gcd(a, b), gcd(c, d))
    if e1 == 0:
        return n * n
    e2 = abs(a * d - b * c) // e1
    return gcd(e1, n) * gcd(e2, n)


def _mobius(n: int) -> int:
    f = factorint(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def bn_count(order: OrderSpec, gamma_bar: OrderElement, N: int) -> int:
    """Elements of exact additive order ``N`` in ``O/NO`` fixed by multiplication by ``gamma_bar``.

    Inclusion-exclusion over the divisors ``d | N``: vectors divisible by ``d``
    in the kernel of ``M - I`` mod ``N`` correspond to the kernel mod ``N/d``.
    """
    if gamma_bar.order != order:
        raise ValueError("element does not belong to this order")
    if N < 1:
        raise ValueError("N must be positive")
    (a, b), (c, d) = multiplication_matrix(gamma_bar)
    shifted = ((a - 1, b), (c, d - 1))
    return sum(_mobius(dv) * _kernel_size(shifted, N // dv) for dv in divisors(N))


def exact_order_count(N: int) -> int:
    """Elements of exact order ``N`` in ``(Z/N)^2``."""
    total = N * N
    for l in factorint(N):
        total = total * (l * l - 1) // (l * l)
    return total
