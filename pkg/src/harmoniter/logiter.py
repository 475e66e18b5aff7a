"""Iterated natural logarithms, hyperpowers of e, and float step sums.

ln_j is the natural logarithm composed j times; its domain is (d_j, oo)
with d_1 = 0 and d_j the (j-2)th hyperpower of e for j >= 2.  The step sum

    l_j(n) = sum_{k=a(j)..n} 1 / (k * ln k * ln_2 k * ... * ln_{j-1} k)

is the integer step-function approximation of the integral defining ln_j,
started at a(j), the smallest integer inside the domain.  Composition of
logs is used rather than quadrature of the defining integral: with the
hyperpower lower limit the two agree exactly, and composition is precise
and fast.

Everything in this module is double precision; exactness lives in the
``exact`` and ``harmonic`` modules.  Step sums use compensated (Neumaier)
accumulation because the constant estimators add up to ~10^7 small terms
and naive accumulation would lose exactly the digits the second-order
correction is meant to expose.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, HyperpowerOverflowError

#: Largest supported iteration order: a(6) would need the 4th hyperpower
#: of e, which does not fit in any floating-point format worth having.
MAX_ORDER = 5

_A_TABLE = (1, 2, 3, 16, 3814280)


def hyperpower_e(i: int) -> float:
    """The i-th hyperpower of e: 1, e, e^e, e^(e^e), ... as a double.

    The 4th hyperpower has over 1.6 million decimal digits, so i >= 4
    raises HyperpowerOverflowError.
    """
    if i < 0:
        raise DomainError("hyperpower index must be >= 0")
    if i >= 4:
        raise HyperpowerOverflowError(f"hyperpower {i} of e overflows double precision")
    x = 1.0
    for _ in range(i):
        x = math.exp(x)
    return x


def domain_floor(j: int) -> float:
    """d_j, the left edge of the domain of ln_j."""
    if j < 1:
        raise DomainError("order must be >= 1")
    if j == 1:
        return 0.0
    return hyperpower_e(j - 2)


def start_index(j: int) -> int:
    """a(j): smallest positive integer strictly inside the domain of ln_j."""
    if j < 1:
        raise DomainError("order must be >= 1")
    if j > MAX_ORDER:
        raise DomainError(f"order {j} not supported (a({j}) needs hyperpower {j - 2})")
    return _A_TABLE[j - 1]


@dataclass(frozen=True)
class IterLogContext:
    """Domain data for one iteration order: (j, d_j, a(j))."""

    order: int
    domain_floor: float
    start_index: int

    @classmethod
    def for_order(cls, j: int) -> "IterLogContext":
        return cls(order=j, domain_floor=domain_floor(j), start_index=start_index(j))


def ln_iter(j: int, x: float) -> float:
    """ln applied j times to x; requires x > d_j."""
    if j < 1:
        raise DomainError("order must be >= 1")
    if x <= domain_floor(j):
        raise DomainError(f"ln_{j} needs x > {domain_floor(j)!r}, got {x!r}")
    for _ in range(j):
        x = math.log(x)
    return x


def _step_term(j: int, k: int) -> float:
    # 1 / (k * ln k * ln_2 k * ... * ln_{j-1} k)
    x = float(k)
    d = x
    for _ in range(j - 1):
        x = math.log(x)
        d *= x
    return 1.0 / d


class StepSumAccumulator:
    """Running compensated value of l_j from a(j) up to the current index.

    Sequential by construction; extend() may be called repeatedly so that
    estimates at n and 2n share one pass over the terms.
    """

    __slots__ = ("order", "index", "_sum", "_comp")

    def __init__(self, order: int):
        if order < 1 or order > MAX_ORDER:
            raise DomainError(f"order must be in 1..{MAX_ORDER}")
        self.order = order
        self.index = start_index(order) - 1
        self._sum = 0.0
        self._comp = 0.0

    def extend(self, n: int) -> "StepSumAccumulator":
        """Add the terms for indices (current, n]."""
        if n < self.index:
            raise DomainError(f"cannot rewind accumulator from {self.index} to {n}")
        j = self.order
        s, c = self._sum, self._comp
        for k in range(self.index + 1, n + 1):
            t = _step_term(j, k)
            tmp = s + t
            if abs(s) >= abs(t):
                c += (s - tmp) + t
            else:
                c += (t - tmp) + s
            s = tmp
        self._sum, self._comp = s, c
        self.index = max(self.index, n)
        return self

    @property
    def value(self) -> float:
        return self._sum + self._comp


def l_step_sum(j: int, n: int) -> float:
    """l_j(n), the compensated float step sum from a(j) to n.

    For j = 1 this coincides with the harmonic number h_1(n) up to float
    rounding (within 1e-12 relative error for n <= 10^6).
    """
    if j < 1 or j > MAX_ORDER:
        raise DomainError(f"order must be in 1..{MAX_ORDER}")
    if n < start_index(j):
        raise DomainError(f"l_{j} starts at a({j}) = {start_index(j)}, got n = {n}")
    return StepSumAccumulator(j).extend(n).value


def correction_denominator(j: int, n: int) -> float:
    """2n * ln n * ... * ln_{j-1} n, the divisor of the first-order
    correction term; the empty product for j = 1 leaves plain 2n."""
    x = float(n)
    d = x
    for _ in range(j - 1):
        x = math.log(x)
        d *= x
    return 2.0 * d
