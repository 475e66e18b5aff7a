"""Estimators for Euler's constant and its iterated generalizations.

Two families of constants arise when h_j is compared with ln_j:

* gamma_j = lim l_j(n) - ln_j(n).  The step sum l_j tracks the integral
  closely, and the difference admits a first-order correction term
  1/(2n ln n ... ln_{j-1} n) after which the error falls like
  1/(n^2 ln n ... ln_{j-1} n).  These constants are cheap to pin down.

* gamma_j' = lim h_j(n) - l_j(n).  This limit exists but converges only
  like 1/ln_{j-1}(n), so no useful digits can be extracted by summing --
  every estimate here carries a mandatory error-order annotation, and
  consumers are expected to surface it rather than quote bare digits.

The values depend on the conventional choice of the hyperpower lower
integration limit (equivalently the start index a(j)); no alternative
lower limit is exposed, so numbers stay reproducible.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, List, Optional

from .errors import DomainError
from .harmonic import DEFAULT_BIT_BUDGET, h_eval, h_float_profile
from .logiter import (
    MAX_ORDER,
    StepSumAccumulator,
    correction_denominator,
    l_step_sum,
    ln_iter,
    start_index,
)

METHODS = ("minimal", "standard", "improved", "primed")


@dataclass(frozen=True)
class GammaEstimate:
    """One constant estimate: inputs, raw and corrected values, and the
    order of magnitude of the remaining error.

    ``corrected`` is None for the primed family, which has no correction
    term; ``error_order`` is None only for the minimal method, which by
    construction says nothing about its own accuracy.
    """

    order: int
    n: int
    raw: float
    corrected: Optional[float]
    method: str
    error_order: Optional[float]

    def describe(self, precision: int = 12) -> str:
        value = self.raw if self.corrected is None else self.corrected
        text = f"gamma[j={self.order}] ~ {value:.{precision}f} (method={self.method}, n={self.n})"
        if self.error_order is not None:
            text += f", error order {self.error_order:.3e}"
        return text


def gamma_classic(n: int, method: str = "standard") -> GammaEstimate:
    """Estimate Euler's constant from h_1(n) - ln(n).

    minimal: the bare difference, no error statement.
    standard: same value, error known to fall like 1/n.
    improved: subtracts 1/(2n); error falls like 1/n^2, which is what
    makes n = 10^5 already give ~10 correct digits.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    if method not in ("minimal", "standard", "improved"):
        raise ValueError(f"method must be minimal|standard|improved, got {method!r}")
    raw = float(h_eval(1, n)) - math.log(n)
    if method == "improved":
        corrected = raw - 1.0 / (2.0 * n)
        error_order: Optional[float] = 1.0 / (n * n)
    else:
        corrected = raw
        error_order = None if method == "minimal" else 1.0 / n
    return GammaEstimate(1, n, raw, corrected, method, error_order)


def gamma_j_estimate(j: int, n: int) -> GammaEstimate:
    """Estimate gamma_j from l_j(n) - ln_j(n) with the first-order
    correction applied; this is the fast, digit-producing path.

    Corrected values at n and 2n agree to the order of
    1/(n^2 ln n ... ln_{j-1} n).
    """
    if j < 2 or j > MAX_ORDER:
        raise DomainError(f"j must be in 2..{MAX_ORDER}")
    if j == MAX_ORDER:
        warnings.warn(
            f"gamma_{MAX_ORDER} estimation sums from a({MAX_ORDER}) = "
            f"{start_index(MAX_ORDER)}; expect a long run",
            RuntimeWarning,
            stacklevel=2,
        )
    if n < start_index(j):
        raise DomainError(f"n must be >= a({j}) = {start_index(j)}")
    raw = l_step_sum(j, n) - ln_iter(j, float(n))
    denom = correction_denominator(j, n)
    corrected = raw - 1.0 / denom
    return GammaEstimate(j, n, raw, corrected, "improved", 2.0 / (n * denom))


def gamma_j_prime_estimate(
    j: int, n: int, bit_budget: Optional[int] = DEFAULT_BIT_BUDGET
) -> GammaEstimate:
    """Estimate gamma_j' from h_j(n) - l_j(n); h_j is computed exactly
    and converted to float only at the end.

    The error order 1/ln_{j-1}(n) attached to the result is the honest
    headline: it shrinks so slowly that no digit of gamma_j' should be
    trusted without consulting it.
    """
    estimates = gamma_j_prime_profile(j, [n], bit_budget=bit_budget)
    return estimates[0]


def gamma_j_prime_profile(
    j: int, ns: Iterable[int], bit_budget: Optional[int] = DEFAULT_BIT_BUDGET
) -> List[GammaEstimate]:
    """gamma_j' estimates at several n sharing one exact pass.

    The exact h_j prefixes dominate the cost, so batching the sample
    points (e.g. n and 2n for a convergence probe) matters.
    Results are sorted by n.
    """
    if j < 2 or j > MAX_ORDER:
        raise DomainError(f"j must be in 2..{MAX_ORDER}")
    targets = sorted(set(int(n) for n in ns))
    if not targets:
        return []
    if targets[0] < start_index(j):
        raise DomainError(f"n must be >= a({j}) = {start_index(j)}")
    h_floats = h_float_profile(j, targets, bit_budget=bit_budget)
    acc = StepSumAccumulator(j)
    out = []
    for n in targets:
        raw = h_floats[n] - acc.extend(n).value
        out.append(
            GammaEstimate(j, n, raw, None, "primed", 1.0 / ln_iter(j - 1, float(n)))
        )
    return out


def gamma_reference(n: int = 10**6) -> float:
    """Repo-grown high-accuracy gamma: the improved method at n with one
    Richardson step against n/2 to cancel the 1/n^2 term.

    Used as the in-package yardstick so no externally sourced digits ever
    enter the tests.
    """
    hi = gamma_classic(n, "improved").corrected
    lo = gamma_classic(n // 2, "improved").corrected
    # corrected(n) = gamma - c/n^2 + O(1/n^4), so 4/3 hi - 1/3 lo kills c.
    return hi + (hi - lo) / 3.0
