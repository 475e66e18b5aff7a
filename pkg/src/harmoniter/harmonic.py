"""Iterated harmonic numbers, hyperharmonic numbers, and Cesaro towers.

The iterated harmonic number of order j is the partial sum

    h_j(n) = sum_{k=1..n} 1 / (k * h_1(k) * h_2(k) * ... * h_{j-1}(k)),

with h_1 the ordinary harmonic numbers.  Everything here is exact: values
are BigRational and denominators can grow fast (quadratically in bits for
h_2, cubically for h_3), so long computations are guarded by a configurable
bit budget that fails loudly instead of thrashing.

A HarmonicStream is strictly sequential: each state depends on the
previous one.  Streams may be handed between threads but never mutated
concurrently; independent streams can of course run in parallel.
"""

from __future__ import annotations

from typing import Iterable, Iterator, List, Optional, Tuple

from gmpy2 import mpq, mpz

from .errors import DomainError, ResourceLimitError, UnsupportedOrderError
from .exact import RationalLike, as_rational, fraction_to_float

#: Default cap on the total stored bits of a stream's rationals (64 MiB).
DEFAULT_BIT_BUDGET = 64 * 1024 * 1024 * 8


class HarmonicStream:
    """Sequential generator of (h_1(k), ..., h_j(k)) for k = 1, 2, 3, ...

    ``levels[m]`` holds h_{m+1}(k) at the current index k.  Advancing
    updates the levels in ascending order so that each level's new term
    uses the freshly updated lower levels at index k+1 -- using the stale
    h_1(k) instead of h_1(k+1) produces subtly wrong rationals that still
    look plausible in floating point.
    """

    __slots__ = ("order", "index", "levels", "bit_budget")

    def __init__(self, order: int, bit_budget: Optional[int] = DEFAULT_BIT_BUDGET):
        if order < 1:
            raise DomainError("stream order must be >= 1")
        self.order = order
        self.index = 1
        # h_j(1) = 1 for every j.
        self.levels: List[mpq] = [mpq(1) for _ in range(order)]
        self.bit_budget = bit_budget

    def advance(self) -> "HarmonicStream":
        """Step from index k to k+1, updating every level. Returns self."""
        k = self.index + 1
        levels = self.levels
        levels[0] += mpq(1, k)
        if self.order > 1:
            prod = k * levels[0]
            for m in range(1, self.order):
                levels[m] += 1 / prod
                if m + 1 < self.order:
                    prod *= levels[m]
        self.index = k
        if self.bit_budget is not None:
            self._check_budget()
        return self

    def advance_to(self, n: int) -> "HarmonicStream":
        while self.index < n:
            self.advance()
        return self

    def next_order_term(self) -> mpq:
        """Term 1/(k * h_1(k) * ... * h_j(k)) that a (j+1)-level tower
        would add at the current index k.

        This is what lets a scan of level j+1 run on top of an order-j
        stream without materializing the level-(j+1) partial sums.
        """
        prod = mpq(self.index)
        for lv in self.levels:
            prod *= lv
        return 1 / prod

    def stored_bits(self) -> int:
        return sum(
            q.numerator.bit_length() + q.denominator.bit_length() for q in self.levels
        )

    def _check_budget(self) -> None:
        bits = self.stored_bits()
        if bits > self.bit_budget:
            raise ResourceLimitError(
                f"stream of order {self.order} holds {bits} bits at index "
                f"{self.index}, over the budget of {self.bit_budget}"
            )

    def __iter__(self) -> Iterator[Tuple[int, Tuple[mpq, ...]]]:
        """Yield (k, levels snapshot) forever, starting from the current state."""
        while True:
            yield self.index, tuple(self.levels)
            self.advance()


def h_stream_advance(stream: HarmonicStream) -> HarmonicStream:
    """Advance a stream by one index; alias for ``stream.advance()``."""
    return stream.advance()


def _h1_split(lo: int, hi: int) -> Tuple[mpz, mpz]:
    # Unreduced (num, den) of sum_{k=lo..hi} 1/k by binary splitting;
    # near-linear with subquadratic multiplication, unlike stepping.
    if lo == hi:
        return mpz(1), mpz(lo)
    mid = (lo + hi) // 2
    n1, d1 = _h1_split(lo, mid)
    n2, d2 = _h1_split(mid + 1, hi)
    return n1 * d2 + n2 * d1, d1 * d2


def h_eval(j: int, n: int, bit_budget: Optional[int] = DEFAULT_BIT_BUDGET) -> mpq:
    """Exact h_j(n).

    j = 1 uses binary splitting (fast even at n = 10^6); j >= 2 runs the
    sequential stream, which is the only way the nested definition can be
    evaluated.  Raises ResourceLimitError if the configured bit budget is
    exceeded along the way.
    """
    if j < 1 or n < 1:
        raise DomainError("h_j(n) requires j >= 1 and n >= 1")
    if j == 1:
        value = mpq(*_h1_split(1, n))
        bits = value.numerator.bit_length() + value.denominator.bit_length()
        if bit_budget is not None and bits > bit_budget:
            raise ResourceLimitError(f"h_1({n}) needs {bits} bits")
        return value
    stream = HarmonicStream(j, bit_budget=bit_budget)
    stream.advance_to(n)
    return stream.levels[j - 1]


def hyperharmonic(k: int, n: int, bit_budget: Optional[int] = DEFAULT_BIT_BUDGET) -> mpq:
    """Conway-Guy hyperharmonic H_n^(k) by the summation recursion.

    H_n^(1) = h_1(n) and H_n^(m+1) = H_1^(m) + ... + H_n^(m).  Dynamic
    programming over that recursion, O(k*n) exact additions; no closed
    form is used, so the definition is the single source of truth.
    """
    if k < 1 or n < 1:
        raise DomainError("hyperharmonic requires k >= 1 and n >= 1")
    row = []
    acc = mpq(0)
    for i in range(1, n + 1):
        acc += mpq(1, i)
        row.append(acc)
    for _ in range(k - 1):
        acc = mpq(0)
        nxt = []
        for v in row:
            acc += v
            nxt.append(acc)
        row = nxt
        if bit_budget is not None:
            bits = sum(q.numerator.bit_length() + q.denominator.bit_length() for q in row)
            if bits > bit_budget:
                raise ResourceLimitError(f"hyperharmonic row needs {bits} bits")
    return row[n - 1]


def _tree_pair_sum(terms: List[Tuple[mpz, mpz]], lo: int, hi: int) -> Tuple[mpz, mpz]:
    # Unreduced (num, den) of the sum of terms[lo:hi); balanced combining
    # keeps the big multiplications subquadratic-friendly.
    if hi - lo == 1:
        return terms[lo]
    mid = (lo + hi) // 2
    n1, d1 = _tree_pair_sum(terms, lo, mid)
    n2, d2 = _tree_pair_sum(terms, mid, hi)
    return n1 * d2 + n2 * d1, d1 * d2


def h_float_profile(
    j: int, ns: Iterable[int], bit_budget: Optional[int] = DEFAULT_BIT_BUDGET
) -> dict:
    """Double values of the exact h_j(n) at each requested n, in one pass.

    The arithmetic is exact throughout; only the final conversion rounds.
    For j <= 2 the partial sums are accumulated as unreduced fraction
    pairs combined segment by segment, which skips the per-step giant-gcd
    work that makes plain streaming to n ~ 2*10^4 take hours.  For j >= 3
    the sequential stream (with its bit budget) is the only route.
    """
    targets = sorted(set(int(n) for n in ns))
    if not targets:
        return {}
    if j < 1 or targets[0] < 1:
        raise DomainError("h_j(n) requires j >= 1 and n >= 1")
    out = {}
    if j >= 3:
        stream = HarmonicStream(j, bit_budget=bit_budget)
        for n in targets:
            stream.advance_to(n)
            out[n] = float(stream.levels[j - 1])
        return out

    acc_num, acc_den = mpz(0), mpz(1)
    prev = 0
    if j == 1:
        for n in targets:
            seg_num, seg_den = _h1_split(prev + 1, n)
            acc_num, acc_den = acc_num * seg_den + seg_num * acc_den, acc_den * seg_den
            prev = n
            out[n] = fraction_to_float(acc_num, acc_den)
        return out

    # Level-2 terms 1/(k*h_1(k)) as exact unreduced pairs.
    h1 = mpq(1)
    terms: List[Tuple[mpz, mpz]] = [(mpz(1), mpz(1))]
    for k in range(2, targets[-1] + 1):
        h1 += mpq(1, k)
        terms.append((h1.denominator, k * h1.numerator))
    for n in targets:
        seg_num, seg_den = _tree_pair_sum(terms, prev, n)
        acc_num, acc_den = acc_num * seg_den + seg_num * acc_den, acc_den * seg_den
        prev = n
        out[n] = fraction_to_float(acc_num, acc_den)
    return out


class CesaroTower:
    """Iterated partial sums A_n^(1..depth) of a series, kept exactly.

    ``partials[m][n-1]`` is A_n^(m+1): row 0 holds the plain partial sums,
    each higher row the running sums of the row below.
    """

    def __init__(self, depth: int):
        if depth < 1:
            raise DomainError("tower depth must be >= 1")
        self.depth = depth
        self.partials: List[List[mpq]] = [[] for _ in range(depth)]

    def append(self, term: RationalLike) -> None:
        carry = as_rational(term)
        for row in self.partials:
            if row:
                carry = row[-1] + carry
            row.append(carry)

    def extend(self, terms: Iterable[RationalLike]) -> None:
        for t in terms:
            self.append(t)

    def __len__(self) -> int:
        return len(self.partials[0])


def cesaro_sum(series: Iterable[RationalLike], order: int, n: int) -> mpq:
    """(C, order) value of the first n terms of a series, exactly.

    order 0 is the ordinary partial sum A_n^(1); order 1 is A_n^(2)/n;
    order 2 is A_n^(3)/binom(n+1, 2).  Higher orders are out of scope
    because no further normalizers are defined here.
    """
    if order not in (0, 1, 2):
        raise UnsupportedOrderError(f"order {order} not supported (use 0, 1, or 2)")
    if n < 1:
        raise DomainError("need n >= 1 terms")
    tower = CesaroTower(order + 1)
    it = iter(series)
    for _ in range(n):
        try:
            tower.append(next(it))
        except StopIteration:
            raise DomainError(f"series ended before yielding {n} terms") from None
    top = tower.partials[order][n - 1]
    if order == 0:
        return top
    if order == 1:
        return top / n
    return top / (mpq(n + 1) * n / 2)


def concavity_check(j: int, n_max: int, bit_budget: Optional[int] = DEFAULT_BIT_BUDGET) -> List[int]:
    """Indices n <= n_max - 2 where h_j(n+2) - 2*h_j(n+1) + h_j(n) >= 0.

    Empty result means h_j is strictly concave on the tested range.  All
    differences are taken in exact arithmetic.
    """
    if j < 1 or n_max < 3:
        raise DomainError("need j >= 1 and n_max >= 3")
    stream = HarmonicStream(j, bit_budget=bit_budget)
    window = [stream.levels[j - 1]]
    for _ in range(2):
        stream.advance()
        window.append(stream.levels[j - 1])
    violations = []
    n = 1
    while True:
        if window[2] - 2 * window[1] + window[0] >= 0:
            violations.append(n)
        if n == n_max - 2:
            break
        stream.advance()
        window = [window[1], window[2], stream.levels[j - 1]]
        n += 1
    return violations
