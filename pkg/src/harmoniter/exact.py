"""Exact rational arithmetic and p-adic valuations.

The value type for everything exact in this package is ``BigRational``,
an alias for ``gmpy2.mpq``: arbitrary precision, always stored in reduced
form with a positive denominator, zero represented as 0/1.  All operations
on it are pure and the values are immutable, so they can be shared freely
between threads.

The p-adic valuation nu_p follows the convention nu_p(0) = -infinity and
nu_p(p^r * a/b) = r with a, b coprime to p.  The valuation of a fraction
is independent of whether the fraction is reduced; canonical storage makes
that automatic here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Union

import gmpy2
from gmpy2 import mpq, mpz

from .errors import EmptyInputError, NotPrimeError

#: Arbitrary-precision reduced fraction (gmpy2.mpq). Construction reduces
#: and normalizes the sign, so den > 0 and gcd(|num|, den) = 1 always hold.
BigRational = mpq

RationalLike = Union[mpq, int, str]


class _NegInfinity:
    """Distinguished symbol for nu_p(0); orders below every integer."""

    __slots__ = ()

    def __lt__(self, other):
        return not isinstance(other, _NegInfinity)

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return isinstance(other, _NegInfinity)

    def __neg__(self):
        raise TypeError("NEG_INFINITY has no negation")

    def __repr__(self):
        return "NEG_INFINITY"


NEG_INFINITY = _NegInfinity()


@dataclass(frozen=True)
class PAdicValuation:
    """Result of a valuation query: the prime and the exponent.

    ``value`` is an int, or NEG_INFINITY exactly when the rational was zero.
    """

    prime: int
    value: Union[int, _NegInfinity]

    @property
    def is_neg_infinity(self) -> bool:
        return isinstance(self.value, _NegInfinity)


def as_rational(value: RationalLike) -> mpq:
    """Coerce ints, "num/den" strings, and rationals to BigRational."""
    if isinstance(value, mpq):
        return value
    return mpq(value)


def rat_add(a: RationalLike, b: RationalLike) -> mpq:
    """Exact sum of two rationals, in reduced form."""
    return as_rational(a) + as_rational(b)


def format_rational(q: RationalLike) -> str:
    """Serialize as "num/den" with den > 0 and reduced; integers as "n/1"."""
    q = as_rational(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> mpq:
    """Inverse of :func:`format_rational`; also accepts a bare integer."""
    return mpq(text.strip())


def fraction_to_float(num, den) -> float:
    """Double value of num/den without reducing the fraction.

    Works for components of any size: the quotient is computed to 96
    fractional bits in integer arithmetic and then rounded, so the result
    is accurate to far below one double ulp.  Useful when the reduced form
    would be expensive (a gcd of hundred-megabit integers) and only the
    float value is needed.
    """
    num = mpz(num)
    den = mpz(den)
    if den == 0:
        raise ZeroDivisionError("fraction_to_float with zero denominator")
    if num == 0:
        return 0.0
    sign = 1.0
    if (num < 0) != (den < 0):
        sign = -1.0
    num, den = abs(num), abs(den)
    # Keep the scaled quotient in float range regardless of magnitudes.
    shift = 96 + den.bit_length() - num.bit_length()
    if shift >= 0:
        q = (num << shift) // den
    else:
        q = num // (den << -shift)
    return sign * math.ldexp(float(q), -shift)


def is_prime(p: int) -> bool:
    """Deterministic primality by trial division up to sqrt(p).

    Every prime this package ever scans is below 200, so trial division is
    both sufficient and dependency-free.
    """
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def require_prime(p: int) -> int:
    if not is_prime(p):
        raise NotPrimeError(f"{p} is not prime")
    return p


def int_multiplicity(x, p: int) -> int:
    """Multiplicity of prime p in the nonzero integer x."""
    x = mpz(x)
    if x == 0:
        raise ValueError("multiplicity of p in zero is undefined")
    if x % p != 0:
        return 0
    _, mult = gmpy2.remove(x, p)
    return mult


def valuation(q: RationalLike, p: int) -> PAdicValuation:
    """nu_p(q): exponent r with q = p^r * a'/b', a' and b' coprime to p.

    Returns NEG_INFINITY for q = 0.  The numerator and denominator are
    examined by repeated exact division, not by factoring, so arbitrarily
    large components are fine.
    """
    require_prime(p)
    q = as_rational(q)
    if q == 0:
        return PAdicValuation(p, NEG_INFINITY)
    num_mult = int_multiplicity(q.numerator, p)
    if num_mult:
        return PAdicValuation(p, num_mult)
    return PAdicValuation(p, -int_multiplicity(q.denominator, p))


def valuation_of_sum_via_min(terms: Iterable[RationalLike], p: int) -> Optional[int]:
    """Strong-triangle shortcut for the valuation of a sum.

    If the minimum of nu_p over the terms is attained exactly once, that
    minimum equals nu_p of the sum and is returned.  A tied minimum makes
    no claim (returns None).  Terms must be nonzero.
    """
    require_prime(p)
    vals = []
    for t in terms:
        t = as_rational(t)
        if t == 0:
            raise ValueError("terms must be nonzero")
        vals.append(valuation(t, p).value)
    if not vals:
        raise EmptyInputError("need at least one term")
    lo = min(vals)
    if vals.count(lo) == 1:
        return lo
    return None
