"""Shared fixtures and independent oracles.

The oracles here are written against stdlib ``fractions.Fraction`` with
plain row-by-row loops, so they share neither the arithmetic backend nor
the iteration structure of the package under test.
"""

from fractions import Fraction

import pytest


def oracle_h_rows(j, n):
    """h_m(k) for m = 1..j, k = 1..n by definition, one row at a time.

    rows[m-1][k-1] = h_m(k).  Each row is rebuilt from the rows below by
    the literal summation, not by reusing the package's stream.
    """
    rows = []
    for m in range(1, j + 1):
        row = []
        total = Fraction(0)
        for k in range(1, n + 1):
            denom = Fraction(k)
            for lower in range(m - 1):
                denom *= rows[lower][k - 1]
            total += 1 / denom
            row.append(total)
        rows.append(row)
    return rows


def oracle_h(j, n):
    return oracle_h_rows(j, n)[j - 1][n - 1]


def oracle_hyperharmonic(k, n):
    """Conway-Guy recursion with the inner sum written out literally."""
    row = [Fraction(1, i) for i in range(1, n + 1)]
    row = [sum(row[:i], Fraction(0)) for i in range(1, n + 1)]  # H^(1)
    for _ in range(k - 1):
        row = [sum(row[:i], Fraction(0)) for i in range(1, n + 1)]
    return row[n - 1]


def oracle_cesaro_tower(terms, depth):
    """partials[m][i] = A_{i+1}^(m+1), each row summed independently."""
    rows = []
    prev = [Fraction(t) for t in terms]
    for _ in range(depth):
        row = [sum(prev[: i + 1], Fraction(0)) for i in range(len(prev))]
        rows.append(row)
        prev = row
    return rows


def oracle_valuation(q, p):
    """nu_p of a nonzero Fraction by literal repeated division."""
    q = Fraction(q)
    assert q != 0
    v = 0
    num, den = q.numerator, q.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


@pytest.fixture(scope="session")
def h2_scan_2000():
    """Exact-engine scan of h_2 denominators to n = 2000 for p in {2,3,5,7},
    shared by the 3-, 5- and 7-valuation acceptance checks."""
    import time

    from harmoniter import denominator_valuation_scan

    t0 = time.time()
    result = denominator_valuation_scan(2, [2, 3, 5, 7], 2000)
    result.elapsed = time.time() - t0
    return result


@pytest.fixture(scope="session")
def h3_scan_2000():
    """Certified p-adic scan of h_3 denominators to n = 2000 for p = 2."""
    from harmoniter import denominator_valuation_scan

    return denominator_valuation_scan(3, [2], 2000)
