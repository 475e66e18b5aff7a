"""Acceptance suite: one test per acceptance criterion, one line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the PASS/FAIL line
per criterion.  Criterion 11 asserts a claim about the two-sided step
bound that exact computation refutes (the lower bound fails for every
k >= 13); it is kept as stated and fails honestly -- see README and the
regression test pinning the computed truth in test_numtheory.py.
"""

import math
import time
from contextlib import contextmanager

from gmpy2 import mpq

from harmoniter import (
    CesaroTower,
    HarmonicStream,
    cesaro_sum,
    denominator_valuation_scan,
    gamma_classic,
    gamma_j_estimate,
    gamma_j_prime_profile,
    hyperharmonic,
    inequality_threshold,
    integrality_check,
)

from conftest import oracle_h_rows, oracle_hyperharmonic


@contextmanager
def criterion(num, title):
    try:
        yield
    except BaseException:
        print(f"[criterion {num:02d}] FAIL  {title}")
        raise
    print(f"[criterion {num:02d}] PASS  {title}")


H2_THREE_VALUATION_RUNS_TO_2000 = [
    (1, 1, 0), (2, 53, 1), (54, 62, 0), (63, 65, 1), (66, 161, 0),
    (162, 188, 1), (189, 197, 0), (198, 1457, 1), (1458, 1700, 0),
    (1701, 1781, 1), (1782, 2000, 0),
]

H3_TWO_VALUATION_PATTERN = [
    (1, 1, 0), (2, 11, 2), (12, 12, 0), (13, 31, 3), (32, 2000, 6),
]

# Resolved by computation (the surrounding prose is self-contradictory)
# and frozen: the 7-valuation of denom(h_2) is 0 through n = 5 and 2 from
# n = 6 onward.
H2_SEVEN_VALUATION_TO_2000 = [(1, 5, 0), (6, 2000, 2)]


def test_criterion_01_h2_three_valuation_runs(h2_scan_2000):
    with criterion(1, "3-valuation of denom(h_2) reproduces the reference run table"):
        table = h2_scan_2000.table_for(3)
        assert table.as_tuples() == H2_THREE_VALUATION_RUNS_TO_2000
        assert h2_scan_2000.elapsed < 120.0


def test_criterion_02_h3_two_valuation_pattern(h3_scan_2000):
    with criterion(2, "2-valuation of denom(h_3) matches the 5-run pattern"):
        assert h3_scan_2000.table_for(2).as_tuples() == H3_TWO_VALUATION_PATTERN


def test_criterion_03_h2_five_and_seven_valuations(h2_scan_2000):
    with criterion(3, "5-valuation constant 2 on [4, 2000]; 7-valuation boundary frozen"):
        assert h2_scan_2000.table_for(5).as_tuples() == [(1, 3, 0), (4, 2000, 2)]
        assert h2_scan_2000.table_for(7).as_tuples() == H2_SEVEN_VALUATION_TO_2000
        # and the 2-valuation stays zero throughout, for the record
        assert h2_scan_2000.table_for(2).as_tuples() == [(1, 2000, 0)]


def test_criterion_04_theisinger_law():
    with criterion(4, "nu_2(denom h_1(n)) = floor(log2 n) on [2, 4096]"):
        result = denominator_valuation_scan(1, [2], 4096)
        expected = [(1, 1, 0)]
        r = 1
        while 2**r <= 4096:
            expected.append((2**r, min(2 ** (r + 1) - 1, 4096), r))
            r += 1
        assert result.tables[0].as_tuples() == expected


def test_criterion_05_gamma_estimates():
    with criterion(5, "gamma at n=5 (0.6738/0.5738) and quadratic convergence to n=10^6"):
        std = gamma_classic(5, "standard")
        imp = gamma_classic(5, "improved")
        assert f"{std.raw:.4f}" == "0.6739" and f"{std.raw:.3f}" == "0.674"
        assert f"{imp.corrected:.4f}" == "0.5739" and f"{imp.corrected:.3f}" == "0.574"
        big = gamma_classic(10**6, "improved").corrected
        mid = gamma_classic(10**5, "improved").corrected
        assert abs(big - mid) <= 1e-9


def test_criterion_06_gamma2_stability():
    with criterion(6, "gamma_2 corrected estimates at 10^5 and 2*10^5 agree to 1e-9"):
        t0 = time.time()
        a = gamma_j_estimate(2, 10**5).corrected
        b = gamma_j_estimate(2, 2 * 10**5).corrected
        elapsed = time.time() - t0
        assert abs(b - a) <= 1e-9
        assert elapsed < 30.0


def test_criterion_07_gamma_prime_slowness():
    with criterion(7, "h_2 - l_2 gaps decay like c/ln n (slow by design)"):
        ns = [100, 200, 1000, 2000, 10**4, 2 * 10**4]
        raws = {e.n: e.raw for e in gamma_j_prime_profile(2, ns)}
        gaps = {n: abs(raws[2 * n] - raws[n]) for n in (100, 1000, 10**4)}
        assert gaps[100] > gaps[1000] > gaps[10**4] > 0
        for n_big, n_small in ((1000, 100), (10**4, 1000)):
            gap_ratio = gaps[n_small] / gaps[n_big]
            predicted = math.log(n_big) / math.log(n_small)  # 1/ln n model
            assert predicted / 3 <= gap_ratio <= predicted * 3


def test_criterion_08_cesaro():
    with criterion(8, "(C,1) of +-1 is ceil(n/2)/n exactly; (C,2) of 1-2+3-4 approaches 1/4"):
        tower = CesaroTower(2)
        sign = 1
        for n in range(1, 1001):
            tower.append(sign)
            sign = -sign
            assert tower.partials[1][n - 1] == mpq(math.ceil(n / 2))
        def alternating():
            s = 1
            while True:
                yield s
                s = -s
        assert cesaro_sum(alternating(), 1, 1000) == mpq(1, 2)

        def one_minus_two():
            k, s = 1, 1
            while True:
                yield s * k
                k += 1
                s = -s
        values = [cesaro_sum(one_minus_two(), 2, n) for n in range(1, 201)]
        devs = [abs(v - mpq(1, 4)) for v in values]
        for i in range(2, len(devs)):  # monotone along each parity class
            assert devs[i] < devs[i - 2]
        assert devs[-1] < mpq(1, 400)


def test_criterion_09_integrality():
    with criterion(9, "only h_j(1) is an integer for j in {1,2,3}, n <= 2000"):
        assert integrality_check(1, 2000) == [1]
        assert integrality_check(2, 2000) == [1]
        assert integrality_check(3, 2000) == [1]


def test_criterion_10_oracle_equivalence():
    with criterion(10, "streaming h_j == naive recomputation; hyperharmonic == brute tower"):
        rows = oracle_h_rows(4, 50)
        stream = HarmonicStream(4)
        for k in range(1, 51):
            if k > 1:
                stream.advance()
            for m in range(4):
                assert stream.levels[m] == mpq(rows[m][k - 1])
        for k in (1, 2, 3, 4):
            for n in (1, 7, 25, 50):
                assert hyperharmonic(k, n) == mpq(oracle_hyperharmonic(k, n))


def test_criterion_11_inequality_threshold():
    with criterion(11, "two-sided step bound: violations confined to small k"):
        scan = inequality_threshold(10**4)
        # As stated, the violation set must be exactly {2, 3, 4} with the
        # bound holding from k* = 5 through k_max.  Exact computation
        # refutes this: (k-1) h_1(k-1) ~ k(ln k + 0.577...) overtakes
        # (k+1) ln(k+1) ~ k ln k + ln k, so the lower bound fails for
        # every k >= 13 and the two-sided bound holds only on [5, 12].
        # The criterion is kept as stated and fails honestly; the
        # computed truth is pinned in test_numtheory.py.
        assert scan.violations == [2, 3, 4], (
            "two-sided bound refuted beyond k=12: first extra violations "
            f"{[k for k in scan.violations if k > 4][:3]}, k*={scan.k_star}"
        )
        assert scan.k_star == 5


def test_criterion_12_checkpoint_determinism(tmp_path):
    with criterion(12, "interrupted-and-resumed scan output is byte-identical"):
        for j, primes, engine in ((2, [3], "exact"), (3, [2], "padic")):
            ckpt = tmp_path / f"c{j}.ckpt"
            full = denominator_valuation_scan(j, primes, 400, engine=engine)
            denominator_valuation_scan(j, primes, 170, checkpoint=ckpt, engine=engine,
                                       checkpoint_every=50)
            resumed = denominator_valuation_scan(j, primes, 400, checkpoint=ckpt,
                                                 resume=True)
            a, b = tmp_path / f"full{j}.csv", tmp_path / f"res{j}.csv"
            full.tables[0].write_csv(a)
            resumed.tables[0].write_csv(b)
            assert a.read_bytes() == b.read_bytes()
            assert resumed.final_state.digest() == full.final_state.digest()
