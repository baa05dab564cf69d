"""Acceptance criteria, one test each, with their wall-clock limits.

Each test prints a PASS/FAIL line; the lines are repeated in the terminal
summary so they show up without ``-s``.
"""

import time

import pytest

from ansulator.manifolds import lens_presentation
from ansulator.selftest import DEFAULT_SEED, lens_kappa_table, run_check

RESULTS = []

# (criterion, check name, seconds)
CRITERIA = [
    (1, "s3-anchor", 1.0),
    (2, "s1xs2-anchor", 1.0),
    (3, "sl2z-relations", 1.0),
    (4, "lens-oracle-agreement", 30.0),
    (5, "gauss-sum-oracle", 5.0),
    (6, "frobenius-verifier", 5.0),
    (7, "xi-cross-check", 5.0),
    (8, "double-coset-invariance", 30.0),
    (9, "isotopy-invariance", 10.0),
    (10, "toric-lens-values", 1.0),
    (11, "exact-arithmetic", 10.0),
]


def _record(number, name, ok, elapsed, limit, extra=""):
    line = f"criterion {number:2d} {name:<24s} {'PASS' if ok else 'FAIL'} {elapsed:6.2f}s (limit {limit:g}s){extra}"
    RESULTS.append(line)
    print(line)


@pytest.mark.parametrize("number,name,limit", CRITERIA, ids=[f"c{n}-{c}" for n, c, _ in CRITERIA])
def test_criterion(number, name, limit):
    start = time.perf_counter()
    result = run_check(name, DEFAULT_SEED)
    elapsed = time.perf_counter() - start
    ok = result.passed and elapsed < limit
    _record(number, name, ok, elapsed, limit, "" if result.passed else f" counterexample={result.counterexample}")
    assert result.passed, result.counterexample
    assert elapsed < limit, f"{name} took {elapsed:.2f}s"


def test_lens_kappa_powers_bounded():
    # the measured exponent respects |n| <= m + 2 with m the chain length
    table = lens_kappa_table()
    for (cat, p, q), n in table.items():
        m = len(lens_presentation(p, q).framings)
        assert abs(n) <= m + 2, (cat, p, q, n)
    assert table == lens_kappa_table()
