"""Acceptance gate: one test per stated criterion, at its stated tolerance.

Each test prints a PASS line with the measured values so a plain `pytest -v`
run doubles as the acceptance report.  The log2-tracking window for the run
option is asserted exactly as specified even though the exact DP value
(cross-checked against path-tree brute force below) sits outside the window
at the two smaller horizons; see the decisions ledger next to the repository
for the analysis.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest
from fastapi.testclient import TestClient

from complexopt import kernel, nfa
from complexopt.complexity import (
    an_complexity,
    an_value,
    bound,
    complement,
    deficiency,
    deficiency_at_least,
)
from complexopt.pricing import (
    MarketParams,
    american_price,
    european_price,
    exercise_bound,
    expected_deficiency,
    price_at_least,
    trend_report,
    truncate_decimal,
)
from complexopt.run_option import (
    boyd_expectation,
    choose_run_slack,
    run_length_distribution,
    run_option_price,
)
from complexopt.service import create_app
from oracles import all_strings, european_fold, run_length_counts, snell_fold, trailing_ones

QUARTER = MarketParams(Fraction(1, 4), Fraction(1, 2))

STATIC_TABLE = {
    0: ("0.000", "0.000"),
    2: ("0.500", "0.500"),
    4: ("0.625", "0.750"),
    6: ("0.687", "0.875"),
    8: ("0.765", "1.070"),
    10: ("0.791", "1.191"),
    12: ("0.720", "1.236"),
}

# leaf deficiencies of the length-4 tree, heads-first order
DEFICIENCY_LEAVES = {
    "1111": 2, "1110": 1, "1101": 0, "1100": 0,
    "1011": 0, "1010": 1, "1001": 0, "1000": 1,
    "0111": 1, "0110": 0, "0101": 1, "0100": 0,
    "0011": 0, "0010": 0, "0001": 1, "0000": 2,
}

# interior values of the corresponding option-price tree (rate 1/4)
PRICE_TREE_NODES = {
    "": Fraction(4224, 10000),
    "1": Fraction(528, 1000), "0": Fraction(528, 1000),
    "11": Fraction(1), "10": Fraction(32, 100),
    "01": Fraction(32, 100), "00": Fraction(1),
    "111": Fraction(12, 10), "110": Fraction(0),
    "101": Fraction(4, 10), "100": Fraction(4, 10),
    "011": Fraction(4, 10), "010": Fraction(4, 10),
    "001": Fraction(0), "000": Fraction(12, 10),
}

PERTURBATION_TABLE = [1, 2, 3, 4, 5, 6, 7, 8, 9, 8, 8, 8, 7]

RUN_GRID = [2**8, 2**10, 2**12, 2**14]


def test_static_table_reproduction(cache):
    started = time.perf_counter()
    for n, (want_ed, want_vn) in STATIC_TABLE.items():
        ed = truncate_decimal(expected_deficiency(n, cache))
        vn = truncate_decimal(american_price(n, cache=cache).root)
        assert (ed, vn) == (want_ed, want_vn), n
    elapsed = time.perf_counter() - started
    assert elapsed <= 600
    print(f"ACCEPTANCE PASS: static-vs-dynamic table, even n<=12, {elapsed:.1f}s")


def test_figure_reproduction(cache):
    started = time.perf_counter()
    for leaf, want in DEFICIENCY_LEAVES.items():
        assert deficiency(leaf, cache).deficiency == want, leaf
    tree = american_price(4, QUARTER, cache)
    for prefix, want in PRICE_TREE_NODES.items():
        assert tree.nodes[prefix].value == want, prefix
    for leaf, want in DEFICIENCY_LEAVES.items():
        assert tree.nodes[leaf].value == want, leaf
    assert tree.root == Fraction(264, 625)  # exactly 0.4224
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0
    print(f"ACCEPTANCE PASS: length-4 deficiency and price trees exact, {elapsed*1000:.0f}ms")


def test_worked_prices(cache):
    w2 = european_price(2, QUARTER, cache)
    assert w2 == Fraction(16, 50)
    b4 = exercise_bound(4, QUARTER)
    b5 = exercise_bound(5, QUARTER)
    assert b4 == b5 == Fraction(8192, 10000)
    print(f"ACCEPTANCE PASS: worked prices W_2={w2}, bound(4)=bound(5)={float(b4)}")


def test_perturbation_table(cache):
    started = time.perf_counter()
    patterns = ["0" * 23] + ["0" * a + "1" + "0" * (22 - a) for a in range(22, 10, -1)]
    got = [an_value(x, cache) for x in patterns]
    assert got == PERTURBATION_TABLE
    elapsed = time.perf_counter() - started
    print(f"ACCEPTANCE PASS: radius-1 ball of 0^23 = {got}, {elapsed:.1f}s")


@pytest.fixture(scope="module")
def raw_values():
    """Kernel values for every string of length <= 10, computed without the
    canonical cache so symmetry claims are actually exercised."""
    values = {}
    for n in range(11):
        for x in all_strings(n):
            values[x] = kernel.min_states(bytes(int(c) for c in x))[0]
    return values


def test_exhaustive_bound_and_symmetries(raw_values):
    for x, value in raw_values.items():
        n = len(x)
        assert 1 <= value <= bound(n), x
        assert value == raw_values[x[::-1]], x
        assert value == raw_values[complement(x)], x
    print(f"ACCEPTANCE PASS: bound and reversal/complement invariance, {len(raw_values)} strings")


def test_exhaustive_decision_consistency(raw_values, cache):
    checked = 0
    for x, value in raw_values.items():
        d = bound(len(x)) - value
        for k in range(bound(len(x)) + 2):
            assert deficiency_at_least(x, k, cache) == (d >= k), (x, k)
            checked += 1
    print(f"ACCEPTANCE PASS: deficiency decision consistency, {checked} queries")


def test_exhaustive_witness_validity(raw_values, cache):
    for x, value in raw_values.items():
        result = an_complexity(x, cache)
        assert result.complexity == value, x
        automaton = result.witness_automaton
        assert automaton.num_states == value, x
        assert nfa.accepts_uniquely(automaton, x), x
        assert result.witness[0] == 0 and result.witness[-1] in automaton.accepting
        for i, ch in enumerate(x):
            assert (result.witness[i], int(ch), result.witness[i + 1]) in automaton.transitions
        # no smaller witness exists: the level below the minimum must fail
        if value > 1:
            assert kernel.find_witness(bytes(int(c) for c in x), value - 1) is None, x
    print(f"ACCEPTANCE PASS: witness validity for all |x| <= 10")


def test_price_decision_matches_exact_european(cache):
    for n in range(11):
        exact = european_fold(
            n, lambda x: bound(len(x)) - an_value(x, cache), Fraction(1, 2), Fraction(0)
        )
        scaled = exact * 2**n
        assert scaled.denominator == 1
        s = scaled.numerator
        top = 2**n * bound(n)
        probes = {0, 1, s - 1, s, s + 1, top}
        probes.update(range(0, top + 1, max(1, top // 17)))
        for k in probes:
            if 0 <= k <= top:
                assert price_at_least(n, k, cache) == (s >= k), (n, k)
    print("ACCEPTANCE PASS: price decision == exact European comparison, n <= 10")


def test_parity_monotonicity_chain(cache):
    roots = {n: american_price(n, cache=cache).root for n in range(12)}
    for k in range(6):
        assert roots[2 * k] == roots[2 * k + 1], k
    for n in range(10):
        assert roots[n] <= roots[n + 1], n
    for n in range(11):
        ed = expected_deficiency(n, cache)
        w = european_price(n, cache=cache)
        assert ed <= w <= roots[n], n
    print("ACCEPTANCE PASS: parity, monotonicity, and static<=European<=American chain")


def test_run_option_exact_matches_brute_force():
    for N in range(13):
        got = run_option_price(N).value
        want = float(snell_fold(N, trailing_ones, Fraction(1, 2), Fraction(0)))
        assert got == want, N
    print("ACCEPTANCE PASS: run-option DP == path-tree brute force, N <= 12, exact")


@pytest.mark.parametrize("exponent", [10, 12, 14])
def test_run_option_price_tracks_log2(exponent):
    # the [0.8, 1.2] window is asserted as specified; the exact DP value sits
    # below 0.8 log2 N at the two smaller horizons (see the decisions ledger)
    N = 2**exponent
    value = run_option_price(N).value
    ratio = value / math.log2(N)
    assert 0.8 <= ratio <= 1.2, f"run price({N})={value:.4f}, ratio {ratio:.4f}"
    print(f"ACCEPTANCE PASS: run price(2^{exponent})/log2 = {ratio:.4f} in [0.8, 1.2]")


def test_run_option_expectation_sandwich():
    for N in RUN_GRID:
        value = run_option_price(N).value
        expectation = float(run_length_distribution(N).mean)
        slack = choose_run_slack(N)
        assert expectation - slack <= value <= expectation + 1, N
    print(f"ACCEPTANCE PASS: mean run - slack <= price <= mean run + 1 on {RUN_GRID}")


def test_run_distribution_against_enumeration():
    for n in range(17):
        counts = run_length_counts(n)
        dist = run_length_distribution(n, cap=n)
        for r in range(n + 1):
            assert dist.pmf[r] == Fraction(counts.get(r, 0), 2**n), (n, r)
    gap = abs(boyd_expectation(1024) - float(run_length_distribution(1024).mean))
    assert gap <= 0.01
    print(f"ACCEPTANCE PASS: run distribution exact to n=16; |Boyd-exact|@1024 = {gap:.5f}")


def test_robustness_bound_exhaustive():
    for n in range(1, 15):
        codes = np.arange(2**n, dtype=np.uint32)
        runs = _longest_run_table(codes, n)
        for i in range(n):
            flipped = codes ^ np.uint32(1 << i)
            assert np.all(runs[codes] <= 2 * runs[flipped] + 1), (n, i)
    print("ACCEPTANCE PASS: single-flip run bound, exhaustive to length 14")


def _longest_run_table(codes, n):
    """Longest run of either symbol for every n-bit pattern, vectorized."""
    mask = np.uint32((1 << n) - 1)
    ones = codes
    zeros = ~codes & mask
    table = np.zeros(codes.shape, dtype=np.int64)
    for bits in (ones, zeros):
        current = bits.copy()
        length = 0
        while current.any():
            length += 1
            still = current != 0
            table[still] = np.maximum(table[still], length)
            current = current & (current >> np.uint32(1))
    return table


def test_perpetual_trend_reported_not_asserted(cache):
    zero_rows = trend_report(12, cache=cache)
    assert [n for n, _ in zero_rows] == list(range(13))
    assert zero_rows[-1][1] > zero_rows[2][1]  # growth visible at zero rate
    quarter_rows = trend_report(12, QUARTER, cache)
    tail = float(quarter_rows[-1][1])
    gap = abs(tail - 0.47)
    verdict = "within" if gap <= 0.05 else "outside"
    print(
        "ACCEPTANCE PASS (informational only): perpetual trends reported; "
        f"V_12 at rate 1/4 = {tail:.4f}, {verdict} 0.05 of the referenced 0.47"
    )


def test_game_integrity_secondary(cache):
    sessions = 10_000
    app = create_app(cache=cache)
    optimal_payoffs = np.zeros(sessions)
    discount = Fraction(4, 5)
    with TestClient(app) as client:
        value = client.post(
            "/price", json={"style": "american", "n": 4, "rate": 0.25}
        ).json()["value"]
        for seed in range(sessions):
            game = client.post(
                "/game/new", json={"n": 4, "rate": 0.25, "p": 0.5, "seed": seed}
            ).json()
            gid = game["id"]
            state = game["state"]
            while state["status"] == "active":
                state = client.post(f"/game/{gid}/step", json={"action": "hold"}).json()
            report = client.get(f"/game/{gid}/report").json()
            # accounting invariant: recompute the player payoff independently
            m = report["player_exercise_time"]
            prefix = report["ticks"][:m]
            recomputed = Fraction(deficiency(prefix, cache).deficiency) * discount**m
            assert Fraction(report["player_payoff_exact"]) == recomputed, seed
            m_opt = report["optimal_exercise_time"]
            opt_prefix = report["ticks"][:m_opt]
            recomputed_opt = Fraction(deficiency(opt_prefix, cache).deficiency) * discount**m_opt
            assert Fraction(report["optimal_payoff_exact"]) == recomputed_opt, seed
            optimal_payoffs[seed] = report["optimal_payoff"]
    mean = optimal_payoffs.mean()
    stderr = optimal_payoffs.std(ddof=1) / math.sqrt(sessions)
    assert abs(mean - value) <= 3 * stderr, (mean, value, stderr)
    print(
        f"ACCEPTANCE PASS (secondary): {sessions} sessions, optimal replay mean "
        f"{mean:.4f} vs V_4 {value} (3 SE = {3*stderr:.4f}); accounting exact on every session"
    )
