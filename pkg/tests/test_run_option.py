import math
from fractions import Fraction

import pytest

from complexopt.pricing import MarketParams, simulate_policy
from complexopt.run_option import (
    RunRecordPolicy,
    boyd_expectation,
    boyd_variance_constant,
    choose_run_slack,
    nearest_integer,
    run_length_distribution,
    run_option_price,
    run_option_report,
    run_target_policy,
    slack_objective,
    strings_without_head_run,
)

from oracles import policy_value_exhaustive, run_length_counts, trailing_ones


class TestBoyd:
    def test_monotone(self):
        values = [boyd_expectation(n) for n in (2, 8, 64, 1024, 10**6)]
        assert values == sorted(values)

    def test_short_string_only_coarse(self):
        exact = float(run_length_distribution(2).mean)  # (0+1+1+2)/4 = 1
        assert exact == 1.0
        assert abs(boyd_expectation(2) - exact) < 1.0

    def test_needs_two_tosses(self):
        with pytest.raises(ValueError):
            boyd_expectation(1)

    def test_variance_constant(self):
        v = boyd_variance_constant()
        assert 3.4 < v < 3.6
        assert v <= 4
        assert abs(v - float(run_length_distribution(4096).variance)) <= 0.05

    def test_accuracy_at_1024(self):
        exact = float(run_length_distribution(1024).mean)
        assert abs(boyd_expectation(1024) - exact) <= 0.01


class TestDistribution:
    def test_tiny_cases(self):
        d = run_length_distribution(2)
        assert d.pmf == (Fraction(1, 4), Fraction(1, 2), Fraction(1, 4))
        assert run_length_distribution(3).mean == Fraction(11, 8)
        assert run_length_distribution(0).pmf == (Fraction(1),)

    def test_sums_to_one_exactly(self):
        for n in (0, 1, 5, 16, 100, 1024, 4096):
            assert sum(run_length_distribution(n).pmf) == 1, n

    def test_matches_enumeration(self):
        for n in range(11):
            counts = run_length_counts(n)
            d = run_length_distribution(n, cap=n)
            for r in range(n + 1):
                assert d.pmf[r] == Fraction(counts.get(r, 0), 2**n), (n, r)

    def test_no_run_recurrence_edges(self):
        assert strings_without_head_run(5, 0) == 0
        assert strings_without_head_run(5, 1) == 1  # only 00000
        assert strings_without_head_run(3, 4) == 8
        assert strings_without_head_run(3, 3) == 7  # everything but 111

    def test_pooled_tail_is_the_last_entry(self):
        d = run_length_distribution(1024)
        assert d.cap < 1024
        assert sum(d.pmf) == 1
        with pytest.raises(ValueError):
            d.cdf(d.cap)


def brute_force_price(N: int, params: MarketParams) -> Fraction:
    from oracles import snell_fold

    return snell_fold(N, trailing_ones, params.up_prob, params.rate)


class TestPriceDP:
    def test_degenerate(self):
        assert run_option_price(0).value == 0.0

    def test_matches_path_tree_brute_force(self):
        for N in range(11):
            got = run_option_price(N).value
            want = float(brute_force_price(N, MarketParams()))
            assert got == want, N

    def test_matches_brute_force_with_rate(self):
        params = MarketParams(Fraction(1, 4), Fraction(1, 2))
        for N in (0, 1, 4, 7):
            got = run_option_price(N, params).value
            want = float(brute_force_price(N, params))
            assert abs(got - want) < 1e-12, N

    def test_nondecreasing_in_horizon(self):
        values = [run_option_price(N).value for N in range(0, 40, 4)]
        assert values == sorted(values)

    def test_frontier_shape(self):
        price = run_option_price(16)
        assert price.frontier[16] == 0  # expiry settles everything
        # exercising is never optimal with an empty run before expiry
        assert all(g >= 1 for g in price.frontier[:16])


class TestSlack:
    def test_nearest_integer(self):
        assert nearest_integer(9.33) == 9
        assert nearest_integer(9.5) == 10
        assert nearest_integer(-1.2) == -1

    def test_target_from_expectation(self):
        # boyd_expectation(1024) = 9.3327, nearest integer 9, slack 2 -> 7
        policy = run_target_policy(1024, 2)
        assert policy.target == 7

    def test_precondition_violations(self):
        with pytest.raises(ValueError):
            run_target_policy(1024, 0)
        with pytest.raises(ValueError):
            run_target_policy(64, 6)  # target would drop below 1

    def test_scan_is_a_local_maximum(self):
        for N in (2**8, 2**10, 2**14):
            t = choose_run_slack(N)
            a = boyd_expectation(N)
            assert slack_objective(a, t) >= slack_objective(a, t + 1)
            if t > 2:
                assert slack_objective(a, t) >= slack_objective(a, t - 1)

    def test_growth_ratio(self):
        ratio = choose_run_slack(2**20) / choose_run_slack(2**10)
        assert 1.0 <= ratio <= 2.0

    def test_needs_minimum_horizon(self):
        with pytest.raises(ValueError):
            choose_run_slack(8)


class TestPolicySimulation:
    def test_policy_never_beats_exact_price(self):
        N = 64
        price = run_option_price(N).value
        policy = run_target_policy(N, 2)
        sim = simulate_policy(policy, N, samples=4000, seed=21)
        assert sim.value <= price + 3 * sim.stderr

    def test_maximum_slack_hits_first_head(self):
        # target 1: exercise on the first head; at r=0 the value is 1 - 2^-N
        N = 20
        policy = RunRecordPolicy(1)
        sim = simulate_policy(policy, N, samples=4000, seed=23)
        want = 1 - 2.0**-N
        # a miss is a one-in-a-million event, so the sample may be all hits
        assert abs(sim.value - want) <= 3 * sim.stderr + 1e-3
        assert sim.exercise_histogram[1] > 1500  # about half exercise at once

    def test_lapses_pay_nothing(self):
        policy = RunRecordPolicy(30)  # unreachable in 8 tosses
        sim = simulate_policy(policy, 8, samples=300, seed=2)
        assert sim.value == 0.0
        assert sim.exercise_histogram == {None: 300}

    def test_vectorized_matches_exhaustive(self):
        params = MarketParams(Fraction(1, 8), Fraction(2, 5))
        policy = RunRecordPolicy(2)
        exact = policy_value_exhaustive(policy, 7, params, trailing_ones)
        sim = simulate_policy(policy, 7, params, samples=8000, seed=29)
        assert abs(sim.value - float(exact)) <= 3 * sim.stderr

    def test_cross_module_threshold_consistency(self):
        # the pricing module's settle-at-expiry run policy and this module's
        # lapse-at-expiry policy differ exactly by the unexercised tail
        from complexopt.pricing import RunThresholdPolicy

        params = MarketParams()
        settle = policy_value_exhaustive(RunThresholdPolicy(3), 9, params, trailing_ones)
        lapse = policy_value_exhaustive(RunRecordPolicy(3), 9, params, trailing_ones)
        assert settle >= lapse
        sim = simulate_policy(RunThresholdPolicy(3), 9, params, samples=8000, seed=31)
        assert abs(sim.value - float(settle)) <= 3 * sim.stderr


class TestLargeHorizon:
    def test_chosen_slack_recovers_most_of_log2(self):
        # simulated mean payoff of the scanned-slack policy at a 2^14 horizon;
        # the 8-unit allowance absorbs the unspecified asymptotic constants
        N = 2**14
        policy = run_target_policy(N, choose_run_slack(N))
        sim = simulate_policy(policy, N, samples=100_000, seed=37)
        assert sim.value >= math.log2(N) - 8


class TestReport:
    def test_report_row(self):
        row = run_option_report(256, samples=500, seed=1)
        assert row["N"] == 256
        assert row["slack"] == choose_run_slack(256)
        assert row["policy_value"] <= row["price"] + 3 * row["policy_stderr"]
        assert abs(row["exact_run_expectation"] - row["boyd_expectation"]) < 0.05
