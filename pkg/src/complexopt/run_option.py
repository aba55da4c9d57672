"""The run option: current-run-of-heads payoff, exact DP price, and policies.

The option pays the length of the trailing block of heads when exercised.
Its state is Markov in (time, current run), so the exact price is an O(N^2)
backward induction rather than a 2^N tree walk.  Longest-run statistics give
the asymptotics: the mean longest head run in n fair tosses expands as
log2 n + gamma/ln 2 - 3/2 up to tiny oscillation (Boyd's classic result),
with bounded variance, which pins the option price at about log2 N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from complexopt.pricing import DEFAULT_PARAMS, MarketParams


def boyd_expectation(n: int) -> float:
    """Asymptotic mean of the longest run of heads in n fair tosses.

    Omits the tiny periodic oscillation (|eps| < 2e-6) and the vanishing
    O(n^-1 log^4 n) remainder of the full expansion.
    """
    if n < 2:
        raise ValueError("the expansion needs n >= 2")
    return math.log2(n) + np.euler_gamma / math.log(2) - 1.5


def boyd_variance_constant() -> float:
    """Limiting variance of the longest run of heads (up to oscillation):
    1/12 + pi^2 / (6 ln^2 2), about 3.507."""
    return 1 / 12 + math.pi**2 / (6 * math.log(2) ** 2)


@dataclass(frozen=True)
class RunLengthDistribution:
    """Distribution of the longest run of heads in n fair tosses.

    Exact rational probabilities; run lengths at or beyond `cap` are pooled
    into the last pmf entry, so the pmf always sums to exactly 1.  The cap
    defaults generously above 2 log2 n, leaving a pooling error in the moments
    below n * 2^(1-cap) -- under 1e-9 for any n this module handles.  With
    cap >= n the distribution is the complete exact one.
    """

    n: int
    cap: int
    pmf: tuple[Fraction, ...]  # pmf[r] = P(longest run == r), pooled at r = cap

    def cdf(self, r: int) -> Fraction:
        """P(longest run <= r) for r below the cap."""
        if r >= self.cap and self.cap < self.n:
            raise ValueError(f"cdf beyond the pooled tail (cap {self.cap})")
        return sum(self.pmf[: r + 1], Fraction(0))

    @property
    def mean(self) -> Fraction:
        return sum((Fraction(r) * p for r, p in enumerate(self.pmf)), Fraction(0))

    @property
    def variance(self) -> Fraction:
        mu = self.mean
        return sum((p * (Fraction(r) - mu) ** 2 for r, p in enumerate(self.pmf)), Fraction(0))


def strings_without_head_run(n: int, r: int) -> int:
    """Number of length-n binary strings with no r consecutive heads.

    Order-r linear recurrence a_m = a_{m-1} + ... + a_{m-r} (condition on the
    position of the first tail), seeded a_m = 2^m for m < r; exact integers
    with a sliding window sum, O(n) big-int additions.
    """
    if r <= 0:
        return 0
    if n < r:
        return 2**n
    window = [2**m for m in range(r)]  # a_{m-r} .. a_{m-1}
    total = 2**r - 1
    for _ in range(r, n + 1):
        new = total
        total += new - window[0]
        window.append(new)
        del window[0]
    return window[-1]


def run_length_distribution(n: int, cap: int | None = None) -> RunLengthDistribution:
    """Pmf of the longest head run via the no-run counting recurrence.

    Cost O(n * cap) big-int additions; see RunLengthDistribution for the
    pooled-tail convention.
    """
    if n < 0:
        raise ValueError("length must be nonnegative")
    if cap is None:
        cap = min(n, 2 * max(1, math.ceil(math.log2(n))) + 16) if n > 1 else n
    cap = min(cap, n)
    denom = 2**n
    below = [strings_without_head_run(n, r) for r in range(cap + 1)]  # P(R < r) * 2^n
    pmf = [Fraction(below[r + 1] - below[r], denom) for r in range(cap)]
    pmf.append(Fraction(denom - below[cap], denom))  # pooled tail P(R >= cap)
    return RunLengthDistribution(n, cap, tuple(pmf))


@dataclass(frozen=True)
class RunOptionPrice:
    horizon: int
    value: float
    frontier: tuple[int, ...]  # per time step, smallest run at which exercise is optimal


def run_option_price(N: int, params: MarketParams = DEFAULT_PARAMS) -> RunOptionPrice:
    """Exact price of the American run option by Markov backward induction.

    V(N, g) = g; V(k, g) = max(g, [p V(k+1, g+1) + (1-p) V(k+1, 0)] / (1+r)).
    Returns the root value and the exercise frontier.  O(N^2) time, O(N)
    rolling storage.
    """
    if N < 0:
        raise ValueError("horizon must be nonnegative")
    p = float(params.up_prob)
    disc = 1.0 / (1.0 + float(params.rate))
    values = np.arange(N + 1, dtype=np.float64)  # V(N, g) = g
    frontier = [0] * (N + 1)  # at expiry any positive run is settled; 0 is a tie
    for k in range(N - 1, -1, -1):
        g = np.arange(k + 1, dtype=np.float64)
        continuation = disc * (p * values[1 : k + 2] + (1 - p) * values[0])
        exercised = g >= continuation
        hits = np.nonzero(exercised)[0]
        frontier[k] = int(hits[0]) if hits.size else k + 1
        values = np.maximum(g, continuation)
    return RunOptionPrice(N, float(values[0]), tuple(frontier))


def nearest_integer(x: float) -> int:
    """Nearest integer, halves away from zero."""
    return int(math.floor(x + 0.5)) if x >= 0 else -int(math.floor(-x + 0.5))


@dataclass(frozen=True)
class RunRecordPolicy:
    """Exercise when the current run first reaches the target; if the target
    is never reached the option lapses worthless."""

    target: int
    payoff_kind = "run"
    settles_at_expiry = False

    @property
    def name(self) -> str:
        return f"run-record({self.target})"

    def exercise_time(self, path: str) -> int | None:
        run = 0
        for m, ch in enumerate(path, start=1):
            run = run + 1 if ch == "1" else 0
            if run >= self.target:
                return m
        return None


def run_target_policy(N: int, slack: int) -> RunRecordPolicy:
    """Stopping rule: exercise once the current run reaches (expected longest
    run, nearest integer) minus `slack`; waits for a run almost as long as
    ever expected by the horizon."""
    if slack < 1:
        raise ValueError("slack must be at least 1")
    target = nearest_integer(boyd_expectation(N)) - slack
    if target < 1:
        raise ValueError(f"slack {slack} pushes the target below 1 for horizon {N}")
    return RunRecordPolicy(target)


def slack_objective(a: float, t: int) -> float:
    """Chebyshev lower bound (a - t - 1)(1 - 4/(t-1)^2) on the policy value,
    with a the expected longest run; maximized by the slack choice."""
    return (a - t - 1) * (1 - 4 / (t - 1) ** 2)


def choose_run_slack(N: int) -> int:
    """Slack maximizing the Chebyshev bound, by integer scan (ties toward
    smaller slack).  Grows like the cube root of ln N."""
    if N < 16:
        raise ValueError("slack selection needs a horizon of at least 16")
    a = boyd_expectation(N)
    best_t, best_val = None, -math.inf
    for t in range(2, max(3, int(a) + 1)):
        val = slack_objective(a, t)
        if val > best_val:
            best_t, best_val = t, val
    return best_t


def run_option_report(
    N: int,
    params: MarketParams = DEFAULT_PARAMS,
    slack: int | None = None,
    samples: int = 10_000,
    seed: int = 0,
) -> dict:
    """One summary row: exact and asymptotic run statistics, the chosen
    slack, the simulated policy value, and the exact option price."""
    from complexopt.pricing import simulate_policy

    dist = run_length_distribution(N)
    t = choose_run_slack(N) if slack is None else slack
    policy = run_target_policy(N, t)
    sim = simulate_policy(policy, N, params, samples=samples, seed=seed)
    price = run_option_price(N, params)
    return {
        "N": N,
        "exact_run_expectation": float(dist.mean),
        "boyd_expectation": boyd_expectation(N),
        "slack": t,
        "policy_target": policy.target,
        "policy_value": sim.value,
        "policy_stderr": sim.stderr,
        "price": price.value,
    }
