"""Binomial pricing of deficiency options: European, American, and policies.

All tree prices are computed in exact rational arithmetic (the worked values
in this domain are exact decimals, so tolerances never enter); Monte Carlo
policy estimates are floats.  The underlying measure defaults to a fair coin
with zero interest.
"""

from __future__ import annotations

import decimal
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from complexopt.complexity import (
    DEFAULT_TREE_LIMIT,
    ComplexityCache,
    an_value,
    bound,
    check_binary,
    current_run,
    deficiency_sum,
    ensure_within_limit,
)

Rational = int | float | str | Fraction


def as_fraction(x: Rational) -> Fraction:
    """Exact rational from user input; floats go through their shortest
    decimal repr so 0.25 means 1/4, not the binary float."""
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


@dataclass(frozen=True)
class MarketParams:
    """Per-step interest rate and risk-neutral up-tick probability."""

    rate: Fraction = Fraction(0)
    up_prob: Fraction = Fraction(1, 2)

    def __post_init__(self):
        object.__setattr__(self, "rate", as_fraction(self.rate))
        object.__setattr__(self, "up_prob", as_fraction(self.up_prob))
        if self.rate < 0:
            raise ValueError("interest rate must be nonnegative")
        if not 0 < self.up_prob < 1:
            raise ValueError("up probability must lie strictly between 0 and 1")

    @classmethod
    def from_factors(cls, rate: Rational, up: Rational, down: Rational) -> "MarketParams":
        """Derive the risk-neutral probability from up/down price factors."""
        r, u, d = as_fraction(rate), as_fraction(up), as_fraction(down)
        if not d < 1 + r < u:
            raise ValueError("need down < 1 + rate < up for a risk-neutral measure")
        return cls(r, (1 + r - d) / (u - d))

    def discount(self, steps: int) -> Fraction:
        return Fraction(1, 1) / (1 + self.rate) ** steps


DEFAULT_PARAMS = MarketParams()


def european_price(
    n: int,
    params: MarketParams = DEFAULT_PARAMS,
    cache: ComplexityCache | None = None,
    limit: int = DEFAULT_TREE_LIMIT,
) -> Fraction:
    """Price of the option paying the deficiency at expiry n.

    Exact sum over all 2^n terminal strings, discounted.  The deficiency is
    never negative, so no positive-part is needed.
    """
    if n < 0:
        raise ValueError("expiry must be nonnegative")
    ensure_within_limit(n, limit, "expiry")
    p = params.up_prob
    if p == Fraction(1, 2):
        total = Fraction(deficiency_sum(n, cache), 2**n)
    else:
        q = 1 - p
        total = Fraction(0)
        for i in range(2**n):
            x = format(i, f"0{n}b") if n else ""
            ones = x.count("1")
            d = bound(n) - an_value(x, cache)
            if d:
                total += p**ones * q ** (n - ones) * d
    return total * params.discount(n)


def expected_deficiency(
    n: int,
    cache: ComplexityCache | None = None,
    limit: int = DEFAULT_TREE_LIMIT,
) -> Fraction:
    """Mean deficiency of a length-n fair-coin string; the static-policy value
    at zero interest."""
    ensure_within_limit(n, limit, "length")
    return Fraction(deficiency_sum(n, cache), 2**n)


def price_at_least(
    n: int,
    k: int,
    cache: ComplexityCache | None = None,
    limit: int = DEFAULT_TREE_LIMIT,
) -> bool:
    """Decide whether the fair-coin, zero-rate European price is >= k / 2^n.

    The price is an integer multiple of 2^-n, so this is an exact integer
    comparison.
    """
    if not 0 <= Fraction(k, 2**n) <= bound(n):
        raise ValueError(f"threshold {k}/2^{n} outside [0, {bound(n)}]")
    ensure_within_limit(n, limit, "expiry")
    return deficiency_sum(n, cache) >= k


@dataclass(frozen=True)
class TreeNode:
    payoff: Fraction
    continuation: Fraction
    value: Fraction
    exercise: bool


@dataclass
class PriceTree:
    """Node values of the American option over the binary path tree."""

    expiry: int
    params: MarketParams
    nodes: dict[str, TreeNode] = field(default_factory=dict)

    @property
    def root(self) -> Fraction:
        return self.nodes[""].value

    def exercise_time(self, path: str) -> int:
        """First time the exercise-at-indifference rule stops on this path."""
        check_binary(path)
        if len(path) != self.expiry:
            raise ValueError("path length must equal the tree expiry")
        for m in range(self.expiry + 1):
            if self.nodes[path[:m]].exercise:
                return m
        return self.expiry  # expiry node always settles

    def to_json_dict(self, digits: int = 6) -> dict:
        return {
            "style": "american",
            "n": self.expiry,
            "rate": str(self.params.rate),
            "p": str(self.params.up_prob),
            "value": format_decimal(self.root, digits),
            "value_exact": str(self.root),
            "nodes": {
                prefix: {
                    "payoff": str(node.payoff),
                    "continuation": str(node.continuation),
                    "value": str(node.value),
                    "exercise": node.exercise,
                }
                for prefix, node in sorted(self.nodes.items())
            },
        }


def american_price(
    n: int,
    params: MarketParams = DEFAULT_PARAMS,
    cache: ComplexityCache | None = None,
    limit: int = DEFAULT_TREE_LIMIT,
) -> PriceTree:
    """Backward induction over the full path tree; exercises at indifference
    (payoff equal to continuation), which settles at the earliest optimal
    time without changing the value."""
    if n < 0:
        raise ValueError("expiry must be nonnegative")
    ensure_within_limit(n, limit, "expiry")
    p = params.up_prob
    disc = Fraction(1, 1) / (1 + params.rate)
    tree = PriceTree(n, params)

    def build(prefix: str) -> Fraction:
        m = len(prefix)
        payoff = Fraction(bound(m) - an_value(prefix, cache))
        if m == n:
            node = TreeNode(payoff, Fraction(0), payoff, True)
        else:
            up = build(prefix + "1")
            down = build(prefix + "0")
            continuation = (p * up + (1 - p) * down) * disc
            node = TreeNode(payoff, continuation, max(payoff, continuation), payoff >= continuation)
        tree.nodes[prefix] = node
        return node.value

    build("")
    return tree


def exercise_bound(n: int, params: MarketParams) -> Fraction:
    """Upper bound (n/2)(1+r)^-n on the discounted payoff of exercising at
    time n; the early-exercise yardstick for positive rates."""
    if params.rate <= 0:
        raise ValueError("the bound is only informative for a positive rate")
    if n < 0:
        raise ValueError("time must be nonnegative")
    return Fraction(n, 2) * params.discount(n)


def trend_report(
    max_n: int,
    params: MarketParams = DEFAULT_PARAMS,
    cache: ComplexityCache | None = None,
    limit: int = DEFAULT_TREE_LIMIT,
) -> list[tuple[int, Fraction]]:
    """American prices for all expiries up to max_n, for inspecting growth at
    zero interest and the finite trend at positive rates.  No convergence
    claim is made."""
    ensure_within_limit(max_n, limit, "expiry")
    return [(n, american_price(n, params, cache).root) for n in range(max_n + 1)]


# -- exercise policies ---------------------------------------------------------


@dataclass(frozen=True)
class StaticPolicy:
    """Exercise at a fixed time, no matter the path."""

    time: int
    payoff_kind = "deficiency"

    @property
    def name(self) -> str:
        return f"static({self.time})"

    def exercise_time(self, path: str) -> int | None:
        if self.time > len(path):
            raise ValueError("static exercise time beyond the horizon")
        return self.time


@dataclass(frozen=True)
class DeficiencyThresholdPolicy:
    """Exercise the first time the deficiency reaches the threshold, else
    settle at the horizon."""

    threshold: int
    payoff_kind = "deficiency"

    @property
    def name(self) -> str:
        return f"deficiency-threshold({self.threshold})"

    def exercise_time(self, path: str) -> int | None:
        for m in range(len(path) + 1):
            if bound(m) - an_value(path[:m]) >= self.threshold:
                return m
        return len(path)


@dataclass(frozen=True)
class RunThresholdPolicy:
    """Exercise the first time the current run of 1s reaches the target, else
    settle at the horizon; pays the current run."""

    target: int
    payoff_kind = "run"
    settles_at_expiry = True

    @property
    def name(self) -> str:
        return f"run-threshold({self.target})"

    def exercise_time(self, path: str) -> int | None:
        run = 0
        if self.target <= 0:
            return 0
        for m, ch in enumerate(path, start=1):
            run = run + 1 if ch == "1" else 0
            if run >= self.target:
                return m
        return len(path)


def make_policy(name: str, parameter: int):
    """Policy factory for the names used by the CLI and simulations."""
    table = {
        "static": StaticPolicy,
        "deficiency-threshold": DeficiencyThresholdPolicy,
        "run-threshold": RunThresholdPolicy,
    }
    if name not in table:
        raise ValueError(f"unknown policy {name!r}; expected one of {sorted(table)}")
    return table[name](parameter)


@dataclass(frozen=True)
class PolicyResult:
    policy: str
    horizon: int
    samples: int
    value: float
    stderr: float
    exercise_histogram: dict[int | None, int]

    def to_json_dict(self) -> dict:
        hist = {("unexercised" if k is None else str(k)): v for k, v in self.exercise_histogram.items()}
        return {
            "policy": self.policy,
            "horizon": self.horizon,
            "samples": self.samples,
            "value": self.value,
            "stderr": self.stderr,
            "exercise_histogram": hist,
        }


def simulate_policy(
    policy,
    horizon: int,
    params: MarketParams = DEFAULT_PARAMS,
    samples: int = 10_000,
    seed: int = 0,
    cache: ComplexityCache | None = None,
) -> PolicyResult:
    """Monte Carlo value of an exercise policy under the risk-neutral measure.

    Paths are drawn with a seeded generator, so results are reproducible.  The
    payoff at exercise time m is the deficiency of the revealed prefix, or the
    current run for run-based policies; a policy returning None never
    exercises and pays nothing.  Run-target policies are simulated column by
    column in numpy, so large horizons need no per-path work.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(seed)
    p = float(params.up_prob)
    disc = float(params.discount(1))
    if getattr(policy, "payoff_kind", None) == "run" and hasattr(policy, "target"):
        payoffs, histogram = _simulate_run_target(
            policy.target,
            getattr(policy, "settles_at_expiry", True),
            horizon,
            p,
            disc,
            samples,
            rng,
        )
    else:
        ticks = (rng.random((samples, horizon)) < p).astype(np.uint8)
        payoffs = np.zeros(samples)
        histogram = {}
        for i in range(samples):
            path = "".join("1" if b else "0" for b in ticks[i])
            m = policy.exercise_time(path)
            histogram[m] = histogram.get(m, 0) + 1
            if m is None:
                continue
            prefix = path[:m]
            if policy.payoff_kind == "run":
                pay = current_run(prefix)
            else:
                pay = bound(m) - an_value(prefix, cache)
            payoffs[i] = pay * disc**m
    value = float(payoffs.mean())
    stderr = float(payoffs.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return PolicyResult(policy.name, horizon, samples, value, stderr, histogram)


def _simulate_run_target(target, settle_at_expiry, horizon, p, disc, samples, rng):
    """Column-streamed simulation of "exercise when the current run reaches
    the target": O(horizon) vector steps, no path storage."""
    run = np.zeros(samples, dtype=np.int64)
    exercise_at = np.full(samples, -1, dtype=np.int64)
    payoffs = np.zeros(samples)
    if target <= 0:
        # degenerate: exercise immediately at time 0 with an empty run
        return payoffs, {0: samples}
    factor = 1.0
    for j in range(1, horizon + 1):
        heads = rng.random(samples) < p
        run = np.where(heads, run + 1, 0)
        factor *= disc
        hit = (exercise_at < 0) & (run >= target)
        if hit.any():
            exercise_at[hit] = j
            payoffs[hit] = run[hit] * factor
    open_rows = exercise_at < 0
    times: dict[int | None, int] = {}
    if settle_at_expiry:
        payoffs[open_rows] = run[open_rows] * factor
        exercise_at[open_rows] = horizon
        values, counts = np.unique(exercise_at, return_counts=True)
        times = {int(v): int(c) for v, c in zip(values, counts)}
    else:
        values, counts = np.unique(exercise_at[~open_rows], return_counts=True)
        times = {int(v): int(c) for v, c in zip(values, counts)}
        if open_rows.any():
            times[None] = int(open_rows.sum())
    return payoffs, times


# -- display helpers -----------------------------------------------------------


def format_decimal(x: Fraction, digits: int = 6) -> str:
    """Round half-even to the given number of decimal digits."""
    with decimal.localcontext() as ctx:
        ctx.prec = max(digits + 12, 28)
        d = decimal.Decimal(x.numerator) / decimal.Decimal(x.denominator)
        return str(d.quantize(decimal.Decimal(1).scaleb(-digits), rounding=decimal.ROUND_HALF_EVEN))


def truncate_decimal(x: Fraction, digits: int = 3) -> str:
    """Truncate (round toward zero) to the given number of decimal digits, as
    the worked tables in this domain print their values."""
    scaled = x * 10**digits
    whole = scaled.numerator // scaled.denominator if scaled >= 0 else -((-scaled.numerator) // scaled.denominator)
    text = str(abs(whole)).rjust(digits + 1, "0")
    sign = "-" if whole < 0 else ""
    return f"{sign}{text[:-digits]}.{text[-digits:]}"


def static_table(
    max_n: int,
    cache: ComplexityCache | None = None,
    limit: int = DEFAULT_TREE_LIMIT,
) -> list[dict]:
    """Static versus dynamic exercise values for even expiries at zero rate:
    rows of (n, mean deficiency, relation, American price)."""
    ensure_within_limit(max_n, limit, "expiry")
    rows = []
    for n in range(0, max_n + 1, 2):
        ed = expected_deficiency(n, cache)
        vn = american_price(n, DEFAULT_PARAMS, cache).root
        rows.append(
            {
                "n": n,
                "expected_deficiency": ed,
                "relation": "=" if ed == vn else "<",
                "american": vn,
            }
        )
    return rows
