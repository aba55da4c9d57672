"""Sensitivity of complexity measures to single-bit perturbations.

Sweeps the Hamming ball of radius 1 around a base string, evaluating either
the automaton complexity or the run measure at each flip.  Flips are
independent, so sweeps fan out over a thread pool (the compiled kernel
releases the GIL).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from complexopt.complexity import (
    DEFAULT_SEARCH_LIMIT,
    ComplexityCache,
    an_value,
    bound,
    check_binary,
    ensure_within_limit,
    longest_run,
    run_complexity,
)

MEASURES = ("an", "run")


@dataclass(frozen=True)
class PerturbationEntry:
    position: int
    string: str
    value: int  # the selected measure at this flip
    deficiency: int | None  # populated for the automaton measure


@dataclass(frozen=True)
class PerturbationReport:
    base: str
    measure: str
    base_value: int
    entries: tuple[PerturbationEntry, ...]

    @property
    def min_value(self) -> int:
        return min(e.value for e in self.entries)

    @property
    def max_value(self) -> int:
        return max(e.value for e in self.entries)

    @property
    def mean_value(self) -> Fraction:
        return Fraction(sum(e.value for e in self.entries), len(self.entries))

    def to_json_dict(self) -> dict:
        return {
            "base": self.base,
            "measure": self.measure,
            "base_value": self.base_value,
            "entries": [
                {
                    "position": e.position,
                    "string": e.string,
                    "value": e.value,
                    **({"deficiency": e.deficiency} if e.deficiency is not None else {}),
                }
                for e in self.entries
            ],
            "summary": {
                "min": self.min_value,
                "max": self.max_value,
                "mean": float(self.mean_value),
            },
        }


def flip(x: str, position: int) -> str:
    if not 0 <= position < len(x):
        raise ValueError(f"flip position {position} out of range")
    ch = "1" if x[position] == "0" else "0"
    return x[:position] + ch + x[position + 1 :]


def hamming_sweep(
    x: str,
    measure: str = "an",
    radius: int = 1,
    cache: ComplexityCache | None = None,
    limit: int = DEFAULT_SEARCH_LIMIT,
    threads: int = 1,
) -> PerturbationReport:
    """Evaluate the measure on every single-bit flip of x, in flip order."""
    check_binary(x)
    if not x:
        raise ValueError("need a nonempty base string")
    if measure not in MEASURES:
        raise ValueError(f"unknown measure {measure!r}; expected one of {MEASURES}")
    if radius != 1:
        raise ValueError("only radius 1 is supported")
    if measure == "an":
        ensure_within_limit(len(x), limit)

    def evaluate(position: int) -> PerturbationEntry:
        y = flip(x, position)
        if measure == "an":
            value = an_value(y, cache)
            return PerturbationEntry(position, y, value, bound(len(y)) - value)
        return PerturbationEntry(position, y, run_complexity(y), None)

    positions = range(len(x))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            entries = tuple(pool.map(evaluate, positions))
    else:
        entries = tuple(evaluate(i) for i in positions)
    base_value = an_value(x, cache) if measure == "an" else run_complexity(x)
    return PerturbationReport(x, measure, base_value, entries)


def run_bound_holds(x: str, y: str) -> bool:
    """Check the single-flip run bound: the longest run of x is at most twice
    that of y plus one, for strings at Hamming distance 1."""
    check_binary(x)
    check_binary(y)
    if len(x) != len(y):
        raise ValueError("strings must have equal length")
    if sum(a != b for a, b in zip(x, y)) != 1:
        raise ValueError("strings must differ in exactly one position")
    return longest_run(x) <= 2 * longest_run(y) + 1
