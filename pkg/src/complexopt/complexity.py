"""Nondeterministic automatic complexity, deficiency, and run statistics.

Strings are plain '0'/'1' Python strings ('1' is an up tick / heads).  The
minimal-automaton search is delegated to the kernel; values are memoized under
the canonical form of a string, since complexity is invariant under reversal
and bit complement (reverse the witness path, or relabel its edges).
"""

from __future__ import annotations

import os
import re
import threading
from dataclasses import dataclass

from complexopt import kernel, nfa
from complexopt.nfa import Automaton

DEFAULT_SEARCH_LIMIT = 26  # longest string the CLI/service will search by default
DEFAULT_TREE_LIMIT = 16  # largest full path tree the pricing layer enumerates

CACHE_PATH_ENV = "COMPLEXOPT_CACHE"


class LimitExceeded(RuntimeError):
    """A request went past the configured exhaustive-computation limit."""


def normalize_ticks(s: str) -> str:
    """Map an up/down string to '0'/'1' form; accepts 0/1 and H/T (H is 1)."""
    table = {"0": "0", "1": "1", "H": "1", "h": "1", "T": "0", "t": "0"}
    try:
        return "".join(table[ch] for ch in s)
    except KeyError:
        raise ValueError(f"not a binary or H/T string: {s!r}") from None


def check_binary(s: str) -> str:
    if not all(ch in "01" for ch in s):
        raise ValueError(f"not a binary string: {s!r}")
    return s


def complement(s: str) -> str:
    return "".join("1" if ch == "0" else "0" for ch in s)


def canonical_form(s: str) -> str:
    """Lexicographic minimum over {s, reverse, complement, reverse-complement}."""
    r = s[::-1]
    c = complement(s)
    return min(s, r, c, c[::-1])


_CACHE_LINE = re.compile(r"^([01]*) (\d+)$")


class ComplexityCache:
    """Concurrent-safe memo of complexity values keyed by canonical form.

    With a path, values are persisted as append-only "bits value" lines;
    corrupt trailing lines (e.g. from a truncated write) are skipped on load.
    """

    def __init__(self, path: str | os.PathLike | None = None):
        self._values: dict[str, int] = {}
        self._lock = threading.Lock()
        self._path = os.fspath(path) if path is not None else None
        if self._path is not None and os.path.exists(self._path):
            self._load(self._path)

    def _load(self, path: str) -> None:
        with open(path, "r", encoding="ascii", errors="replace") as fh:
            for line in fh:
                m = _CACHE_LINE.match(line.rstrip("\n"))
                if m is None:
                    continue
                self._values[m.group(1)] = int(m.group(2))

    def get(self, canonical: str) -> int | None:
        with self._lock:
            return self._values.get(canonical)

    def put(self, canonical: str, value: int) -> None:
        with self._lock:
            if canonical in self._values:
                return
            self._values[canonical] = value
            if self._path is not None:
                with open(self._path, "a", encoding="ascii") as fh:
                    fh.write(f"{canonical} {value}\n")

    def __len__(self) -> int:
        with self._lock:
            return len(self._values)


_default_cache = ComplexityCache(os.environ.get(CACHE_PATH_ENV) or None)


def default_cache() -> ComplexityCache:
    return _default_cache


def set_default_cache(cache: ComplexityCache) -> None:
    global _default_cache
    _default_cache = cache


def bound(n: int) -> int:
    """Upper bound on complexity for strings of length n: floor(n/2) + 1."""
    return n // 2 + 1


def an_value(x: str, cache: ComplexityCache | None = None) -> int:
    """Nondeterministic automatic complexity of x (value only, memoized)."""
    check_binary(x)
    cache = cache if cache is not None else _default_cache
    key = canonical_form(x)
    hit = cache.get(key)
    if hit is not None:
        return hit
    q, _ = kernel.min_states(bytes(int(ch) for ch in key))
    cache.put(key, q)
    return q


@dataclass(frozen=True)
class ComplexityResult:
    """A complexity value together with its certifying automaton."""

    string: str
    complexity: int
    witness: tuple[int, ...]  # state sequence of the unique accepting walk
    witness_automaton: Automaton

    def to_json_dict(self) -> dict:
        n = len(self.string)
        return {
            "string": self.string,
            "length": n,
            "complexity": self.complexity,
            "bound": bound(n),
            "deficiency": bound(n) - self.complexity,
            "witness": list(self.witness),
            "witness_automaton": nfa.to_json_dict(self.witness_automaton),
        }


def _automaton_from_path(x: str, path: tuple[int, ...], q: int) -> Automaton:
    edges = {(path[i], int(x[i]), path[i + 1]) for i in range(len(x))}
    return Automaton(q, frozenset(edges), frozenset({path[-1]}))


def an_complexity(x: str, cache: ComplexityCache | None = None) -> ComplexityResult:
    """Complexity of x with the canonically-first witness automaton."""
    check_binary(x)
    q = an_value(x, cache)
    # the cached value may come from a symmetric variant; re-run the single
    # successful level on x itself to get x's own canonical witness
    witness = kernel.find_witness(bytes(int(ch) for ch in x), q)
    assert witness is not None, "cached value disagrees with search"
    return ComplexityResult(x, q, witness, _automaton_from_path(x, witness, q))


@dataclass(frozen=True)
class DeficiencyValue:
    length: int
    bound: int
    deficiency: int


def deficiency(x: str, cache: ComplexityCache | None = None) -> DeficiencyValue:
    """How far below the guaranteed state bound the complexity of x falls."""
    n = len(check_binary(x))
    return DeficiencyValue(n, bound(n), bound(n) - an_value(x, cache))


def deficiency_at_least(x: str, k: int, cache: ComplexityCache | None = None) -> bool:
    """Decide deficiency(x) >= k without computing the complexity exactly:
    equivalent to some automaton with at most bound - k states accepting x
    uniquely, so the ascending search can stop early."""
    check_binary(x)
    if k < 0:
        raise ValueError("threshold must be nonnegative")
    if k == 0:
        return True
    n = len(x)
    q_max = bound(n) - k
    if q_max < 1:
        return False
    cache = cache if cache is not None else _default_cache
    hit = cache.get(canonical_form(x))
    if hit is not None:
        return bound(n) - hit >= k
    return kernel.min_states(bytes(int(ch) for ch in x), q_max=q_max) is not None


def longest_run(x: str, symbol: str | int | None = None) -> int:
    """Longest run of `symbol` in x, or of either symbol when omitted."""
    check_binary(x)
    if symbol is None:
        return max(longest_run(x, 0), longest_run(x, 1))
    ch = str(symbol)
    if ch not in ("0", "1"):
        raise ValueError(f"symbol must be 0 or 1, got {symbol!r}")
    best = run = 0
    for c in x:
        run = run + 1 if c == ch else 0
        if run > best:
            best = run
    return best


def run_complexity(x: str) -> int:
    """Length + 1 minus the longest run of identical symbols."""
    check_binary(x)
    if not x:
        raise ValueError("run complexity is undefined for the empty string")
    return len(x) + 1 - longest_run(x)


def current_run(x: str) -> int:
    """Length of the trailing block of 1s (heads); 0 if x ends in 0 or is empty."""
    check_binary(x)
    run = 0
    for c in reversed(x):
        if c != "1":
            break
        run += 1
    return run


def ensure_within_limit(n: int, limit: int, what: str = "string length") -> None:
    if n > limit:
        raise LimitExceeded(f"{what} {n} exceeds the configured limit {limit}")


def deficiency_sum(n: int, cache: ComplexityCache | None = None) -> int:
    """Sum of deficiencies over all strings of length n (exact integer).

    Enumerates one representative per reversal/complement orbit and weights it
    by the orbit size, quartering the search work.
    """
    total = 0
    for x, orbit in canonical_orbits(n):
        total += orbit * (bound(n) - an_value(x, cache))
    return total


def canonical_orbits(n: int):
    """Yield (representative, orbit size) for the reversal/complement orbits
    of all length-n strings."""
    if n == 0:
        yield "", 1
        return
    for i in range(2**n):
        x = format(i, f"0{n}b")
        variants = {x, x[::-1]}
        c = complement(x)
        variants.update({c, c[::-1]})
        if x == min(variants):
            yield x, len(variants)
