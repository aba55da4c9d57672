"""NFAs over the binary alphabet with saturating accepting-walk counts.

The automata here have no epsilon transitions and a fixed initial state 0.
Walk counts only need to distinguish "none", "exactly one" and "two or more",
so all counting saturates at 2; that keeps the dynamic program overflow-free
and O(n * |transitions|).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

Transition = tuple[int, int, int]  # (from_state, symbol, to_state)

SATURATED = 2


def saturate(value: int) -> int:
    return value if value < SATURATED else SATURATED


@dataclass(frozen=True)
class SaturatingCount:
    """A nonnegative count clamped at "two or more"."""

    value: int

    def __post_init__(self):
        if self.value not in (0, 1, SATURATED):
            raise ValueError("saturating count must be 0, 1 or 2")

    def __add__(self, other: "SaturatingCount") -> "SaturatingCount":
        return SaturatingCount(saturate(self.value + other.value))

    def __str__(self) -> str:
        return "2+" if self.value == SATURATED else str(self.value)


@dataclass(frozen=True)
class Automaton:
    """A binary-alphabet NFA; states are 0..num_states-1, initial state is 0."""

    num_states: int
    transitions: frozenset[Transition]
    accepting: frozenset[int]
    initial_state: int = 0

    def __post_init__(self):
        if self.num_states < 1:
            raise ValueError("automaton needs at least one state")
        if self.initial_state != 0:
            raise ValueError("initial state is fixed at 0 by convention")
        for u, c, v in self.transitions:
            if not (0 <= u < self.num_states and 0 <= v < self.num_states):
                raise ValueError(f"transition ({u},{c},{v}) leaves the state range")
            if c not in (0, 1):
                raise ValueError(f"symbol {c!r} is not binary")
        for s in self.accepting:
            if not 0 <= s < self.num_states:
                raise ValueError(f"accepting state {s} out of range")

    @classmethod
    def make(
        cls,
        num_states: int,
        transitions: Iterable[tuple[int, int, int]],
        accepting: Iterable[int],
    ) -> "Automaton":
        return cls(num_states, frozenset(tuple(t) for t in transitions), frozenset(accepting))

    def with_transition(self, u: int, c: int, v: int) -> "Automaton":
        return Automaton(self.num_states, self.transitions | {(u, c, v)}, self.accepting)


def bits_of(x: Sequence[int] | str) -> tuple[int, ...]:
    """Coerce a '01' string or int sequence to a tuple of 0/1 ints."""
    if isinstance(x, str):
        if not all(ch in "01" for ch in x):
            raise ValueError(f"not a binary string: {x!r}")
        return tuple(int(ch) for ch in x)
    out = tuple(int(b) for b in x)
    if not all(b in (0, 1) for b in out):
        raise ValueError("bits must be 0 or 1")
    return out


def count_accepting_walks(a: Automaton, n: int) -> SaturatingCount:
    """Number of length-n labeled walks from the initial state to an accepting
    state, saturated at 2.

    Walks may follow any labels; two parallel edges with different labels are
    two distinct walks.
    """
    if n < 0:
        raise ValueError("walk length must be nonnegative")
    row = [0] * a.num_states
    row[a.initial_state] = 1
    for _ in range(n):
        nxt = [0] * a.num_states
        for u, _c, v in a.transitions:
            if row[u]:
                nxt[v] = saturate(nxt[v] + row[u])
        row = nxt
    return SaturatingCount(saturate(sum(row[s] for s in a.accepting)))


def spells(a: Automaton, x: Sequence[int] | str) -> bool:
    """True iff some walk from the initial state spelling x ends accepting."""
    reachable = {a.initial_state}
    for c in bits_of(x):
        reachable = {v for (u, s, v) in a.transitions if s == c and u in reachable}
        if not reachable:
            return False
    return bool(reachable & a.accepting)


def accepts_uniquely(a: Automaton, x: Sequence[int] | str) -> bool:
    """True iff the automaton accepts x and has exactly one accepting walk of
    length |x| (over all labels)."""
    word = bits_of(x)
    return spells(a, word) and count_accepting_walks(a, len(word)).value == 1


# -- serialization ------------------------------------------------------------
#
# Compact text form: "q; init; accepting-list; from,symbol,to; ..."
# e.g. a two-state cycle: "2; 0; 0; 0,1,1; 1,0,0"


def to_text(a: Automaton) -> str:
    parts = [str(a.num_states), str(a.initial_state)]
    parts.append(",".join(str(s) for s in sorted(a.accepting)))
    for u, c, v in sorted(a.transitions):
        parts.append(f"{u},{c},{v}")
    return "; ".join(parts)


def from_text(text: str) -> Automaton:
    fields = [f.strip() for f in text.split(";")]
    if len(fields) < 3:
        raise ValueError(f"bad automaton text: {text!r}")
    num_states = int(fields[0])
    initial = int(fields[1])
    accepting = frozenset(int(s) for s in fields[2].split(",") if s != "")
    transitions = set()
    for field in fields[3:]:
        if not field:
            continue
        u, c, v = (int(p) for p in field.split(","))
        transitions.add((u, c, v))
    return Automaton(num_states, frozenset(transitions), accepting, initial)


def to_json_dict(a: Automaton) -> dict:
    return {
        "num_states": a.num_states,
        "initial_state": a.initial_state,
        "accepting": sorted(a.accepting),
        "transitions": [list(t) for t in sorted(a.transitions)],
    }


def from_json_dict(d: dict) -> Automaton:
    return Automaton(
        d["num_states"],
        frozenset(tuple(t) for t in d["transitions"]),
        frozenset(d["accepting"]),
        d.get("initial_state", 0),
    )


def to_json(a: Automaton) -> str:
    return json.dumps(to_json_dict(a))


def from_json(text: str) -> Automaton:
    return from_json_dict(json.loads(text))
