"""complexopt: automatic-complexity options on binary price paths.

Computes nondeterministic automatic complexity and its deficiency, prices
European/American complexity options in a binomial model, analyzes the run
option, and serves an interactive exercise game over HTTP.
"""

__version__ = "0.1.0"

from complexopt.complexity import (
    an_complexity,
    an_value,
    current_run,
    deficiency,
    deficiency_at_least,
    longest_run,
    run_complexity,
)
from complexopt.nfa import Automaton, accepts_uniquely, count_accepting_walks, spells

__all__ = [
    "Automaton",
    "accepts_uniquely",
    "an_complexity",
    "an_value",
    "count_accepting_walks",
    "current_run",
    "deficiency",
    "deficiency_at_least",
    "longest_run",
    "run_complexity",
    "spells",
]
