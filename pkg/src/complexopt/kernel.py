"""Witness-search kernel selection.

The compiled extension is used when it was built; otherwise the pure-Python
reference kernel takes over with identical behavior.  `COMPILED` tells which
one is active; benchmarks/bench_kernel.py compares the two.
"""

from __future__ import annotations

from types import ModuleType

from complexopt import _witness_py

try:
    from complexopt import _witness  # type: ignore[attr-defined]

    _impl: ModuleType = _witness
    COMPILED = True
except ImportError:
    _impl = _witness_py
    COMPILED = False

find_witness = _impl.find_witness

MAX_LENGTH = _witness_py.MAX_N


def kernel_name() -> str:
    return _impl.KERNEL


def pure_kernel() -> ModuleType:
    return _witness_py

def compiled_kernel() -> ModuleType | None:
    return _impl if COMPILED else None


def upper_bound(n: int) -> int:
    """Largest number of states a minimal witness can need for length n."""
    return n // 2 + 1


def min_states(bits: bytes, q_max: int | None = None, find=None):
    """Least q admitting a uniquely-accepting q-state witness, with the
    witness state sequence.

    Searches q ascending so the first hit is minimal.  With `q_max` the search
    stops early and returns None when no witness with at most q_max states
    exists.  `find` overrides the kernel (used for benchmarking/testing).
    """
    search = find_witness if find is None else find
    bound = upper_bound(len(bits))
    hi = bound if q_max is None else min(q_max, bound)
    for q in range(1, hi + 1):
        witness = search(bits, q)
        if witness is not None:
            return q, witness
    if q_max is None or q_max >= bound:
        raise AssertionError("no witness within the guaranteed bound; kernel bug")
    return None


def benchmark(lengths, per_length: int = 3, seed: int = 0) -> list[dict]:
    """Time min_states on random strings under each kernel.

    Returns one row per string with millisecond timings; compiled timings are
    None when the extension is not built.
    """
    import random
    import time

    rng = random.Random(seed)
    rows = []
    for n in lengths:
        for _ in range(per_length):
            bits = bytes(rng.randrange(2) for _ in range(n))
            t0 = time.perf_counter()
            value, _ = min_states(bits, find=_witness_py.find_witness)
            pure_ms = (time.perf_counter() - t0) * 1000
            compiled_ms = None
            if COMPILED:
                t0 = time.perf_counter()
                check, _ = min_states(bits, find=_impl.find_witness)
                compiled_ms = (time.perf_counter() - t0) * 1000
                assert check == value, "kernels disagree"
            rows.append(
                {
                    "string": "".join(str(b) for b in bits),
                    "value": value,
                    "pure_ms": pure_ms,
                    "compiled_ms": compiled_ms,
                    "speedup": (pure_ms / compiled_ms) if compiled_ms else None,
                }
            )
    return rows
