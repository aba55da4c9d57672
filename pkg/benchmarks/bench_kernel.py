#!/usr/bin/env python3
"""Compare the compiled witness-search kernel against the pure-Python one.

Usage: python benchmarks/bench_kernel.py [--lengths 14,16,18,20] [--per-length 3]

Also exercised via `complexopt bench`.  Both kernels run the same ascending
minimal-automaton search; rows report per-string wall time and speedup.
"""

import argparse

from complexopt import kernel


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--lengths", default="14,16,18,20")
    parser.add_argument("--per-length", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    lengths = [int(s) for s in args.lengths.split(",") if s]
    print(f"active kernel: {kernel.kernel_name()}")
    rows = kernel.benchmark(lengths, per_length=args.per_length, seed=args.seed)
    header = f"{'string':24} {'value':>5} {'pure ms':>10} {'compiled ms':>12} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    total_pure = total_compiled = 0.0
    for row in rows:
        compiled = "-" if row["compiled_ms"] is None else f"{row['compiled_ms']:.2f}"
        speedup = "-" if row["speedup"] is None else f"{row['speedup']:.1f}x"
        print(f"{row['string']:24} {row['value']:>5} {row['pure_ms']:>10.2f} {compiled:>12} {speedup:>8}")
        total_pure += row["pure_ms"]
        if row["compiled_ms"] is not None:
            total_compiled += row["compiled_ms"]
    if total_compiled:
        print("-" * len(header))
        print(f"{'total':24} {'':>5} {total_pure:>10.2f} {total_compiled:>12.2f} "
              f"{total_pure / total_compiled:>7.1f}x")
    else:
        print("compiled kernel not built; set it up with `pip install -e .`")


if __name__ == "__main__":
    main()
