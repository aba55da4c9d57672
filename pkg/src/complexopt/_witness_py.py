"""Pure-Python witness search: reference implementation of the compiled kernel.

Searches for a q-state automaton accepting a given string with a unique
accepting walk.  The search runs over state sequences s_0=0, s_1, ..., s_n
labeled by first appearance (a fresh state may only be one past the largest
index used so far), inducing the automaton whose transitions are exactly the
traversed labeled edges with the final state as sole accepting state.

Pruning: W[m][s] is the saturating count of length-m walks from state 0 to s
over the edges traversed so far.  Edge sets only grow along a branch, so any
prefix of the path with W[m][path[m]] >= 2 already forces two accepting walks
in every completion and can be cut.
"""

from __future__ import annotations

KERNEL = "pure-python"

MAX_N = 64
MAX_Q = 33


def find_witness(bits: bytes, q: int) -> tuple[int, ...] | None:
    """Canonically-first uniquely-accepting state sequence using exactly q
    states, or None if there is none.

    `bits` is a bytes object of 0/1 values; the returned sequence has length
    len(bits) + 1 and starts at state 0.
    """
    n = len(bits)
    if n > MAX_N or q > MAX_Q:
        raise ValueError(f"witness search supports n <= {MAX_N}, q <= {MAX_Q}")
    if any(b not in (0, 1) for b in bits):
        raise ValueError("bits must be 0 or 1")
    if q < 1 or q - 1 > n:
        return None

    W = [[0] * q for _ in range(n + 1)]
    W[0][0] = 1
    adj = [[0] * q for _ in range(q)]  # parallel-edge counts, labels collapsed
    emult = [[[0, 0] for _ in range(q)] for _ in range(q)]  # per-label path usage
    path = [0] * (n + 1)

    def step_row(m: int) -> None:
        src = W[m]
        dst = W[m + 1]
        for v in range(q):
            acc = 0
            for u in range(q):
                a = adj[u][v]
                if a and src[u]:
                    acc += src[u] * a
                    if acc >= 2:
                        acc = 2
                        break
            dst[v] = acc

    def dfs(m: int, cur: int, maxused: int) -> bool:
        if m == n:
            return maxused == q - 1 and W[n][cur] == 1
        c = bits[m]
        vmax = maxused + 1 if maxused + 1 < q else q - 1
        for v in range(vmax + 1):
            nmax = maxused if v <= maxused else v
            if q - 1 - nmax > n - m - 1:
                continue  # too few steps left to touch all q states
            uses = emult[cur][v]
            new_edge = uses[c] == 0
            uses[c] += 1
            path[m + 1] = v
            if new_edge:
                adj[cur][v] += 1
                # a new edge can create walks at every length: recompute the
                # whole prefix and recheck uniqueness along the path
                snap = [W[k][:] for k in range(1, m + 1)]
                for k in range(m + 1):
                    step_row(k)
                ok = all(W[k][path[k]] == 1 for k in range(1, m + 2))
            else:
                step_row(m)
                ok = W[m + 1][v] == 1
            if ok and dfs(m + 1, v, nmax):
                return True
            uses[c] -= 1
            if new_edge:
                adj[cur][v] -= 1
                for k, row in enumerate(snap, start=1):
                    W[k] = row
        return False

    if dfs(0, 0, 0):
        return tuple(path)
    return None
