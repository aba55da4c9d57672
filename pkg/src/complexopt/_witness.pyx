# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled witness-search kernel.

Same algorithm as _witness_py (the pure-Python reference); see that module
for the search invariants.  This version keeps all state in flat C arrays and
releases the GIL for the whole search, so sweeps can fan out across threads.
"""

from libc.stdlib cimport free, malloc
from libc.string cimport memcpy, memset

KERNEL = "compiled"

DEF MAX_N = 64
DEF MAX_Q = 33

cdef struct SearchCtx:
    int n
    int q
    unsigned char bits[MAX_N]
    unsigned char adj[MAX_Q][MAX_Q]        # parallel-edge counts, labels collapsed
    unsigned char emult[MAX_Q][2][MAX_Q]   # per-label path usage counts
    unsigned char W[MAX_N + 1][MAX_Q]      # saturating walk counts per step
    int path[MAX_N + 1]
    unsigned char saved[MAX_N + 1][MAX_N][MAX_Q]  # row snapshots, one slot per depth


cdef inline void _step_row(SearchCtx* ctx, int m) nogil:
    cdef int v, u, acc
    cdef int q = ctx.q
    for v in range(q):
        acc = 0
        for u in range(q):
            if ctx.adj[u][v] and ctx.W[m][u]:
                acc += ctx.W[m][u] * ctx.adj[u][v]
                if acc >= 2:
                    acc = 2
                    break
        ctx.W[m + 1][v] = <unsigned char> acc


cdef bint _dfs(SearchCtx* ctx, int m, int cur, int maxused) nogil:
    cdef int n = ctx.n
    cdef int q = ctx.q
    if m == n:
        return maxused == q - 1 and ctx.W[n][cur] == 1
    cdef int c = ctx.bits[m]
    cdef int vmax = maxused + 1 if maxused + 1 < q else q - 1
    cdef int v, nmax, k
    cdef bint new_edge, ok
    for v in range(vmax + 1):
        nmax = maxused if v <= maxused else v
        if q - 1 - nmax > n - m - 1:
            continue  # too few steps left to touch all q states
        new_edge = ctx.emult[cur][c][v] == 0
        ctx.emult[cur][c][v] += 1
        ctx.path[m + 1] = v
        ok = True
        if new_edge:
            ctx.adj[cur][v] += 1
            for k in range(1, m + 1):
                memcpy(ctx.saved[m][k - 1], ctx.W[k], q)
            for k in range(m + 1):
                _step_row(ctx, k)
            for k in range(1, m + 2):
                if ctx.W[k][ctx.path[k]] != 1:
                    ok = False
                    break
        else:
            _step_row(ctx, m)
            ok = ctx.W[m + 1][v] == 1
        if ok and _dfs(ctx, m + 1, v, nmax):
            return True
        ctx.emult[cur][c][v] -= 1
        if new_edge:
            ctx.adj[cur][v] -= 1
            for k in range(1, m + 1):
                memcpy(ctx.W[k], ctx.saved[m][k - 1], q)
    return False


def find_witness(bits, int q):
    """Canonically-first uniquely-accepting state sequence using exactly q
    states, or None if there is none."""
    cdef bytes data = bytes(bits)
    cdef int n = len(data)
    if n > MAX_N or q > MAX_Q:
        raise ValueError(f"witness search supports n <= {MAX_N}, q <= {MAX_Q}")
    cdef int i
    for i in range(n):
        if data[i] not in (0, 1):
            raise ValueError("bits must be 0 or 1")
    if q < 1 or q - 1 > n:
        return None

    cdef SearchCtx* ctx = <SearchCtx*> malloc(sizeof(SearchCtx))
    if ctx == NULL:
        raise MemoryError()
    memset(ctx, 0, sizeof(SearchCtx))
    ctx.n = n
    ctx.q = q
    for i in range(n):
        ctx.bits[i] = data[i]
    ctx.W[0][0] = 1

    cdef bint found
    try:
        with nogil:
            found = _dfs(ctx, 0, 0, 0)
        if not found:
            return None
        return tuple(ctx.path[i] for i in range(n + 1))
    finally:
        free(ctx)
