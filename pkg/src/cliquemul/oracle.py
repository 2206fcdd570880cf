"""Sequential reference implementations used to check the protocols.

Everything here is deliberately independent of the simulator: dense
arithmetic straight from the definitions, subgraph listing by explicit
enumeration, and shortest paths by breadth-first search.
"""

from __future__ import annotations

import math
from collections import deque

import numpy as np

from .graphs import Graph
from .semiring import INT64_MAX, Semiring
from .sparse import DimensionError, SparseMatrix

# The numpy kernels are trusted only when |values| stay small enough that
# no int64 product or accumulated sum can overflow: with n <= 1024 and
# |v| <= 2**20, |sum of n products| <= 1024 * 2**40 < 2**63.
_FAST_VALUE_BOUND = 2**20
_FAST_SIZE_BOUND = 1024


def dense_multiply_reference(S: SparseMatrix, T: SparseMatrix) -> SparseMatrix:
    """Triple-loop product over the semiring, straight from the definition."""
    if S.n != T.n:
        raise DimensionError("operand sizes differ")
    if S.semiring.name != T.semiring.name:
        raise DimensionError("operand semirings differ")
    sr = S.semiring
    add, mul, omitted = sr.add, sr.mul, sr.omitted
    n = S.n
    ds = S.to_dense()
    dt = T.to_dense()
    out = [[omitted] * n for _ in range(n)]
    for i in range(n):
        si = ds[i]
        oi = out[i]
        for j in range(n):
            acc = omitted
            for k in range(n):
                acc = add(acc, mul(si[k], dt[k][j]))
            oi[j] = acc
    return SparseMatrix.from_dense(out, sr)


def _fast_eligible(S: SparseMatrix, T: SparseMatrix) -> bool:
    if S.n > _FAST_SIZE_BOUND:
        return False
    name = S.semiring.name
    if name == "boolean":
        return True
    if name == "counting":
        return all(
            abs(v) <= _FAST_VALUE_BOUND for _, _, v in S.entries()
        ) and all(abs(v) <= _FAST_VALUE_BOUND for _, _, v in T.entries())
    if name == "min-plus":
        return all(
            v == math.inf or abs(v) <= _FAST_VALUE_BOUND for _, _, v in S.entries()
        ) and all(v == math.inf or abs(v) <= _FAST_VALUE_BOUND for _, _, v in T.entries())
    return False


def _to_array(M: SparseMatrix, dtype, fill):
    arr = np.full((M.n, M.n), fill, dtype=dtype)
    for i, j, v in M.entries():
        arr[i, j] = v
    return arr


def _fast_multiply(S: SparseMatrix, T: SparseMatrix) -> SparseMatrix:
    sr = S.semiring
    n = S.n
    if sr.name == "boolean":
        a = _to_array(S, np.int64, 0)
        b = _to_array(T, np.int64, 0)
        prod = (a @ b) > 0
        entries = [(int(i), int(j), True) for i, j in zip(*np.nonzero(prod))]
        return SparseMatrix.from_entries(n, sr, entries)
    if sr.name == "counting":
        a = _to_array(S, np.int64, 0)
        b = _to_array(T, np.int64, 0)
        prod = a @ b
        entries = [
            (int(i), int(j), int(prod[i, j])) for i, j in zip(*np.nonzero(prod))
        ]
        return SparseMatrix.from_entries(n, sr, entries)
    if sr.name == "min-plus":
        a = _to_array(S, np.float64, np.inf)
        b = _to_array(T, np.float64, np.inf)
        prod = np.min(a[:, :, None] + b[None, :, :], axis=1)
        entries = []
        for i in range(n):
            for j in range(n):
                v = prod[i, j]
                if v != np.inf:
                    fv = float(v)
                    entries.append((i, j, int(fv) if fv == int(fv) else fv))
        return SparseMatrix.from_entries(n, sr, entries)
    raise ValueError(f"no fast path for semiring {sr.name}")


def dense_multiply(S: SparseMatrix, T: SparseMatrix) -> SparseMatrix:
    """Reference product; dispatches to a vectorized kernel when safe.

    The kernels cover the three shipped semirings within a value/size
    envelope where int64/float arithmetic provably matches the saturating
    definition; everything else falls back to the triple loop.  The
    kernels themselves are cross-checked against the triple loop in the
    test suite.
    """
    if S.n != T.n:
        raise DimensionError("operand sizes differ")
    if S.semiring.name != T.semiring.name:
        raise DimensionError("operand semirings differ")
    if _fast_eligible(S, T):
        return _fast_multiply(S, T)
    return dense_multiply_reference(S, T)


def matrix_power(M: SparseMatrix, exponent: int) -> SparseMatrix:
    """M**exponent by repeated reference multiplication; exponent >= 1."""
    if exponent < 1:
        raise ValueError("exponent must be >= 1")
    acc = M
    for _ in range(exponent - 1):
        acc = dense_multiply(acc, M)
    return acc


def enumerate_triangles(G: Graph) -> set[tuple[int, int, int]]:
    """All directed 3-cycles, canonicalized to start at the smallest vertex."""
    found = set()
    for u in range(G.n):
        for v in G.out_adj[u]:
            for w in G.out_adj[v]:
                if w != u and G.has_edge(w, u):
                    found.add(canonical_triangle(u, v, w))
    return found


def canonical_triangle(u: int, v: int, w: int) -> tuple[int, int, int]:
    """Rotate the directed cycle u->v->w->u so the smallest vertex leads."""
    if u <= v and u <= w:
        return (u, v, w)
    if v <= u and v <= w:
        return (v, w, u)
    return (w, u, v)


def enumerate_4_cycles(G: Graph) -> int:
    """Count 4-vertex undirected cycles by checking every vertex 4-subset.

    The graph must be symmetric; each 4-subset contributes one cycle per
    perfect matching of its vertices into two opposite pairs (up to 3).
    """
    n = G.n
    cnt = 0
    # Pairings of {a,b,c,d} into a 4-cycle: opposite pairs determine it.
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                for d in range(c + 1, n):
                    # opposite pairs (a,b)|(c,d): cycle a-c-b-d-a
                    if G.has_edge(a, c) and G.has_edge(c, b) and G.has_edge(b, d) and G.has_edge(d, a):
                        cnt += 1
                    # opposite pairs (a,c)|(b,d): cycle a-b-c-d-a
                    if G.has_edge(a, b) and G.has_edge(b, c) and G.has_edge(c, d) and G.has_edge(d, a):
                        cnt += 1
                    # opposite pairs (a,d)|(b,c): cycle a-b-d-c-a
                    if G.has_edge(a, b) and G.has_edge(b, d) and G.has_edge(d, c) and G.has_edge(c, a):
                        cnt += 1
    return cnt


def apsp_bfs(G: Graph) -> list[list[float]]:
    """All-pairs hop distances by BFS from every source; inf if unreachable."""
    n = G.n
    dist = [[math.inf] * n for _ in range(n)]
    for s in range(n):
        row = dist[s]
        row[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            du = row[u]
            for v in G.out_adj[u]:
                if row[v] == math.inf:
                    row[v] = du + 1
                    queue.append(v)
    return dist


def bfs_eccentricity(G: Graph, root: int) -> int:
    """Eccentricity of root; raises if some vertex is unreachable."""
    from .graphs import DisconnectedGraphError

    row = apsp_bfs_row(G, root)
    ecc = max(row)
    if ecc == math.inf:
        raise DisconnectedGraphError(f"vertex unreachable from {root}")
    return int(ecc)


def apsp_bfs_row(G: Graph, s: int) -> list[float]:
    n = G.n
    row = [math.inf] * n
    row[s] = 0
    queue = deque([s])
    while queue:
        u = queue.popleft()
        du = row[u]
        for v in G.out_adj[u]:
            if row[v] == math.inf:
                row[v] = du + 1
                queue.append(v)
    return row
