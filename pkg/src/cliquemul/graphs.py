"""Directed graphs on vertex set [0, n) with adjacency-matrix export."""

from __future__ import annotations

from .semiring import Semiring
from .sparse import FormatError, SparseMatrix


class GraphError(ValueError):
    """Self-loop, duplicate edge, or out-of-range endpoint."""


class DisconnectedGraphError(RuntimeError):
    """An operation requiring connectivity met an unreachable vertex."""


class Graph:
    """Simple directed graph; an undirected edge is stored as both arcs."""

    __slots__ = ("n", "edges", "out_adj", "in_adj")

    def __init__(self, n: int, edges):
        if n < 1:
            raise GraphError("need at least one vertex")
        self.n = n
        out_adj: list[list[int]] = [[] for _ in range(n)]
        in_adj: list[list[int]] = [[] for _ in range(n)]
        seen = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) outside [0, {n})")
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if (u, v) in seen:
                raise GraphError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
            out_adj[u].append(v)
            in_adj[v].append(u)
        for adj in out_adj:
            adj.sort()
        for adj in in_adj:
            adj.sort()
        self.edges = tuple(sorted(seen))
        self.out_adj = out_adj
        self.in_adj = in_adj

    @classmethod
    def undirected(cls, n: int, pairs) -> "Graph":
        """Build from unordered pairs; both orientations are materialized."""
        arcs = []
        seen = set()
        for u, v in pairs:
            key = (min(u, v), max(u, v))
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if key in seen:
                raise GraphError(f"duplicate undirected edge {key}")
            seen.add(key)
            arcs.append((u, v))
            arcs.append((v, u))
        return cls(n, arcs)

    @property
    def m(self) -> int:
        """Number of directed arcs."""
        return len(self.edges)

    def d_out(self, v: int) -> int:
        return len(self.out_adj[v])

    def d_in(self, v: int) -> int:
        return len(self.in_adj[v])

    def degree_sum(self, v: int) -> int:
        return len(self.out_adj[v]) + len(self.in_adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        adj = self.out_adj[u]
        lo, hi = 0, len(adj)
        while lo < hi:
            mid = (lo + hi) // 2
            if adj[mid] < v:
                lo = mid + 1
            else:
                hi = mid
        return lo < len(adj) and adj[lo] == v

    def is_symmetric(self) -> bool:
        return all((v, u) in set(self.edges) for u, v in self.edges)

    def padded(self, new_n: int) -> "Graph":
        """Same arcs on a larger vertex set; new vertices are isolated."""
        if new_n < self.n:
            raise GraphError("padding cannot shrink the vertex set")
        return Graph(new_n, self.edges)

    def to_adjacency(self, semiring: Semiring, explicit_diagonal: bool = False) -> SparseMatrix:
        """Adjacency matrix with ``one`` on arcs.

        With ``explicit_diagonal`` the diagonal holds the semiring's
        multiplicative identity as a stored entry, which for min-plus
        encodes distance zero to self.
        """
        entries = [(u, v, semiring.one) for u, v in self.edges]
        if explicit_diagonal:
            entries.extend((v, v, semiring.one) for v in range(self.n))
        # Hop weights: min-plus arcs cost 1, not the multiplicative identity.
        if semiring.name == "min-plus":
            entries = [(u, v, 1) for u, v in self.edges]
            if explicit_diagonal:
                entries.extend((v, v, 0) for v in range(self.n))
        return SparseMatrix.from_entries(self.n, semiring, entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def load_edge_list(path, n: int | None = None, directed: bool = False) -> Graph:
    """Read ``u v`` per line, 0-indexed, ``#`` starts a comment.

    When n is not given it is inferred as max endpoint + 1; isolated
    trailing vertices therefore need an explicit n.
    """
    pairs = []
    max_id = -1
    with open(path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            toks = line.split()
            if len(toks) != 2:
                raise FormatError(f"line {lineno}: expected two endpoints, got {line!r}")
            u, v = int(toks[0]), int(toks[1])
            if u < 0 or v < 0:
                raise FormatError(f"line {lineno}: negative vertex id")
            pairs.append((u, v))
            max_id = max(max_id, u, v)
    size = n if n is not None else max_id + 1
    if size < 1:
        size = 1
    if directed:
        return Graph(size, pairs)
    return Graph.undirected(size, pairs)


def save_edge_list(graph: Graph, path, directed: bool = True) -> None:
    """Write arcs sorted; with directed=False each edge appears once as min-max."""
    if directed:
        rows = graph.edges
    else:
        rows = sorted({(min(u, v), max(u, v)) for u, v in graph.edges})
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        for u, v in rows:
            fh.write(f"{u} {v}\n")
