import math

import pytest

from cliquemul import oracle
from cliquemul.graph_suite import apsp, bfs_ecc, count_4_cycles, trace_product
from cliquemul.graphs import DisconnectedGraphError, Graph
from cliquemul.semiring import counting_semiring
from cliquemul.sparse import DimensionError


def complete(n):
    return Graph.undirected(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def cycle(n):
    return Graph.undirected(n, [(i, (i + 1) % n) for i in range(n)])


def path(n):
    return Graph.undirected(n, [(i, i + 1) for i in range(n - 1)])


def test_trace_product_values():
    sr = counting_semiring()
    A4 = complete(4).to_adjacency(sr)
    sq = oracle.dense_multiply(A4, A4)
    res = trace_product(sq, sq)
    assert res.value == 84          # trace of A^4 on K4
    resC = trace_product(*[oracle.dense_multiply(
        cycle(4).to_adjacency(sr), cycle(4).to_adjacency(sr))] * 2)
    assert resC.value == 32


def test_trace_product_costs_two_cheap_phases():
    sr = counting_semiring()
    A = complete(4).to_adjacency(sr)
    res = trace_product(A, A)
    assert [r.label for r in res.records] == ["trace.coldist", "trace.diag"]
    assert sum(r.rounds for r in res.records) <= 3


def test_trace_product_rejects_wrong_semiring():
    from cliquemul.semiring import boolean_semiring
    B = complete(3).to_adjacency(boolean_semiring())
    with pytest.raises(DimensionError):
        trace_product(B, B)


def test_four_cycle_counts():
    assert count_4_cycles(cycle(4)).count == 1
    assert count_4_cycles(complete(4)).count == 3
    tree = Graph.undirected(6, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5)])
    assert count_4_cycles(tree).count == 0
    assert count_4_cycles(complete(5)).count == oracle.enumerate_4_cycles(complete(5))


def test_four_cycles_reject_directed():
    with pytest.raises(ValueError):
        count_4_cycles(Graph(3, [(0, 1)]))


def test_bfs_ecc():
    from cliquemul.engine import CliqueEngine
    engine = CliqueEngine(4)
    assert bfs_ecc(path(4), 0, engine=engine) == 3
    # flooding advances one level per wave, each a constant-round phase
    waves = [r for r in engine.ledger.records if r.label.startswith("bfs.wave")]
    assert len(waves) == 3
    assert bfs_ecc(path(4), 1) == 2
    assert bfs_ecc(complete(5), 2) == 1
    assert bfs_ecc(Graph.undirected(1, []), 0) == 0
    with pytest.raises(DisconnectedGraphError):
        bfs_ecc(Graph.undirected(4, [(0, 1), (2, 3)]), 0)


def test_apsp_path():
    res = apsp(path(4))
    assert res.ecc == 3
    assert res.multiplications == 2 * 3 - 1
    d = res.dist
    assert d.entry(0, 3) == 3 and d.entry(3, 0) == 3
    assert d.entry(0, 0) == 0
    assert d.entry(1, 2) == 1


def test_apsp_matches_bfs_oracle():
    for G in (cycle(6), complete(5), path(7),
              Graph.undirected(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5)])):
        res = apsp(G)
        want = oracle.apsp_bfs(G)
        for i in range(G.n):
            for j in range(G.n):
                assert res.dist.entry(i, j) == want[i][j]
        assert not any(math.isinf(want[i][j]) for i in range(G.n) for j in range(G.n))


def test_apsp_rejects_disconnected():
    with pytest.raises(DisconnectedGraphError):
        apsp(Graph.undirected(3, [(0, 1)]))
