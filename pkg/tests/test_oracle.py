import math
import random

import pytest

from cliquemul import oracle
from cliquemul.graphs import DisconnectedGraphError, Graph
from cliquemul.semiring import boolean_semiring, counting_semiring, min_plus_semiring
from cliquemul.sparse import SparseMatrix

COUNT = counting_semiring()
MINPLUS = min_plus_semiring()
BOOL = boolean_semiring()


def path4():
    return Graph.undirected(4, [(0, 1), (1, 2), (2, 3)])


def test_identity_times_matrix():
    M = SparseMatrix.from_entries(4, COUNT, [(0, 2, 5), (3, 1, -2)])
    I = SparseMatrix.identity(4, COUNT)
    assert oracle.dense_multiply(I, M) == M
    assert oracle.dense_multiply(M, I) == M


def test_min_plus_two_hop_distances_on_path():
    A = path4().to_adjacency(MINPLUS, explicit_diagonal=True)
    A2 = oracle.dense_multiply(A, A)
    assert A2.entry(0, 0) == 0
    assert A2.entry(0, 1) == 1
    assert A2.entry(0, 2) == 2
    assert A2.entry(0, 3) == math.inf   # still out of 2-hop range
    assert A2.entry(1, 3) == 2


def test_boolean_two_step_reachability_on_dag():
    # arcs 0->1->2->3 plus 0->2; bool (A+I)^2 = reach within two steps
    G = Graph(4, [(0, 1), (1, 2), (2, 3), (0, 2)])
    B = G.to_adjacency(BOOL, explicit_diagonal=True)
    closure = oracle.dense_multiply(B, B)
    reach2 = {(i, j) for i in range(4) for j in range(4)
              if closure.entry(i, j) is True}
    assert reach2 == {(0, 0), (1, 1), (2, 2), (3, 3),
                      (0, 1), (1, 2), (2, 3), (0, 2),
                      (0, 3), (1, 3)}


def test_fast_path_matches_reference():
    rng = random.Random(5)
    for sr in (BOOL, COUNT, MINPLUS):
        for _ in range(4):
            n = rng.randint(2, 10)
            def rand(density):
                entries = []
                for i in range(n):
                    for j in range(n):
                        if rng.random() < density:
                            if sr.name == "boolean":
                                entries.append((i, j, True))
                            elif sr.name == "counting":
                                entries.append((i, j, rng.randint(-9, 9)))
                            else:
                                entries.append((i, j, float(rng.randint(0, 9))))
                return SparseMatrix.from_entries(n, sr, entries)
            S, T = rand(0.4), rand(0.4)
            assert oracle.dense_multiply(S, T) == oracle.dense_multiply_reference(S, T)


def test_matrix_power():
    A = path4().to_adjacency(MINPLUS)
    A3 = oracle.matrix_power(A, 3)
    assert A3.entry(0, 3) == 3
    assert oracle.matrix_power(A, 1) == A


def test_triangle_enumeration_k3_both_ways():
    G = Graph.undirected(3, [(0, 1), (1, 2), (0, 2)])
    tris = oracle.enumerate_triangles(G)
    assert tris == {(0, 1, 2), (0, 2, 1)}
    assert {tuple(sorted(t)) for t in tris} == {(0, 1, 2)}


def test_triangle_enumeration_k4():
    G = Graph.undirected(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])
    tris = oracle.enumerate_triangles(G)
    assert len({tuple(sorted(t)) for t in tris}) == 4


def test_dag_has_no_triangles():
    G = Graph(5, [(i, j) for i in range(5) for j in range(i + 1, 5)])
    assert oracle.enumerate_triangles(G) == set()


def test_canonical_triangle_rotation():
    assert oracle.canonical_triangle(5, 1, 3) == (1, 3, 5)
    assert oracle.canonical_triangle(3, 5, 1) == (1, 3, 5)
    assert oracle.canonical_triangle(1, 5, 3) == (1, 5, 3)  # opposite orientation


def test_four_cycle_counts():
    C4 = Graph.undirected(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    K4 = Graph.undirected(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])
    tree = Graph.undirected(5, [(0, 1), (0, 2), (1, 3), (1, 4)])
    K5 = Graph.undirected(5, [(i, j) for i in range(5) for j in range(i + 1, 5)])
    assert oracle.enumerate_4_cycles(C4) == 1
    assert oracle.enumerate_4_cycles(K4) == 3
    assert oracle.enumerate_4_cycles(tree) == 0
    assert oracle.enumerate_4_cycles(K5) == 15   # C(5,4) subsets, 3 each


def test_apsp_bfs():
    d = oracle.apsp_bfs(path4())
    assert d[0][3] == 3 and d[0][0] == 0 and d[1][2] == 1
    K5 = Graph.undirected(5, [(i, j) for i in range(5) for j in range(i + 1, 5)])
    dk = oracle.apsp_bfs(K5)
    assert all(dk[i][j] == 1 for i in range(5) for j in range(5) if i != j)
    two = Graph.undirected(4, [(0, 1), (2, 3)])
    assert oracle.apsp_bfs(two)[0][2] == math.inf


def test_bfs_eccentricity():
    assert oracle.bfs_eccentricity(path4(), 0) == 3
    assert oracle.bfs_eccentricity(path4(), 1) == 2
    star = Graph.undirected(5, [(0, i) for i in range(1, 5)])
    assert oracle.bfs_eccentricity(star, 1) == 2
    with pytest.raises(DisconnectedGraphError):
        oracle.bfs_eccentricity(Graph.undirected(3, [(0, 1)]), 0)
