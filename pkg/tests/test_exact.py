from itertools import combinations

import pytest
from hypothesis import given, settings

from rainbowkernel.errors import TooLarge
from rainbowkernel.exact import (exact_answer, max_induced_p3_packing,
                                 max_triangle_packing, min_fvs_tournament,
                                 min_p3_hitting_set)
from rainbowkernel.graphs import (Tournament, UndirectedGraph,
                                  enumerate_induced_p3, enumerate_triangles,
                                  is_induced_p3, is_triangle)
from rainbowkernel.instances import InstanceSpec

from .strategies import graphs, tournaments


def transitive(n):
    return Tournament.from_arcs(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def path(n):
    return UndirectedGraph(n, [(i, i + 1) for i in range(n - 1)])


def clique(n):
    return UndirectedGraph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def brute_max_packing(triples):
    best = 0
    items = list(triples)

    def rec(i, used, count):
        nonlocal best
        best = max(best, count)
        for j in range(i, len(items)):
            if not set(items[j]) & used:
                rec(j + 1, used | set(items[j]), count + 1)

    rec(0, set(), 0)
    return best


def brute_min_hitting(triples, n):
    for size in range(n + 1):
        for sub in combinations(range(n), size):
            s = set(sub)
            if all(s & set(t) for t in triples):
                return size
    return n


class TestTrivial:
    def test_acyclic_packs_zero(self):
        assert max_triangle_packing(transitive(5)).value == 0

    def test_one_cycle_packs_one(self):
        t = Tournament.from_arcs(3, [(0, 1), (1, 2), (2, 0)])
        assert max_triangle_packing(t).value == 1

    def test_acyclic_fvs_zero(self):
        assert min_fvs_tournament(transitive(5)).value == 0

    def test_single_cycle_fvs_one(self):
        t = Tournament.from_arcs(3, [(0, 1), (1, 2), (2, 0)])
        assert min_fvs_tournament(t).value == 1

    def test_clique_packs_zero(self):
        assert max_induced_p3_packing(clique(5)).value == 0

    def test_path3_packs_one(self):
        assert max_induced_p3_packing(path(3)).value == 1

    def test_path6_packs_two(self):
        assert max_induced_p3_packing(path(6)).value == 2

    def test_clique_hits_zero(self):
        assert min_p3_hitting_set(clique(4)).value == 0

    def test_path3_hits_one(self):
        assert min_p3_hitting_set(path(3)).value == 1

    def test_star_hits_one_via_center(self):
        g = UndirectedGraph(4, [(0, 1), (0, 2), (0, 3)])
        ans = min_p3_hitting_set(g)
        assert ans.value == 1 and ans.witness == (0,)

    def test_limit_enforced(self):
        with pytest.raises(TooLarge):
            max_triangle_packing(transitive(30), limit=24)

    def test_limit_env_override(self, monkeypatch):
        monkeypatch.setenv("RAINBOWKERNEL_ORACLE_LIMIT", "32")
        assert max_triangle_packing(transitive(30)).value == 0
        monkeypatch.setenv("RAINBOWKERNEL_ORACLE_LIMIT", "10")
        with pytest.raises(TooLarge):
            max_triangle_packing(transitive(12))


class TestWitnesses:
    @given(tournaments(max_n=8))
    def test_packing_witness_valid(self, t):
        ans = max_triangle_packing(t)
        used = set()
        for tri in ans.witness:
            assert is_triangle(t, tri)
            assert not set(tri) & used
            used |= set(tri)

    @given(tournaments(max_n=8))
    def test_fvs_witness_valid(self, t):
        ans = min_fvs_tournament(t)
        rest = [v for v in range(t.n) if v not in set(ans.witness)]
        assert not enumerate_triangles(t, rest)

    @given(graphs(max_n=9))
    def test_p3_witnesses_valid(self, g):
        pk = max_induced_p3_packing(g)
        used = set()
        for tri in pk.witness:
            assert is_induced_p3(g, tri)
            assert not set(tri) & used
            used |= set(tri)
        hit = min_p3_hitting_set(g)
        rest = [v for v in range(g.n) if v not in set(hit.witness)]
        assert not enumerate_induced_p3(g, rest)


class TestAgainstBruteForce:
    @given(tournaments(max_n=8))
    @settings(max_examples=40)
    def test_triangle_packing_optimal(self, t):
        triples = enumerate_triangles(t)
        assert max_triangle_packing(t).value == brute_max_packing(triples)

    @given(tournaments(max_n=7))
    @settings(max_examples=30)
    def test_fvs_optimal(self, t):
        triples = enumerate_triangles(t)
        assert min_fvs_tournament(t).value == brute_min_hitting(triples, t.n)

    @given(graphs(max_n=8))
    @settings(max_examples=40)
    def test_p3_packing_optimal(self, g):
        triples = [tuple(sorted(tr)) for tr in enumerate_induced_p3(g)]
        assert max_induced_p3_packing(g).value == brute_max_packing(triples)

    @given(graphs(max_n=7))
    @settings(max_examples=30)
    def test_p3_hitting_optimal(self, g):
        triples = [tuple(sorted(tr)) for tr in enumerate_induced_p3(g)]
        assert min_p3_hitting_set(g).value == brute_min_hitting(triples, g.n)


class TestAtTenVertices:
    def test_fixed_ten_vertex_instances(self):
        import random

        rng = random.Random(10)
        for trial in range(5):
            arcs = []
            for u in range(10):
                for v in range(u + 1, 10):
                    arcs.append((u, v) if rng.random() < 0.5 else (v, u))
            t = Tournament.from_arcs(10, arcs)
            tris = enumerate_triangles(t)
            assert max_triangle_packing(t).value == brute_max_packing(tris)
            assert min_fvs_tournament(t).value == brute_min_hitting(tris, 10)
            g = UndirectedGraph(10, [(u, v) for u in range(10)
                                     for v in range(u + 1, 10)
                                     if rng.random() < 0.4])
            paths = [tuple(sorted(p)) for p in enumerate_induced_p3(g)]
            assert max_induced_p3_packing(g).value == brute_max_packing(paths)
            assert min_p3_hitting_set(g).value == brute_min_hitting(paths, 10)


class TestDuality:
    @given(tournaments(max_n=8))
    def test_tournament_duality(self, t):
        assert min_fvs_tournament(t).value >= max_triangle_packing(t).value

    @given(graphs(max_n=8))
    def test_graph_duality(self, g):
        assert min_p3_hitting_set(g).value >= max_induced_p3_packing(g).value


class TestDecision:
    @given(tournaments(max_n=8))
    @settings(max_examples=30)
    def test_decision_matches_optimum(self, t):
        pack = max_triangle_packing(t).value
        fvs = min_fvs_tournament(t).value
        for k in range(0, 4):
            assert exact_answer(InstanceSpec("TPT", t, k)) == (pack >= k)
            assert exact_answer(InstanceSpec("FVST", t, k)) == (fvs <= k)

    @given(graphs(max_n=8))
    @settings(max_examples=30)
    def test_graph_decision_matches_optimum(self, g):
        pack = max_induced_p3_packing(g).value
        hit = min_p3_hitting_set(g).value
        for k in range(0, 4):
            assert exact_answer(InstanceSpec("I2PP", g, k)) == (pack >= k)
            assert exact_answer(InstanceSpec("I2PHS", g, k)) == (hit <= k)
