import itertools
import random

import pytest

from rigicount.graphs import Graph, decode
from rigicount.rigidity import (
    RigidityStatus,
    is_minimally_2_rigid,
    is_minimally_d_rigid,
    laman_check_brute_force,
    minimal_edge_count,
)

PRISM = decode(7916, 6)


def double_banana():
    edges = []
    for block in ([3, 4, 5], [6, 7, 8]):
        a, b, c = block
        edges += [(a, b), (a, c), (b, c)]
        edges += [(1, x) for x in block] + [(2, x) for x in block]
    return Graph(8, edges)


class TestPebbleGame:
    def test_triangle(self):
        assert is_minimally_2_rigid(decode(7, 3)).minimally_rigid

    def test_k4_overbraced(self):
        verdict = is_minimally_2_rigid(decode(63, 4))
        assert verdict.status is RigidityStatus.RIGID_NOT_MINIMAL

    def test_prism(self):
        assert is_minimally_2_rigid(PRISM).minimally_rigid

    def test_two_triangles_flexible(self):
        g = Graph(6, [(1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6)])
        verdict = is_minimally_2_rigid(g)
        assert verdict.status is RigidityStatus.FLEXIBLE

    def test_witness_is_overbraced(self):
        # K4 plus a pendant path keeps the right total count but overbraces K4.
        g = Graph(6, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4), (1, 5), (2, 5), (5, 6)])
        verdict = is_minimally_2_rigid(g)
        assert verdict.status is RigidityStatus.FLEXIBLE
        w = verdict.witness
        assert w is not None
        inside = sum(1 for (u, v) in g.edges if u in w and v in w)
        assert inside > 2 * len(w) - 3

    def test_k4_witness_is_all_of_k4(self):
        verdict = is_minimally_2_rigid(decode(63, 4))
        assert verdict.witness == (1, 2, 3, 4)

    def test_witness_overbraced_randomized(self):
        rnd = random.Random(17)
        found = 0
        for _ in range(300):
            n = rnd.randint(4, 7)
            pairs = list(itertools.combinations(range(1, n + 1), 2))
            edges = [e for e in pairs if rnd.random() < 0.6]
            g = Graph(n, edges)
            verdict = is_minimally_2_rigid(g)
            if verdict.witness is None:
                continue
            w = set(verdict.witness)
            inside = sum(1 for (u, v) in g.edges if u in w and v in w)
            assert inside > 2 * len(w) - 3, (sorted(edges), verdict.witness)
            found += 1
        assert found > 50

    def test_matches_brute_force(self):
        rnd = random.Random(3)
        pairs_checked = 0
        for _ in range(300):
            n = rnd.randint(3, 7)
            pairs = list(itertools.combinations(range(1, n + 1), 2))
            m = minimal_edge_count(n, 2)
            if rnd.random() < 0.5 and len(pairs) >= m:
                edges = rnd.sample(pairs, m)
            else:
                edges = [e for e in pairs if rnd.random() < 0.5]
            g = Graph(n, edges)
            assert is_minimally_2_rigid(g).minimally_rigid == laman_check_brute_force(g)
            pairs_checked += 1
        assert pairs_checked == 300


class TestRankTest:
    def test_k4_in_3d(self):
        assert is_minimally_d_rigid(decode(63, 4), 3).minimally_rigid

    def test_minimal_3d_counterexample_graph(self):
        assert is_minimally_d_rigid(decode(31965132, 8), 3).minimally_rigid

    def test_edge_count_mismatch_is_distinct(self):
        g = Graph(6, [(1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6)])
        verdict = is_minimally_d_rigid(g, 2)
        assert verdict.status is RigidityStatus.FLEXIBLE
        assert "edge count" in verdict.reason

    def test_double_banana_probably_flexible(self):
        verdict = is_minimally_d_rigid(double_banana(), 3, trials=5)
        assert verdict.status is RigidityStatus.PROBABLY_FLEXIBLE
        assert verdict.trials == 5

    def test_overbraced_rigid(self):
        verdict = is_minimally_d_rigid(decode(63, 4), 2)
        assert verdict.status is RigidityStatus.RIGID_NOT_MINIMAL

    def test_complete_graph_base_cases(self):
        for d in (1, 2, 3, 4):
            kd = Graph(d, list(itertools.combinations(range(1, d + 1), 2))) if d > 1 else Graph(1, [])
            if d >= 2:
                assert is_minimally_d_rigid(kd, d).minimally_rigid

    def test_agrees_with_pebble_game(self):
        rnd = random.Random(5)
        for _ in range(200):
            n = rnd.randint(3, 7)
            pairs = list(itertools.combinations(range(1, n + 1), 2))
            m = minimal_edge_count(n, 2)
            edges = rnd.sample(pairs, m) if len(pairs) >= m else pairs
            g = Graph(n, edges)
            pebble = is_minimally_2_rigid(g).minimally_rigid
            rank = is_minimally_d_rigid(g, 2, trials=3, seed=_)
            if rank.minimally_rigid:
                assert pebble, "rank test produced a false positive"
            if pebble:
                assert rank.minimally_rigid

    def test_preconditions(self):
        with pytest.raises(ValueError):
            is_minimally_d_rigid(Graph(2, [(1, 2)]), 3)
        with pytest.raises(ValueError):
            is_minimally_d_rigid(Graph(2, [(1, 2)]), 0)
