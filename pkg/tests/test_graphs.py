import itertools
import random

import pytest

from rigicount.graphs import (
    Graph,
    GraphCode,
    canonical_code,
    decode,
    encode,
    find_embeddings,
    induced_subgraph,
    infer_vertex_count,
    pair_count,
    profile,
)

TRIANGLE = Graph(3, [(1, 2), (1, 3), (2, 3)])
PRISM = decode(7916, 6)


def brute_canonical(g: Graph) -> int:
    best = None
    for perm in itertools.permutations(range(1, g.n + 1)):
        relabel = {v: perm[v - 1] for v in g.vertices()}
        code = encode(Graph(g.n, [(relabel[u], relabel[v]) for u, v in g.edges])).code
        if best is None or code < best:
            best = code
    return best


def random_graph(rnd, n, p=0.5):
    edges = [e for e in itertools.combinations(range(1, n + 1), 2) if rnd.random() < p]
    return Graph(n, edges)


def permuted(rnd, g):
    perm = list(range(1, g.n + 1))
    rnd.shuffle(perm)
    relabel = {v: perm[v - 1] for v in g.vertices()}
    return Graph(g.n, [(relabel[u], relabel[v]) for u, v in g.edges])


class TestEncoding:
    def test_triangle_is_seven(self):
        assert encode(TRIANGLE).code == 7

    def test_four_vertex_example(self):
        g = Graph(4, [(1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])
        assert encode(g).code == 31

    def test_edgeless_is_zero(self):
        assert encode(Graph(5, [])).code == 0

    def test_decode_three_prism(self):
        assert PRISM.edges == frozenset(
            {(1, 4), (1, 5), (1, 6), (2, 3), (2, 5), (2, 6), (3, 4), (3, 6), (4, 5)}
        )

    def test_decode_254(self):
        g = decode(254, 5)
        assert g.edges == frozenset(
            {(1, 4), (1, 5), (2, 3), (2, 4), (2, 5), (3, 4), (3, 5)}
        )

    def test_decode_zero_on_two_vertices(self):
        g = decode(0, 2)
        assert g.n == 2 and not g.edges

    def test_decode_rejects_oversized_code(self):
        with pytest.raises(ValueError):
            decode(8, 3)
        with pytest.raises(ValueError):
            GraphCode(64, 4)

    def test_round_trip_random(self):
        rnd = random.Random(7)
        for _ in range(300):
            n = rnd.randint(2, 9)
            g = random_graph(rnd, n, rnd.choice([0.2, 0.5, 0.8]))
            assert decode(encode(g)) == g

    def test_graph_invariants(self):
        with pytest.raises(ValueError):
            Graph(3, [(1, 1)])
        with pytest.raises(ValueError):
            Graph(3, [(1, 4)])
        g = Graph(3, [(2, 1)])
        assert g.edges == frozenset({(1, 2)})
        assert g.has_edge(1, 2) and g.has_edge(2, 1)


class TestInferVertexCount:
    def test_paper_examples(self):
        assert infer_vertex_count(7) == 3
        assert infer_vertex_count(31) == 4
        assert infer_vertex_count(7916) == 6

    def test_zero_is_ambiguous(self):
        with pytest.raises(ValueError):
            infer_vertex_count(0)

    def test_matches_minimal_fit(self):
        for code in (1, 2, 63, 511, 1269995):
            n = infer_vertex_count(code)
            assert pair_count(n) >= code.bit_length() > pair_count(n - 1)


class TestCanonicalCode:
    def test_31_class(self):
        assert canonical_code(decode(31, 4)).code == 31
        assert canonical_code(decode(62, 4)).code == 31
        assert brute_canonical(decode(62, 4)) == 31

    def test_edgeless_and_complete(self):
        assert canonical_code(Graph(4, [])).code == 0
        assert canonical_code(decode(63, 4)).code == 63

    def test_named_small_graphs(self):
        # The subtype names in the step taxonomy rely on these values.
        path3 = Graph(3, [(1, 2), (2, 3)])
        assert canonical_code(path3).code == 3
        two_edges = Graph(4, [(1, 2), (3, 4)])
        assert canonical_code(two_edges).code == 12
        square = Graph(4, [(1, 2), (2, 3), (3, 4), (1, 4)])
        assert canonical_code(square).code == 30
        pentagon = Graph(5, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)])
        assert canonical_code(pentagon).code == 236
        assert canonical_code(decode(511, 5)).code == 511

    def test_matches_brute_force(self):
        rnd = random.Random(11)
        for _ in range(250):
            g = random_graph(rnd, rnd.randint(2, 6), rnd.choice([0.25, 0.5, 0.75]))
            assert canonical_code(g).code == brute_canonical(g)

    def test_isomorphism_invariance(self):
        rnd = random.Random(13)
        for _ in range(200):
            g = random_graph(rnd, rnd.randint(2, 9))
            assert canonical_code(permuted(rnd, g)) == canonical_code(g)

    def test_canonical_at_most_encode(self):
        rnd = random.Random(17)
        for _ in range(200):
            g = random_graph(rnd, rnd.randint(2, 8))
            assert canonical_code(g).code <= encode(g).code

    def test_symmetric_graphs_no_blowup(self):
        # Twin collapsing keeps highly symmetric inputs cheap.
        big = [
            Graph(12, []),
            Graph(11, list(itertools.combinations(range(1, 12), 2))),
            Graph(12, [(i, j) for i in range(1, 7) for j in range(7, 13)]),
        ]
        for g in big:
            canonical_code(g)


class TestInducedSubgraph:
    def test_prism_triangle(self):
        assert encode(induced_subgraph(PRISM, {1, 4, 5})).code == 7

    def test_identity(self):
        g = decode(254, 5)
        assert induced_subgraph(g, range(1, 6)) == g

    def test_single_edge_relabeling(self):
        assert encode(induced_subgraph(decode(254, 5), {1, 2, 3})).code == 1

    def test_empty_set_rejected(self):
        with pytest.raises(ValueError):
            induced_subgraph(PRISM, [])


class TestFindEmbeddings:
    def test_first_triangle_in_prism(self):
        embs = find_embeddings(PRISM, TRIANGLE)
        assert embs[0].images == (1, 4, 5)

    def test_triangle_into_itself(self):
        assert len(find_embeddings(TRIANGLE, TRIANGLE)) == 6

    def test_no_k4_in_254(self):
        assert find_embeddings(decode(254, 5), decode(63, 4)) == []

    def test_limit(self):
        assert len(find_embeddings(PRISM, TRIANGLE, limit=3)) == 3

    def test_edges_respected(self):
        rnd = random.Random(23)
        for _ in range(50):
            host = random_graph(rnd, rnd.randint(3, 7), 0.6)
            pattern = random_graph(rnd, rnd.randint(2, 4), 0.6)
            for emb in find_embeddings(host, pattern, limit=20):
                for u, v in pattern.edges:
                    assert host.has_edge(emb.apply(u), emb.apply(v))

    def test_pattern_larger_than_host(self):
        assert find_embeddings(TRIANGLE, decode(63, 4)) == []


class TestProfile:
    def test_three_prism(self):
        rec = profile(PRISM)
        assert rec.min_degree == rec.max_degree == 3
        assert rec.has_triangle and rec.planar and rec.hamiltonian
        assert rec.chromatic_number == 3

    def test_k4(self):
        rec = profile(decode(63, 4))
        assert rec.chromatic_number == 4 and rec.hamiltonian

    def test_ten_vertex_record_graph(self):
        rec = profile(decode(4778440734593, 10))
        assert rec.min_degree == 3 and rec.max_degree == 4
        assert rec.degree3_count == 6
        assert rec.hamiltonian

    def test_bipartite_chromatic(self):
        rec = profile(Graph(4, [(1, 3), (1, 4), (2, 3), (2, 4)]))
        assert rec.chromatic_number == 2
        assert not rec.has_triangle

    def test_size_guard(self):
        with pytest.raises(ValueError):
            profile(Graph(17, [(1, 2)]))
