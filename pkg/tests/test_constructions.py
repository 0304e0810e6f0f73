import pytest

from rigicount.constructions import (
    NAMED_E2_CODES,
    StepSpec,
    classify_step,
    cone,
    enumerate_steps,
    extend,
    fan,
    glue,
    spider_split,
    vertex_split,
)
from rigicount.counting import CountModel, count_via_formula
from rigicount.graphs import (
    Embedding,
    Graph,
    canonical_code,
    decode,
    encode,
    find_embeddings,
    induced_subgraph,
)
from rigicount.rigidity import (
    is_minimally_2_rigid,
    is_minimally_d_rigid,
    minimal_edge_count,
)

TRIANGLE = decode(7, 3)
PRISM = decode(7916, 6)
G254 = decode(254, 5)
G239 = decode(239, 5)
K4 = decode(63, 4)


class TestExtend:
    def test_zero_extension_of_triangle(self):
        out = extend(TRIANGLE, StepSpec.extension(2, (1, 2)))
        assert encode(out).code == 62
        assert canonical_code(out).code == 31

    def test_zero_extension_3d_on_k4(self):
        for sites in [(1, 2, 3), (1, 2, 4), (2, 3, 4)]:
            out = extend(K4, StepSpec.extension(3, sites))
            assert canonical_code(out).code == 511

    def test_edge_count_conservation(self):
        for d, g in [(2, G254), (3, decode(511, 5))]:
            for kind in ("e0", "e1"):
                for _, out in enumerate_steps(g, kind, d, certify=False):
                    assert out.edge_count == minimal_edge_count(out.n, d)

    def test_bad_site_count(self):
        with pytest.raises(ValueError):
            extend(TRIANGLE, StepSpec.extension(2, (1, 2, 3)))

    def test_deleted_edge_must_exist(self):
        g = Graph(3, [(1, 2), (1, 3)])
        with pytest.raises(ValueError):
            extend(g, StepSpec.extension(2, (1, 2, 3), [(2, 3)]))

    def test_deleted_edge_inside_sites(self):
        with pytest.raises(ValueError):
            extend(G254, StepSpec.extension(2, (1, 2, 3), [(1, 4)]))


class TestClassify:
    def test_planar_letters(self):
        full = Graph(3, [(1, 2), (1, 3), (2, 3)])
        assert classify_step(full, StepSpec.extension(2, (1, 2, 3), [(1, 2)])).name == "E1a"
        path = Graph(3, [(1, 2), (1, 3)])
        assert classify_step(path, StepSpec.extension(2, (1, 2, 3), [(1, 2)])).name == "E1b"
        single = Graph(3, [(1, 3)])
        assert classify_step(single, StepSpec.extension(2, (1, 2, 3), [(1, 3)])).name == "E1c"

    def test_e2_shapes_on_pentagon(self):
        pentagon = Graph(5, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)])
        label = classify_step(pentagon, StepSpec.extension(3, (1, 2, 3, 4, 5), [(1, 2), (3, 4)]))
        assert (label.name, label.shape, label.induced_code) == ("E2Xs236", "X", 236)
        label = classify_step(pentagon, StepSpec.extension(3, (1, 2, 3, 4, 5), [(1, 2), (2, 3)]))
        assert (label.name, label.shape) == ("E2Vs236", "V")

    def test_e2vs3_path(self):
        path = Graph(5, [(1, 2), (2, 3)])
        label = classify_step(path, StepSpec.extension(3, (1, 2, 3, 4, 5), [(1, 2), (2, 3)]))
        assert label.name == "E2Vs3"

    def test_e0(self):
        assert classify_step(TRIANGLE, StepSpec.extension(2, (1, 2))).name == "E0"

    def test_splits(self):
        assert classify_step(PRISM, StepSpec.split("vertex_split", 2, 1, (4,), (5,))).name == "VSplit"
        assert classify_step(PRISM, StepSpec.split("spider_split", 2, 1, (4,), (5, 6))).name == "SSplit"


class TestSplits:
    def test_vertex_split_counts(self):
        out = vertex_split(G254, 2, [3], [4], 2)
        assert out.n == 6 and out.edge_count == minimal_edge_count(6, 2)
        assert out.has_edge(2, 6) and out.has_edge(3, 6) and not out.has_edge(2, 3)

    def test_vertex_split_table_instance(self):
        results = {canonical_code(o).code for _, o in enumerate_steps(G239, "vsplit", 2)}
        assert canonical_code(decode(5791, 6)).code in results

    def test_spider_split_table_instances(self):
        results = {canonical_code(o).code for _, o in enumerate_steps(G239, "ssplit", 2)}
        assert canonical_code(decode(7916, 6)).code in results
        g8187 = decode(8187, 6)
        res3 = {canonical_code(o).code for _, o in enumerate_steps(g8187, "ssplit", 3)}
        assert canonical_code(decode(515806, 7)).code in res3

    def test_3d_vertex_split_of_511(self):
        g511 = decode(511, 5)
        results = {canonical_code(o).code for _, o in enumerate_steps(g511, "vsplit", 3)}
        assert canonical_code(decode(7935, 6)).code in results
        assert canonical_code(decode(16350, 6)).code in results

    def test_empty_moved_acts_like_zero_extension(self):
        out = vertex_split(G254, 2, [], [3], 2)
        alt = extend(G254, StepSpec.extension(2, (2, 3)))
        assert out == alt
        spider = spider_split(G254, 2, [], [3, 4], 2)
        assert spider == extend(G254, StepSpec.extension(2, (3, 4)))

    def test_shared_size_checked(self):
        with pytest.raises(ValueError):
            vertex_split(G254, 2, [3], [4, 5], 2)
        with pytest.raises(ValueError):
            spider_split(G254, 2, [3], [4], 2)

    def test_moved_must_be_neighbors(self):
        with pytest.raises(ValueError):
            vertex_split(G254, 1, [2], [4], 2)  # 2 is not adjacent to 1 in 254


class TestConeGlueFan:
    def test_cone_examples(self):
        assert canonical_code(cone(TRIANGLE)).code == 63
        assert encode(cone(Graph(2, [(1, 2)]))).code == 7

    def test_glue_two_prisms_on_triangle(self):
        emb = find_embeddings(PRISM, TRIANGLE)[0]
        out = glue(PRISM, PRISM, emb, emb)
        assert out.n == 9 and out.edge_count == 15

    def test_glue_subgraph_identity(self):
        sub = induced_subgraph(PRISM, [1, 4, 5])
        host_emb = find_embeddings(PRISM, sub)[0]
        self_emb = Embedding(sub, tuple(range(1, sub.n + 1)))
        assert glue(PRISM, sub, host_emb, self_emb) == PRISM

    def test_glue_pattern_mismatch(self):
        e1 = find_embeddings(PRISM, TRIANGLE)[0]
        e2 = find_embeddings(K4, Graph(2, [(1, 2)]))[0]
        with pytest.raises(ValueError):
            glue(PRISM, K4, e1, e2)

    def test_fan_vertex_count_formula(self):
        emb = find_embeddings(PRISM, TRIANGLE)[0]
        for k in (1, 2, 3, 4):
            out = fan(PRISM, emb, k)
            assert out.n == 3 + k * 3
            assert out.edge_count == minimal_edge_count(out.n, 2)
        assert fan(PRISM, emb, 1) == PRISM

    def test_fan_of_254_along_edge(self):
        emb = find_embeddings(G254, Graph(2, [(1, 2)]))[0]
        out = fan(G254, emb, 2)
        assert out.n == 2 + 2 * 3

    def test_fan_rejects_zero_copies(self):
        emb = find_embeddings(PRISM, TRIANGLE)[0]
        with pytest.raises(ValueError):
            fan(PRISM, emb, 0)


class TestEnumerateSteps:
    def test_one_extensions_of_triangle(self):
        results = list(enumerate_steps(TRIANGLE, "e1", 2, dedup=True))
        assert len(results) == 1
        assert canonical_code(results[0][1]).code == 31

    def test_zero_extensions_of_254(self):
        results = list(enumerate_steps(G254, "e0", 2))
        assert len(results) == 10
        for _, out in results:
            assert count_via_formula(out, CountModel(2)) == 16

    def test_k4_vertex_splits_all_511(self):
        results = list(enumerate_steps(K4, "vsplit", 3))
        assert results
        assert {canonical_code(o).code for _, o in results} == {511}

    def test_named_e2_restriction(self):
        g511 = decode(511, 5)
        named = list(enumerate_steps(g511, "e2", 3))
        everything = list(enumerate_steps(g511, "e2", 3, all_induced=True))
        assert len(everything) >= len(named)
        for spec, g_out in named:
            label = classify_step(g511, spec)
            assert label.induced_code in NAMED_E2_CODES

    def test_rigidity_preservation_2d(self):
        # 0/1-extensions and vertex splits need no certification filter.
        for code, n in [(254, 5), (239, 5), (223, 5)]:
            g = decode(code, n)
            for kind in ("e0", "e1", "vsplit"):
                for _, out in enumerate_steps(g, kind, 2, certify=False):
                    assert is_minimally_2_rigid(out).minimally_rigid

    def test_rigidity_preservation_3d(self):
        g = decode(511, 5)
        for kind in ("e0", "e1", "vsplit"):
            for _, out in enumerate_steps(g, kind, 3, certify=False):
                assert is_minimally_d_rigid(out, 3).minimally_rigid

    def test_certified_families_filtered(self):
        g = decode(511, 5)
        for kind in ("e2", "ssplit"):
            for _, out in enumerate_steps(g, kind, 3):
                assert is_minimally_d_rigid(out, 3).minimally_rigid

    def test_cone_family(self):
        results = list(enumerate_steps(TRIANGLE, "cone", 2))
        assert len(results) == 1 and canonical_code(results[0][1]).code == 63

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            list(enumerate_steps(TRIANGLE, "zsplit", 2))
