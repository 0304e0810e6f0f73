from fractions import Fraction

import pytest

from rigicount.counting import CountModel, SPHERICAL
from rigicount.lab import (
    brute_force_minimally_rigid,
    class_stats,
    counts_for_codes,
    distribution,
    enumerate_minimally_rigid,
    factor_fixture_rows,
    factor_survey,
    fixture_tables,
    verify_certificates,
    _fixture_rows,
)

E2 = CountModel(2)
S2 = CountModel(2, SPHERICAL)
E3 = CountModel(3)


class TestEnumeration:
    def test_plane_counts_small(self):
        for n, expected in [(3, 1), (4, 1), (5, 3), (6, 13), (7, 70), (8, 608)]:
            assert len(enumerate_minimally_rigid(n, 2)) == expected

    def test_five_vertex_codes_are_the_named_ones(self):
        assert enumerate_minimally_rigid(5, 2) == [223, 239, 254]

    def test_min_degree_filter(self):
        assert len(enumerate_minimally_rigid(7, 2, min_degree=3)) == 4
        assert len(enumerate_minimally_rigid(8, 2, min_degree=3)) == 32

    def test_matches_brute_force_plane(self):
        assert enumerate_minimally_rigid(5, 2) == brute_force_minimally_rigid(5, 2)
        assert enumerate_minimally_rigid(6, 2) == brute_force_minimally_rigid(6, 2)

    def test_3d_small_levels(self):
        assert enumerate_minimally_rigid(4, 3) == [63]
        assert enumerate_minimally_rigid(5, 3) == [511]
        assert enumerate_minimally_rigid(6, 3) == [7679, 7935, 8187, 16350]

    def test_3d_matches_brute_force(self):
        assert enumerate_minimally_rigid(6, 3) == brute_force_minimally_rigid(6, 3)

    def test_desk_scale_guard(self):
        with pytest.raises(ValueError):
            enumerate_minimally_rigid(11, 2)
        with pytest.raises(ValueError):
            enumerate_minimally_rigid(8, 3)
        with pytest.raises(ValueError):
            enumerate_minimally_rigid(5, 4)


class TestFactorSurvey:
    def test_e1_on_the_four_vertex_graph(self, cache):
        # Every 1-extension of the unique 4-vertex graph lands on a
        # 2^(n-2) class, so all factors are exactly 2.
        survey = factor_survey(4, 2, E2, "e1", cache=cache, seed=1)
        assert survey.minimum.factor == survey.maximum.factor == Fraction(2)

    def test_unknown_family(self, cache):
        with pytest.raises(ValueError):
            factor_survey(4, 2, E2, "qsplit", cache=cache)

    def test_3d_vertex_split_extremes(self, cache):
        survey = factor_survey(5, 3, E3, "vsplit", cache=cache, seed=1)
        assert survey.minimum.factor == Fraction(2)
        assert survey.maximum.factor == Fraction(4)
        assert survey.minimum.count_before == 4
        assert (survey.maximum.after, survey.maximum.count_after) == (16350, 16)


class TestDistribution:
    def test_unique_four_vertex_graph(self, cache):
        hist = distribution(4, E2, min_degree=0, cache=cache, seed=1)
        assert hist.total == 1 and hist.values == {4: 1}
        assert hist.most_frequent == (4, 1)

    def test_counts_for_codes_cache_reuse(self, cache):
        codes = enumerate_minimally_rigid(5, 2)
        first = counts_for_codes(codes, 5, E2, cache, seed=1)
        assert first == {223: 8, 239: 8, 254: 8}
        again = counts_for_codes(codes, 5, E2, cache, seed=123)
        assert again == first  # served from the journal


class TestClassStats:
    def test_n6_classes(self, cache):
        report = class_stats(6, cache=cache, seed=1)
        # 13 graphs, one of them (the prism) off the 2^(n-2) floor; min
        # degree 3 holds for the prism and K_{3,3}, of which only K_{3,3}
        # (non-planar, count 16) sits on the floor.
        assert report.total == 13
        assert report.floor_total == 12
        assert report.mindeg3_total == 2
        assert report.mindeg3_floor == 1
        assert report.c4_count == 0
        assert report.planar_count == 1
        assert report.planar_floor == 0


@pytest.mark.slow
class TestClassStatsPaperRows:
    def test_n7_table_rows(self, shared_cache):
        report = class_stats(7, cache=shared_cache, seed=11)
        assert report.total == 70
        assert report.floor_total == 64
        assert report.mindeg3_total == 4
        assert report.mindeg3_floor == 1
        assert report.planar_count == 3
        assert report.planar_floor == 1
        assert report.c4_count == 0

    @pytest.mark.stretch
    def test_n8_c4_row(self, shared_cache, jobs):
        report = class_stats(
            8, cache=shared_cache, seed=11, include_all=False, jobs=jobs
        )
        assert report.mindeg3_total == 32
        assert report.c4_count == 1


@pytest.mark.slow
class TestFactorFixtureRecomputation:
    """Desk-scale rows of the factor tables recompute exactly."""

    PLANS = [
        # (table, model, max n of the result graph)
        ("factors_plane_e1b", E2, 7),
        ("factors_plane_e1c", E2, 7),
        ("factors_plane_vsplit", E2, 7),
        ("factors_plane_ssplit", E2, 7),
        ("factors_sphere_e1b", S2, 6),
        ("factors_sphere_vsplit", S2, 6),
        ("factors_3d_vsplit", E3, 7),
        ("factors_3d_ssplit", E3, 7),
    ]

    @pytest.mark.parametrize("table,model,max_n", PLANS)
    def test_rows_recompute(self, shared_cache, table, model, max_n):
        from rigicount.counting import realization_count
        from rigicount.graphs import decode

        checked = 0
        for row in factor_fixture_rows(table):
            if int(row["n_after"]) > max_n:
                continue
            for code_key, n_key, lam_key in (
                ("code", "n", "lambda"),
                ("code_after", "n_after", "lambda_after"),
            ):
                g = decode(int(row[code_key]), int(row[n_key]))
                got = realization_count(
                    g, model, seed=11, cache=shared_cache, trials=2
                ).count
                assert got == int(row[lam_key]), (table, row, code_key, got)
                checked += 1
        assert checked >= 2


class TestFixtures:
    def test_tables_present(self):
        tables = fixture_tables()
        for name in (
            "appendix_plane_fan_1",
            "appendix_plane_fan_254",
            "appendix_sphere_fan_254",
            "appendix_sphere_max",
            "appendix_compare_plane",
            "appendix_fan3d",
            "appendix_min3d",
            "appendix_highdim",
            "appendix_factors_plane_e1b",
            "appendix_factors_3d_vsplit",
        ):
            assert name in tables

    def test_factor_fixture_schema(self):
        rows = factor_fixture_rows("factors_plane_e1b")
        first_min = next(r for r in rows if r["extreme"] == "min")
        assert (first_min["code"], first_min["lambda"]) == ("254", "8")
        assert (first_min["code_after"], first_min["lambda_after"]) == ("4011", "16")
        first_max = next(r for r in rows if r["extreme"] == "max")
        assert (first_max["code_after"], first_max["lambda_after"]) == ("7916", "24")

    def test_certificate_row_expansion(self):
        rows = _fixture_rows("factors_3d_vsplit")
        assert len(rows) == 20  # 10 table rows, before and after graphs
        assert all(r.dim == 3 for r in rows)

    def test_unknown_table(self):
        with pytest.raises(ValueError):
            _fixture_rows("nonexistent")


class TestVerify:
    def test_fan3d_structural(self, cache):
        reports = verify_certificates("fan3d", cache=cache, recompute_max_vars=0)
        assert len(reports) == 6
        assert all(rep.ok for rep in reports)
        assert all(rep.recomputed is None for rep in reports)

    def test_highdim_structural(self, cache):
        reports = verify_certificates("highdim", cache=cache, recompute_max_vars=0)
        assert all(rep.ok for rep in reports)

    def test_min3d_recomputes_smallest_row(self, cache):
        reports = verify_certificates(
            "min3d", cache=cache, recompute_max_vars=18, trials=1, seed=1
        )
        by_n = {rep.row.n: rep for rep in reports}
        assert by_n[8].recomputed == 24 and by_n[8].ok
        assert by_n[14].recomputed is None  # beyond the desk budget
        assert all(rep.ok for rep in reports)

    @pytest.mark.stretch
    def test_min3d_recomputes_n9(self, shared_cache):
        reports = verify_certificates(
            "min3d", cache=shared_cache, recompute_max_vars=21, trials=1, seed=11
        )
        by_n = {rep.row.n: rep for rep in reports}
        assert by_n[8].recomputed == 24
        assert by_n[9].recomputed == 48
        assert all(rep.ok for rep in reports)
