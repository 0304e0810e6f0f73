"""Desk-scale experiments: enumeration, factor surveys, and class statistics.

Minimally 2-rigid graphs are enumerated by closing the previous level under
0- and 1-extensions (complete by the Henneberg construction theorem) with
canonical-code deduplication.  In dimension 3 no generating family is
known to suffice, so the closure under 0/1/2-extensions and both splits is
certified per-instance by the probabilistic rank test and cross-checked
against brute-force edge-set enumeration at small n.

Factor surveys walk every labeled step instance on every base graph,
count both sides through the shared cache, and report the extreme
count-increase factors as exact rationals.
"""

from __future__ import annotations

import csv
import importlib.resources
import multiprocessing
import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .algebra import Budget, BudgetExceededError
from .constructions import StepLabel, StepSpec, classify_step, enumerate_steps
from .counting import EUCLIDEAN, SPHERICAL, CountCache, CountModel, count_via_formula, realization_count
from .graphs import Graph, canonical_code, decode, find_embeddings
from .rigidity import is_minimally_2_rigid, is_minimally_d_rigid, minimal_edge_count

__all__ = [
    "StepRecord",
    "SurveyResult",
    "Histogram",
    "ClassReport",
    "enumerate_minimally_rigid",
    "brute_force_minimally_rigid",
    "factor_survey",
    "distribution",
    "class_stats",
    "verify_certificates",
    "count_with_cache",
]

_DESK_LIMITS = {2: 10, 3: 7}
_LEVEL_MEMO: dict[tuple[int, int], tuple[int, ...]] = {}


def _extension_children_2d(code_n: tuple[int, int]) -> set[int]:
    code, n = code_n
    g = decode(code, n)
    out: set[int] = set()
    for sites in combinations(range(1, n + 1), 2):
        child = _apply_extension(g, sites, ())
        out.add(canonical_code(child).code)
    for u, v in g.sorted_edges():
        for w in range(1, n + 1):
            if w == u or w == v:
                continue
            child = _apply_extension(g, (u, v, w), ((u, v),))
            out.add(canonical_code(child).code)
    return out


def _apply_extension(g: Graph, sites, deleted) -> Graph:
    new = g.n + 1
    edges = set(g.edges) - set(deleted)
    edges.update((v, new) for v in sites)
    return Graph(new, edges)


def _children_3d(code_n: tuple[int, int]) -> set[int]:
    code, n = code_n
    g = decode(code, n)
    out: set[int] = set()
    for family in ("e0", "e1", "e2", "vsplit", "ssplit"):
        for _, child in enumerate_steps(
            g, family, 3, dedup=True, all_induced=True, certify=True
        ):
            out.add(canonical_code(child).code)
    return out


def enumerate_minimally_rigid(
    n: int,
    d: int = 2,
    min_degree: int | None = None,
    jobs: int = 1,
) -> list[int]:
    """Sorted canonical codes of all minimally d-rigid graphs on n vertices.

    d=2 is exact (Henneberg closure); d=3 closes 0/1/2-extensions and both
    splits under rank certification, which reproduces the brute-force sets
    at small n but carries no completeness theorem.
    """
    if d not in _DESK_LIMITS:
        raise ValueError("enumeration supports d=2 and d=3 only")
    if n > _DESK_LIMITS[d]:
        raise ValueError(f"n={n} beyond desk scale for d={d}")
    base_n = 2 if d == 2 else 3
    if n < base_n:
        raise ValueError(f"need n >= {base_n}")
    level_fn = _extension_children_2d if d == 2 else _children_3d
    start = {2: (1,), 3: (7,)}[d]
    codes: tuple[int, ...] = _LEVEL_MEMO.get((base_n, d), start)
    _LEVEL_MEMO[(base_n, d)] = codes
    for m in range(base_n, n):
        key = (m + 1, d)
        if key in _LEVEL_MEMO:
            codes = _LEVEL_MEMO[key]
            continue
        parents = [(c, m) for c in codes]
        nxt: set[int] = set()
        if jobs > 1 and len(parents) >= 4 * jobs:
            ctx = multiprocessing.get_context("fork")
            with ctx.Pool(jobs) as pool:
                for part in pool.imap_unordered(level_fn, parents, chunksize=16):
                    nxt |= part
        else:
            for parent in parents:
                nxt |= level_fn(parent)
        codes = tuple(sorted(nxt))
        _LEVEL_MEMO[key] = codes
    if min_degree is not None:
        codes = tuple(
            c for c in codes if min(decode(c, n).degrees()) >= min_degree
        )
    return list(codes)


def brute_force_minimally_rigid(n: int, d: int) -> list[int]:
    """Edge-subset enumeration + rigidity test; the independent oracle."""
    m = minimal_edge_count(n, d)
    pairs = list(combinations(range(1, n + 1), 2))
    out: set[int] = set()
    for subset in combinations(range(len(pairs)), m):
        g = Graph(n, [pairs[i] for i in subset])
        if d == 2:
            ok = is_minimally_2_rigid(g).minimally_rigid
        else:
            ok = is_minimally_d_rigid(g, d).minimally_rigid
        if ok:
            out.add(canonical_code(g).code)
    return sorted(out)


def count_with_cache(
    g: Graph,
    model: CountModel,
    cache: CountCache | None,
    seed: int = 0,
    trials: int | None = None,
    budget: Budget | None = None,
    use_formula: bool = False,
) -> int:
    """Count through the cache; optionally try the structural shortcut first."""
    if use_formula:
        value = count_via_formula(g, model, cache)
        if value is not None:
            return value
    return realization_count(
        g, model, trials=trials, seed=seed, cache=cache, budget=budget
    ).count


@dataclass(frozen=True)
class StepRecord:
    """One construction step with counts on both sides."""

    before: int  # canonical code
    before_n: int
    after: int  # canonical code
    after_n: int
    label: StepLabel
    count_before: int
    count_after: int

    @property
    def factor(self) -> Fraction:
        return Fraction(self.count_after, self.count_before)


@dataclass(frozen=True)
class SurveyResult:
    n: int
    d: int
    model: CountModel
    family: str
    minimum: StepRecord
    maximum: StepRecord
    records: tuple[StepRecord, ...]

    def extremes_with_ties(self) -> tuple[list[StepRecord], list[StepRecord]]:
        lo = min(r.factor for r in self.records)
        hi = max(r.factor for r in self.records)
        return (
            [r for r in self.records if r.factor == lo],
            [r for r in self.records if r.factor == hi],
        )


_FAMILY_FILTERS = {
    "e0": ("e0", None),
    "e1": ("e1", None),
    "e1a": ("e1", "E1a"),
    "e1b": ("e1", "E1b"),
    "e1c": ("e1", "E1c"),
    "e1s1": ("e1", "E1s1"),
    "e1s30": ("e1", "E1s30"),
    "e1s63": ("e1", "E1s63"),
    "e2": ("e2", None),
    "e2xs12": ("e2", "E2Xs12"),
    "e2vs3": ("e2", "E2Vs3"),
    "e2xs236": ("e2", "E2Xs236"),
    "e2vs236": ("e2", "E2Vs236"),
    "e2xs239": ("e2", "E2Xs239"),
    "e2vs239": ("e2", "E2Vs239"),
    "e2xs511": ("e2", "E2Xs511"),
    "e2vs511": ("e2", "E2Vs511"),
    "vsplit": ("vsplit", None),
    "ssplit": ("ssplit", None),
}


def _label_name_for_filter(g: Graph, spec: StepSpec, d: int) -> StepLabel:
    label = classify_step(g, spec)
    if d == 3 and label.family == "E1":
        # 3D one-deletion subtypes are named by the induced 4-vertex code.
        label = StepLabel(
            label.family, label.shape, label.induced_code, f"E1s{label.induced_code}"
        )
    return label


def factor_survey(
    n: int,
    d: int,
    model: CountModel,
    family: str,
    cache: CountCache | None = None,
    seed: int = 0,
    trials: int | None = None,
    budget: Budget | None = None,
    jobs: int = 1,
) -> SurveyResult:
    """Extreme count-increase factors of one step family over all base graphs.

    Every labeled instance on every minimally d-rigid base graph is applied;
    isomorphic results are counted once through the cache and each distinct
    (base, result, subtype) outcome contributes a record.  Ties are broken
    by the smallest (before, after) canonical code pair.  Budget failures on
    single instances are skipped with a warning so one heavy graph cannot
    sink a survey.
    """
    key = family.lower()
    if key not in _FAMILY_FILTERS:
        raise ValueError(f"unknown family {family!r}; known: {sorted(_FAMILY_FILTERS)}")
    kind, name_filter = _FAMILY_FILTERS[key]
    cache = cache if cache is not None else CountCache()
    bases = enumerate_minimally_rigid(n, d)

    # Collect the distinct (base, result-class, subtype) outcomes first so
    # all counting can go through one cache-assisted batch.
    outcomes: list[tuple[int, int, int, StepLabel]] = []
    seen: set[tuple[int, int, str]] = set()
    result_codes: set[int] = set()
    result_n = None
    for base in bases:
        g = decode(base, n)
        for spec, out in enumerate_steps(g, kind, d, all_induced=False):
            label = _label_name_for_filter(g, spec, d)
            if name_filter is not None and label.name != name_filter:
                continue
            after_code = canonical_code(out).code
            dedup = (base, after_code, label.name)
            if dedup in seen:
                continue
            seen.add(dedup)
            outcomes.append((base, after_code, out.n, label))
            result_codes.add(after_code)
            result_n = out.n
    if not outcomes:
        raise ValueError(f"no {family} instances on {len(bases)} base graphs")
    before_counts = counts_for_codes(
        bases, n, model, cache, seed=seed, trials=trials, jobs=jobs
    )
    after_counts = counts_for_codes(
        sorted(result_codes), result_n, model, cache,
        seed=seed, trials=trials, jobs=jobs, skip_budget_failures=True,
    )
    skipped = len(result_codes) - len(after_counts)
    records = [
        StepRecord(base, n, after, after_n, label, before_counts[base], after_counts[after])
        for base, after, after_n, label in outcomes
        if after in after_counts
    ]
    if not records:
        raise ValueError(f"every {family} instance exceeded the budget")
    lo = min(records, key=lambda r: (r.factor, r.before, r.after))
    hi = max(records, key=lambda r: (r.factor, -r.before, -r.after))
    if skipped:
        import sys

        print(f"warning: {skipped} result classes skipped on budget", file=sys.stderr)
    return SurveyResult(n, d, model, family, lo, hi, tuple(records))


@dataclass(frozen=True)
class Histogram:
    """Realization-count histogram over an enumerated graph class."""

    values: dict[int, int]
    total: int

    @property
    def most_frequent(self) -> tuple[int, int]:
        value = min(self.values, key=lambda v: (-self.values[v], v))
        return value, self.values[value]

    @property
    def distinct(self) -> int:
        return len(self.values)


def _count_worker(args) -> tuple[int, int | None]:
    code, n, model, seed, trials, cache_path, skip_budget = args
    cache = CountCache(cache_path) if cache_path else None
    try:
        lam = count_with_cache(
            decode(code, n), model, cache, seed=seed, trials=trials
        )
    except BudgetExceededError:
        if not skip_budget:
            raise
        return code, None
    return code, lam


def counts_for_codes(
    codes: list[int],
    n: int,
    model: CountModel,
    cache: CountCache | None = None,
    seed: int = 0,
    trials: int | None = None,
    jobs: int = 1,
    skip_budget_failures: bool = False,
) -> dict[int, int]:
    """Realization counts for a batch of canonical codes, cache-assisted.

    With `skip_budget_failures` a graph whose Groebner run blows the budget
    is dropped from the result instead of failing the whole batch.
    """
    cache = cache if cache is not None else CountCache()
    out: dict[int, int] = {}
    todo = []
    for code in codes:
        hit = cache.get(code, n, model)
        if hit is not None:
            out[code] = hit.count
        else:
            todo.append(code)
    if jobs > 1 and len(todo) > 1:
        ctx = multiprocessing.get_context("fork")
        args = [
            (c, n, model, seed, trials, cache.path, skip_budget_failures)
            for c in todo
        ]
        with ctx.Pool(jobs) as pool:
            for code, lam in pool.imap_unordered(_count_worker, args):
                if lam is not None:
                    out[code] = lam
        # Pull the workers' journal entries into this process's view.
        cache._loaded = False
        cache._mem.clear()
    else:
        for code in todo:
            try:
                out[code] = count_with_cache(
                    decode(code, n), model, cache, seed=seed, trials=trials
                )
            except BudgetExceededError:
                if not skip_budget_failures:
                    raise
    return out


def distribution(
    n: int,
    model: CountModel,
    min_degree: int = 3,
    cache: CountCache | None = None,
    seed: int = 0,
    trials: int | None = None,
    jobs: int = 1,
) -> Histogram:
    """How many graphs share each realization count, within a min-degree class."""
    codes = enumerate_minimally_rigid(n, 2, min_degree=min_degree)
    lams = counts_for_codes(codes, n, model, cache, seed=seed, trials=trials, jobs=jobs)
    values: dict[int, int] = {}
    for lam in lams.values():
        values[lam] = values.get(lam, 0) + 1
    return Histogram(values, len(codes))


@dataclass(frozen=True)
class ClassReport:
    """Sizes of the named classes the growth tables track."""

    n: int
    total: int  # |M(2,n)|
    mindeg3_total: int  # |D(2,n,3)|
    floor_total: int | None  # graphs with lambda = 2^(n-2)
    mindeg3_floor: int | None
    c4_count: int | None  # graphs with 4 not dividing lambda (min degree 3)
    planar_count: int | None  # planar graphs within min degree 3
    planar_floor: int | None


def class_stats(
    n: int,
    d: int = 2,
    cache: CountCache | None = None,
    seed: int = 0,
    include_all: bool = True,
    jobs: int = 1,
) -> ClassReport:
    """Floor/4-divisibility/planarity class sizes at one vertex count.

    `include_all=False` confines counting to the min-degree-3 graphs; the
    full floor count over |M(2,n)| leans on 0-reductions via the formula
    shortcut, so only degree-3-minimum graphs hit the Groebner engine.
    """
    if d != 2:
        raise ValueError("class statistics are defined for the plane")
    from .graphs import profile

    cache = cache if cache is not None else CountCache()
    codes = enumerate_minimally_rigid(n, 2)
    mindeg3 = [c for c in codes if min(decode(c, n).degrees()) >= 3]
    lams3 = counts_for_codes(mindeg3, n, CountModel(2), cache, seed=seed, jobs=jobs)
    floor = 1 << (n - 2)
    mindeg3_floor = sum(1 for v in lams3.values() if v == floor)
    c4 = sum(1 for v in lams3.values() if v % 4)
    planar = planar_floor = 0
    for code in mindeg3:
        g = decode(code, n)
        if profile(g).planar:
            planar += 1
            if lams3[code] == floor:
                planar_floor += 1
    floor_total = None
    if include_all:
        floor_total = 0
        for code in codes:
            g = decode(code, n)
            lam = count_via_formula(g, CountModel(2), cache)
            if lam is None:
                lam = lams3.get(code)
            if lam is None:
                lam = count_with_cache(g, CountModel(2), cache, seed=seed)
            if lam == floor:
                floor_total += 1
    return ClassReport(
        n=n,
        total=len(codes),
        mindeg3_total=len(mindeg3),
        floor_total=floor_total,
        mindeg3_floor=mindeg3_floor,
        c4_count=c4,
        planar_count=planar,
        planar_floor=planar_floor,
    )


# ---------------------------------------------------------------------------
# Certificate fixtures


@dataclass(frozen=True)
class CertificateRow:
    table: str
    n: int
    code: int
    lam: int | None
    dim: int
    space: str
    subgraph: int | None  # code of a required subgraph pattern, if stated
    subgraph_n: int | None


@dataclass(frozen=True)
class RowReport:
    row: CertificateRow
    checks: dict[str, bool]
    recomputed: int | None

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def _model_tag(tag: str) -> tuple[int, str]:
    """E2/S3-style model column -> (dimension, space)."""
    space = SPHERICAL if tag[0] == "S" else EUCLIDEAN
    return int(tag[1:]), space


def _fixture_path(table: str):
    if not table.startswith("appendix_"):
        table = f"appendix_{table}"
    path = importlib.resources.files("rigicount") / "fixtures" / f"{table}.csv"
    if not path.is_file():
        raise ValueError(f"unknown fixture table {table!r}")
    return path


def _fixture_rows(table: str) -> list[CertificateRow]:
    path = _fixture_path(table)
    rows = []
    with path.open("r", encoding="utf-8") as fh:
        for rec in csv.DictReader(fh):
            dim, space = _model_tag(rec["model"])
            if "extreme" in rec:
                # Factor tables carry a (before, after) pair per row.
                for suffix in ("", "_after"):
                    rows.append(
                        CertificateRow(
                            table=table,
                            n=int(rec["n" + suffix]),
                            code=int(rec["code" + suffix]),
                            lam=int(rec["lambda" + suffix]),
                            dim=dim,
                            space=space,
                            subgraph=None,
                            subgraph_n=None,
                        )
                    )
            else:
                rows.append(
                    CertificateRow(
                        table=table,
                        n=int(rec["n"]),
                        code=int(rec["code"]),
                        lam=int(rec["lambda"]) if rec["lambda"] else None,
                        dim=dim,
                        space=space,
                        subgraph=int(rec["subgraph"]) if rec.get("subgraph") else None,
                        subgraph_n=int(rec["subgraph_n"]) if rec.get("subgraph_n") else None,
                    )
                )
    return rows


def factor_fixture_rows(table: str) -> list[dict]:
    """Raw rows of a factor fixture (extreme, before/after codes and counts)."""
    path = _fixture_path(table)
    with path.open("r", encoding="utf-8") as fh:
        rows = [dict(rec) for rec in csv.DictReader(fh)]
    if not rows or "extreme" not in rows[0]:
        raise ValueError(f"{table!r} is not a factor fixture")
    return rows


def fixture_tables() -> list[str]:
    base = importlib.resources.files("rigicount") / "fixtures"
    return sorted(p.name[:-4] for p in base.iterdir() if p.name.endswith(".csv"))


def verify_certificates(
    table: str,
    cache: CountCache | None = None,
    seed: int = 0,
    recompute_max_vars: int = 13,
    trials: int | None = None,
    jobs: int = 1,
) -> list[RowReport]:
    """Check fixture rows: decode, minimal rigidity, stated subgraph, and a
    full recount wherever the pinned system is small enough."""
    cache = cache if cache is not None else CountCache()
    reports = []
    for row in _fixture_rows(table):
        checks: dict[str, bool] = {}
        recomputed = None
        try:
            g = decode(row.code, row.n)
            checks["decode"] = True
        except ValueError:
            checks["decode"] = False
            reports.append(RowReport(row, checks, None))
            continue
        checks["vertex_count"] = (
            g.n == row.n and min(g.degrees()) >= row.dim
        )
        if row.dim == 2:
            checks["minimally_rigid"] = is_minimally_2_rigid(g).minimally_rigid
        else:
            checks["minimally_rigid"] = is_minimally_d_rigid(
                g, row.dim, seed=seed
            ).minimally_rigid
        if row.subgraph is not None:
            pattern = decode(row.subgraph, row.subgraph_n)
            checks["subgraph"] = bool(find_embeddings(g, pattern, limit=1))
        model = CountModel(row.dim, row.space)
        nvars = row.n * model.coords_per_vertex - row.dim * (row.dim + 1) // 2
        if row.lam is not None and nvars <= recompute_max_vars:
            lam = count_with_cache(
                g, model, cache, seed=seed, trials=trials
            )
            recomputed = lam
            checks["count"] = lam == row.lam
        reports.append(RowReport(row, checks, recomputed))
    return reports
