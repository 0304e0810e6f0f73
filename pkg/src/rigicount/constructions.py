"""Rigidity-preserving graph constructions.

k-extensions add a vertex of degree d+k on a chosen site set S (|S| = d+k)
and delete k edges inside S; vertex splits share d-1 neighbors plus the
split edge, spider splits share d neighbors and omit the split edge; coning
joins a new vertex to everything; gluing identifies two graphs along
embeddings of a common subgraph, and a fan iterates that gluing over k
copies.  New vertices always take the next free label so the encodings of
construction outputs are deterministic.

Extension steps are classified by the induced subgraph on S before
deletion (its canonical code names the subtype, e.g. an induced 5-cycle
gives E2Xs236) with the planar 1-extension letters E1a/E1b/E1c mapped from
the number of surviving edges among the three chosen vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

from .graphs import Embedding, Graph, canonical_code, induced_subgraph
from .rigidity import is_minimally_2_rigid, is_minimally_d_rigid

__all__ = [
    "StepSpec",
    "StepLabel",
    "extend",
    "classify_step",
    "vertex_split",
    "spider_split",
    "cone",
    "glue",
    "fan",
    "enumerate_steps",
    "NAMED_E2_CODES",
]

# Induced-subgraph codes of the named 2-deletion subtypes (5-vertex sites).
NAMED_E2_CODES = frozenset({3, 12, 236, 239, 511})


@dataclass(frozen=True)
class StepSpec:
    """One extension step: sites S, deleted edges inside S, dimension."""

    kind: str  # "extend" | "vertex_split" | "spider_split"
    d: int
    sites: tuple[int, ...] = ()
    deleted: tuple[tuple[int, int], ...] = ()
    vertex: int = 0
    moved: tuple[int, ...] = ()
    shared: tuple[int, ...] = ()

    @staticmethod
    def extension(d: int, sites, deleted=()) -> "StepSpec":
        sites = tuple(sorted(sites))
        deleted = tuple(sorted(tuple(sorted(e)) for e in deleted))
        return StepSpec("extend", d, sites=sites, deleted=deleted)

    @staticmethod
    def split(kind: str, d: int, vertex: int, moved, shared) -> "StepSpec":
        return StepSpec(
            kind,
            d,
            vertex=vertex,
            moved=tuple(sorted(moved)),
            shared=tuple(sorted(shared)),
        )


@dataclass(frozen=True)
class StepLabel:
    """Classification of a step: family, deleted-edge shape, induced code."""

    family: str  # E0, E1, E2, VSplit, SSplit
    shape: str  # "X", "V" or ""
    induced_code: int | None
    name: str  # e.g. "E1b", "E2Xs236", "E1s30", "VSplit"


def extend(g: Graph, spec: StepSpec) -> Graph:
    """Apply a k-extension: new vertex n+1 adjacent to all of S, minus k edges."""
    d = spec.d
    sites = spec.sites
    deleted = spec.deleted
    k = len(deleted)
    if len(sites) != d + k:
        raise ValueError(
            f"a {k}-extension in dimension {d} needs {d + k} sites, got {len(sites)}"
        )
    if len(set(sites)) != len(sites) or any(not 1 <= v <= g.n for v in sites):
        raise ValueError("sites must be distinct vertices of the graph")
    site_set = set(sites)
    for u, v in deleted:
        if u not in site_set or v not in site_set:
            raise ValueError(f"deleted edge ({u},{v}) not inside the site set")
        if (min(u, v), max(u, v)) not in g.edges:
            raise ValueError(f"deleted edge ({u},{v}) not present")
    if len(set(deleted)) != k:
        raise ValueError("duplicate deleted edges")
    new = g.n + 1
    edges = set(g.edges) - set(deleted)
    edges.update((v, new) for v in sites)
    return Graph(new, edges)


def classify_step(g: Graph, spec: StepSpec) -> StepLabel:
    """Label a step by family, deleted-edge shape, and induced canonical code."""
    if spec.kind == "vertex_split":
        return StepLabel("VSplit", "", None, "VSplit")
    if spec.kind == "spider_split":
        return StepLabel("SSplit", "", None, "SSplit")
    k = len(spec.deleted)
    family = f"E{k}"
    shape = ""
    if k == 2:
        (a, b), (c, e) = spec.deleted
        common = {a, b} & {c, e}
        shape = "V" if len(common) == 1 else "X"
    induced = canonical_code(induced_subgraph(g, spec.sites)).code
    if spec.d == 2 and k == 1:
        # Letters count the surviving edges among the three chosen vertices.
        survivors = {7: 2, 3: 1, 1: 0}.get(induced)
        name = {2: "E1a", 1: "E1b", 0: "E1c"}.get(survivors, f"E1s{induced}")
    elif k == 0:
        name = "E0"
    else:
        name = f"{family}{shape}s{induced}"
    return StepLabel(family, shape, induced, name)


def _check_split_args(g: Graph, v: int, moved, shared, d: int, share_count: int):
    if not 1 <= v <= g.n:
        raise ValueError(f"vertex {v} out of range")
    nbrs = set(g.neighbors(v))
    moved = set(moved)
    shared = set(shared)
    if moved & shared:
        raise ValueError("moved and shared neighbor sets must be disjoint")
    if not moved <= nbrs or not shared <= nbrs:
        raise ValueError("moved/shared vertices must be neighbors of the split vertex")
    if len(shared) != share_count:
        raise ValueError(f"need exactly {share_count} shared neighbors")
    return moved, shared


def vertex_split(g: Graph, v: int, moved, shared, d: int) -> Graph:
    """Split v: new vertex keeps moved + shared neighbors plus the edge to v."""
    moved, shared = _check_split_args(g, v, moved, shared, d, d - 1)
    new = g.n + 1
    edges = set(g.edges) - {(min(v, m), max(v, m)) for m in moved}
    edges.update((m, new) for m in moved | shared)
    edges.add((v, new))
    return Graph(new, edges)


def spider_split(g: Graph, v: int, moved, shared, d: int) -> Graph:
    """Split v without the connecting edge: new vertex shares d neighbors."""
    moved, shared = _check_split_args(g, v, moved, shared, d, d)
    new = g.n + 1
    edges = set(g.edges) - {(min(v, m), max(v, m)) for m in moved}
    edges.update((m, new) for m in moved | shared)
    return Graph(new, edges)


def cone(g: Graph) -> Graph:
    """Add vertex n+1 adjacent to every existing vertex."""
    new = g.n + 1
    edges = set(g.edges)
    edges.update((v, new) for v in range(1, g.n))
    edges.add((g.n, new))
    return Graph(new, edges)


def glue(g1: Graph, g2: Graph, e1: Embedding, e2: Embedding) -> Graph:
    """Identify e1(w) with e2(w) for every pattern vertex w.

    The first graph keeps its labels; fresh vertices of the second graph get
    labels n1+1, n1+2, ... in ascending order of their original labels.
    """
    if e1.pattern != e2.pattern:
        raise ValueError("embeddings must share the same pattern graph")
    ident = {}  # vertex of g2 -> vertex of the result
    for w in range(1, e1.pattern.n + 1):
        ident[e2.apply(w)] = e1.apply(w)
    nxt = g1.n
    for v in range(1, g2.n + 1):
        if v not in ident:
            nxt += 1
            ident[v] = nxt
    edges = set(g1.edges)
    for u, v in g2.edges:
        a, b = ident[u], ident[v]
        edges.add((min(a, b), max(a, b)))
    return Graph(nxt, edges)


def fan(g: Graph, emb: Embedding, k: int) -> Graph:
    """Glue k copies of g along the embedded subgraph; k=1 returns g itself."""
    if k < 1:
        raise ValueError("copy count must be >= 1")
    result = g
    base = Embedding(emb.pattern, emb.images)  # image labels survive in result
    for _ in range(k - 1):
        result = glue(result, g, base, emb)
    return result


def _certify(g: Graph, d: int) -> bool:
    if d == 2:
        return is_minimally_2_rigid(g).minimally_rigid
    return is_minimally_d_rigid(g, d).minimally_rigid


def enumerate_steps(
    g: Graph,
    kind: str,
    d: int,
    dedup: bool = False,
    all_induced: bool = False,
    certify: bool = True,
) -> Iterator[tuple[StepSpec, Graph]]:
    """All labeled step instances of one family, each certified rigid.

    `kind` is one of e0, e1, e2, vsplit, ssplit, cone.  E2 sites are
    restricted to the named induced codes unless `all_induced` is set
    (the named classes are the ones the factor surveys track).  `dedup`
    collapses results by canonical code; surveys need it off so that every
    labeled instance is visited.
    """
    kind = kind.lower()
    seen: set[int] = set()

    def emit(spec: StepSpec, out: Graph):
        if certify and not _certify(out, d):
            return None
        if dedup:
            cc = canonical_code(out).code
            if cc in seen:
                return None
            seen.add(cc)
        return spec, out

    if kind in ("e0", "e1", "e2"):
        k = int(kind[1])
        for sites in combinations(range(1, g.n + 1), d + k):
            inside = [
                (u, v) for (u, v) in combinations(sites, 2) if g.has_edge(u, v)
            ]
            if len(inside) < k:
                continue
            if k == 2 and not all_induced:
                induced = canonical_code(induced_subgraph(g, sites)).code
                if induced not in NAMED_E2_CODES:
                    continue
            for deleted in combinations(inside, k):
                spec = StepSpec.extension(d, sites, deleted)
                got = emit(spec, extend(g, spec))
                if got:
                    yield got
    elif kind in ("vsplit", "ssplit"):
        share = d - 1 if kind == "vsplit" else d
        splitter = vertex_split if kind == "vsplit" else spider_split
        for v in range(1, g.n + 1):
            nbrs = g.neighbors(v)
            if len(nbrs) < share:
                continue
            for shared in combinations(nbrs, share):
                rest = [u for u in nbrs if u not in shared]
                for r in range(len(rest) + 1):
                    for moved in combinations(rest, r):
                        spec = StepSpec.split(
                            "vertex_split" if kind == "vsplit" else "spider_split",
                            d,
                            v,
                            moved,
                            shared,
                        )
                        got = emit(spec, splitter(g, v, moved, shared, d))
                        if got:
                            yield got
    elif kind == "cone":
        spec = StepSpec("cone", d)
        out = cone(g)
        got = (spec, out) if not certify or _certify(out, d + 1) else None
        if got:
            yield got
    else:
        raise ValueError(f"unknown step family {kind!r}")
