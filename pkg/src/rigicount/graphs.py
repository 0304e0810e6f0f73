"""Labeled simple graphs, their integer encodings, and subgraph machinery.

A graph on vertices 1..n is stored as a frozen edge set plus per-vertex
adjacency bitmasks.  The integer code of a graph flattens the upper
triangle of the adjacency matrix in row-major pair order
(1,2),(1,3),...,(1,n),(2,3),...,(n-1,n) and reads the resulting bit
string as an integer, most significant bit first.  Isomorphic graphs may
have different codes; `canonical_code` computes the minimum code over
all relabelings with partition-refinement pruning so it stays fast up to
a dozen or so vertices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

__all__ = [
    "Graph",
    "GraphCode",
    "Embedding",
    "PropertyRecord",
    "pair_count",
    "pair_index",
    "encode",
    "decode",
    "infer_vertex_count",
    "canonical_code",
    "induced_subgraph",
    "find_embeddings",
    "profile",
]


def pair_count(n: int) -> int:
    """Number of vertex pairs, i.e. bits in the code of an n-vertex graph."""
    return n * (n - 1) // 2


def pair_index(u: int, v: int, n: int) -> int:
    """Row-major position of the pair {u,v}, 1 <= u < v <= n, counting from 0."""
    if not 1 <= u < v <= n:
        raise ValueError(f"bad pair ({u},{v}) for n={n}")
    return (u - 1) * n - u * (u + 1) // 2 + (v - 1)


class Graph:
    """Immutable labeled simple graph on vertices 1..n."""

    __slots__ = ("n", "edges", "adj", "_hash")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 1:
            raise ValueError("vertex count must be positive")
        norm = set()
        adj = [0] * (n + 1)
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if u > v:
                u, v = v, u
            if not (1 <= u < v <= n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            norm.add((u, v))
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self.n = n
        self.edges = frozenset(norm)
        self.adj = tuple(adj)
        self._hash = hash((n, self.edges))

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self.edges == other.edges
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Graph(n={self.n}, code={encode(self).code})"

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1) if u != v else False

    def degree(self, v: int) -> int:
        return bin(self.adj[v]).count("1")

    def degrees(self) -> list[int]:
        return [self.degree(v) for v in range(1, self.n + 1)]

    def neighbors(self, v: int) -> list[int]:
        m = self.adj[v]
        return [u for u in range(1, self.n + 1) if m >> u & 1]

    def vertices(self) -> range:
        return range(1, self.n + 1)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


@dataclass(frozen=True)
class GraphCode:
    """Integer encoding of a graph together with its explicit vertex count."""

    code: int
    n: int

    def __post_init__(self):
        if self.code < 0:
            raise ValueError("code must be non-negative")
        if self.n < 1:
            raise ValueError("vertex count must be positive")
        if self.code >= 1 << pair_count(self.n):
            raise ValueError(f"code {self.code} too large for n={self.n}")


def encode(g: Graph) -> GraphCode:
    """Flatten the upper adjacency triangle into an integer, pair (1,2) first."""
    code = 0
    for u in range(1, g.n):
        row = g.adj[u]
        for v in range(u + 1, g.n + 1):
            code = code << 1 | (row >> v & 1)
    return GraphCode(code, g.n)


def decode(c: GraphCode | int, n: int | None = None) -> Graph:
    """Inverse of `encode`; the vertex count is never inferred here."""
    if isinstance(c, GraphCode):
        code, n = c.code, c.n
    else:
        if n is None:
            raise ValueError("decode of a bare integer needs an explicit n")
        code = c
        GraphCode(code, n)  # range check
    bits = pair_count(n)
    edges = []
    pos = 0
    for u in range(1, n):
        for v in range(u + 1, n + 1):
            if code >> (bits - 1 - pos) & 1:
                edges.append((u, v))
            pos += 1
    return Graph(n, edges)


def infer_vertex_count(code: int) -> int:
    """Smallest n whose pair count covers the code's bit length.

    A CLI convenience only: trailing low-label structure makes the true n
    ambiguous, so 0 is rejected and callers can always pass n explicitly.
    """
    if code < 1:
        raise ValueError("vertex count of code 0 is ambiguous; pass n explicitly")
    bl = code.bit_length()
    n = 2
    while pair_count(n) < bl:
        n += 1
    return n


def canonical_code(g: Graph) -> GraphCode:
    """Minimum of `encode` over all vertex relabelings.

    Backtracks over ordered partitions (cells are vertex bitmasks): choosing
    the next label splits every remaining cell into non-neighbors followed
    by neighbors, which makes the code rows a true prefix of the final code
    and allows pruning against the best complete code seen so far.  Twin
    candidates (swapping them is an automorphism of the unlabeled remainder)
    are collapsed so highly symmetric graphs do not blow up the search.
    """
    n = g.n
    if n == 1:
        return GraphCode(0, 1)
    adj = g.adj
    total_bits = pair_count(n)
    best: list[int | None] = [None]

    def rec(cells: list[int], acc: int, bits_done: int, remaining: int):
        if remaining == 1:
            if best[0] is None or acc < best[0]:
                best[0] = acc
            return
        head = cells[0]
        # Row string of each candidate: per cell, zeros (non-neighbors)
        # then ones (neighbors), candidate's own slot removed.
        scored: list[tuple[int, int]] = []
        m = head
        while m:
            v = m.bit_length() - 1
            m ^= 1 << v
            a = adj[v]
            row = 0
            for cell in cells:
                c = cell & ~(1 << v)
                row = row << c.bit_count() | ((1 << (a & c).bit_count()) - 1)
            scored.append((row, v))
        best_row = min(r for r, _ in scored)
        row_width = remaining - 1
        acc2 = acc << row_width | best_row
        done2 = bits_done + row_width
        if best[0] is not None and acc2 > best[0] >> (total_bits - done2):
            return
        taken: list[tuple[int, int]] = []
        for row, v in scored:
            if row != best_row:
                continue
            sig = adj[v] & ~(1 << v)
            twin = False
            for prev_sig, prev_v in taken:
                if sig == prev_sig or sig ^ (1 << prev_v) == prev_sig ^ (1 << v):
                    twin = True
                    break
            if twin:
                continue
            taken.append((sig, v))
            a = adj[v]
            new_cells: list[int] = []
            first_cell = head & ~(1 << v)
            for cell in [first_cell] + cells[1:] if first_cell else cells[1:]:
                non = cell & ~a
                yes = cell & a
                if non:
                    new_cells.append(non)
                if yes:
                    new_cells.append(yes)
            rec(new_cells, acc2, done2, remaining - 1)

    all_mask = ((1 << (n + 1)) - 1) ^ 1
    rec([all_mask], 0, 0, n)
    assert best[0] is not None
    return GraphCode(best[0], n)


def induced_subgraph(g: Graph, s: Iterable[int]) -> Graph:
    """Subgraph on `s`, relabeled order-preservingly to 1..|s|."""
    vs = sorted(set(s))
    if not vs:
        raise ValueError("empty vertex set")
    if vs[0] < 1 or vs[-1] > g.n:
        raise ValueError("vertex set not within 1..n")
    pos = {v: i + 1 for i, v in enumerate(vs)}
    edges = [
        (pos[u], pos[v]) for (u, v) in g.edges if u in pos and v in pos
    ]
    return Graph(len(vs), edges)


@dataclass(frozen=True)
class Embedding:
    """Injective map of a pattern graph's vertices into a host graph.

    `images[i]` is the host vertex assigned to pattern vertex i+1.  Every
    pattern edge must land on a host edge (subgraph embedding, not
    necessarily induced).
    """

    pattern: Graph
    images: tuple[int, ...]

    def __post_init__(self):
        if len(self.images) != self.pattern.n:
            raise ValueError("image tuple length must equal pattern order")
        if len(set(self.images)) != len(self.images):
            raise ValueError("embedding must be injective")

    def apply(self, v: int) -> int:
        return self.images[v - 1]

    def image_set(self) -> frozenset[int]:
        return frozenset(self.images)


def find_embeddings(host: Graph, pattern: Graph, limit: int | None = None) -> list[Embedding]:
    """Backtracking subgraph-embedding search, lexicographic on the image tuple."""
    if pattern.n > host.n:
        return []
    out: list[Embedding] = []
    padj = pattern.adj
    hadj = host.adj
    images: list[int] = []
    used = 0

    def rec(k: int) -> bool:
        nonlocal used
        if k > pattern.n:
            out.append(Embedding(pattern, tuple(images)))
            return limit is not None and len(out) >= limit
        prev = padj[k]
        for cand in range(1, host.n + 1):
            if used >> cand & 1:
                continue
            ok = True
            for j in range(1, k):
                if prev >> j & 1 and not hadj[images[j - 1]] >> cand & 1:
                    ok = False
                    break
            if not ok:
                continue
            images.append(cand)
            used |= 1 << cand
            if rec(k + 1):
                return True
            used &= ~(1 << cand)
            images.pop()
        return False

    rec(1)
    return out


@dataclass(frozen=True)
class PropertyRecord:
    """Structural profile used by the max-count property checklists."""

    n: int
    min_degree: int
    max_degree: int
    degree3_count: int
    adjacent_degree3: bool
    has_triangle: bool
    planar: bool
    hamiltonian: bool
    chromatic_number: int
    degree3_open_neighborhoods: bool


def _has_triangle(g: Graph) -> bool:
    for u, v in g.edges:
        if g.adj[u] & g.adj[v]:
            return True
    return False


def _is_hamiltonian(g: Graph) -> bool:
    n = g.n
    if n == 1:
        return True
    if n == 2:
        return False
    if any(g.degree(v) < 2 for v in g.vertices()):
        return False
    adj = g.adj
    start = 1
    path = [start]
    visited = 1 << start

    def rec() -> bool:
        nonlocal visited
        if len(path) == n:
            return bool(adj[path[-1]] >> start & 1)
        last = adj[path[-1]]
        for w in range(2, n + 1):
            if last >> w & 1 and not visited >> w & 1:
                path.append(w)
                visited |= 1 << w
                if rec():
                    return True
                visited &= ~(1 << w)
                path.pop()
        return False

    return rec()


def _chromatic_number(g: Graph) -> int:
    if not g.edges:
        return 1 if g.n >= 1 else 0
    n = g.n
    adj = g.adj
    order = sorted(g.vertices(), key=g.degree, reverse=True)

    def colorable(k: int) -> bool:
        colors = [0] * (n + 1)

        def rec(i: int) -> bool:
            if i == len(order):
                return True
            v = order[i]
            seen = {colors[u] for u in range(1, n + 1) if adj[v] >> u & 1 and colors[u]}
            top = 0
            for u in order[:i]:
                top = max(top, colors[u])
            for c in range(1, min(k, top + 1) + 1):
                if c in seen:
                    continue
                colors[v] = c
                if rec(i + 1):
                    return True
                colors[v] = 0
            return False

        return rec(0)

    lo = 3 if _has_triangle(g) else 2
    for k in range(lo, n + 1):
        if colorable(k):
            return k
    return n


def _is_planar(g: Graph) -> bool:
    import networkx as nx

    nxg = nx.Graph()
    nxg.add_nodes_from(g.vertices())
    nxg.add_edges_from(g.edges)
    ok, _ = nx.check_planarity(nxg)
    return ok


def profile(g: Graph) -> PropertyRecord:
    """Exact structural profile; exponential subroutines cap at n=16."""
    if g.n > 16:
        raise ValueError("profile is exact and limited to n <= 16")
    degs = g.degrees()
    deg3 = [v for v in g.vertices() if degs[v - 1] == 3]
    adjacent3 = any(
        g.has_edge(u, v) for u, v in itertools.combinations(deg3, 2)
    )
    # E1c indicator: for every degree-3 vertex no two of its neighbors are
    # themselves adjacent (the final construction step must delete an
    # isolated edge among the chosen vertices).
    open_n3 = all(
        not g.has_edge(a, b)
        for v in deg3
        for a, b in itertools.combinations(g.neighbors(v), 2)
    )
    return PropertyRecord(
        n=g.n,
        min_degree=min(degs),
        max_degree=max(degs),
        degree3_count=len(deg3),
        adjacent_degree3=adjacent3,
        has_triangle=_has_triangle(g),
        planar=_is_planar(g),
        hamiltonian=_is_hamiltonian(g),
        chromatic_number=_chromatic_number(g),
        degree3_open_neighborhoods=open_n3,
    )
