"""Minimal d-rigidity decisions.

Dimension 2 has an exact combinatorial characterization: |E| = 2n-3 with
every subgraph on n' >= 2 vertices spanning at most 2n'-3 edges.  We decide
it with the (2,3)-pebble game, which also produces an over-braced subgraph
as a witness on failure.

For d >= 3 no combinatorial characterization exists, so we evaluate the
rigidity matrix (the Jacobian of the edge-length map) at random placements
over a 31-bit prime field.  Full rank certifies generic rigidity with no
false positives; a rank deficit on every trial is only probable evidence of
flexibility.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from itertools import combinations

from .graphs import Graph

__all__ = [
    "RigidityStatus",
    "RigidityVerdict",
    "TRIAL_PRIMES",
    "minimal_edge_count",
    "is_minimally_2_rigid",
    "is_minimally_d_rigid",
    "laman_check_brute_force",
]

# 31-bit primes, one drawn per probabilistic trial.
TRIAL_PRIMES = (
    2147483647,
    2147483629,
    2147483587,
    2147483579,
    2147483563,
    2147483549,
    2147483543,
    2147483497,
    2147483489,
    2147483477,
)


class RigidityStatus(Enum):
    MINIMALLY_RIGID = "MinimallyRigid"
    RIGID_NOT_MINIMAL = "RigidNotMinimal"
    FLEXIBLE = "Flexible"
    PROBABLY_FLEXIBLE = "ProbablyFlexible"


@dataclass(frozen=True)
class RigidityVerdict:
    status: RigidityStatus
    witness: tuple | None = None
    reason: str = ""
    trials: int = 0

    def certain(self) -> bool:
        return self.status is not RigidityStatus.PROBABLY_FLEXIBLE

    @property
    def minimally_rigid(self) -> bool:
        return self.status is RigidityStatus.MINIMALLY_RIGID


def minimal_edge_count(n: int, d: int) -> int:
    """Edge count of a minimally d-rigid graph on n >= d vertices."""
    return d * n - d * (d + 1) // 2


class _PebbleGame:
    """(2,3)-pebble game; tracks edge orientations and free pebbles."""

    def __init__(self, n: int):
        self.n = n
        self.pebbles = [2] * (n + 1)
        self.out = [set() for _ in range(n + 1)]

    def _free_pebble_search(self, root: int, blocked: int) -> set[int] | None:
        """Pull one pebble to `root` along reversed directed paths.

        Returns None on success; on failure, the set of vertices explored
        (closed under outgoing edges, every pebble in it spent except the
        endpoints').
        """
        seen = {root, blocked}
        parent = {}
        stack = [root]
        found = None
        while stack:
            x = stack.pop()
            for y in self.out[x]:
                if y in seen:
                    continue
                seen.add(y)
                parent[y] = x
                if self.pebbles[y] > 0:
                    found = y
                    break
                stack.append(y)
            if found is not None:
                break
        if found is None:
            return seen
        self.pebbles[found] -= 1
        y = found
        while y != root:
            x = parent[y]
            self.out[x].discard(y)
            self.out[y].add(x)
            y = x
        self.pebbles[root] += 1
        return None

    def insert(self, u: int, v: int) -> bool:
        """Try to add edge {u,v}; False means the edge is dependent.

        On failure `last_reach` holds the union of both failed searches:
        together with the rejected edge its induced subgraph over-counts
        the 2n'-3 bound.
        """
        while self.pebbles[u] + self.pebbles[v] < 4:
            reach_u = self._free_pebble_search(u, v)
            if reach_u is None:
                continue
            reach_v = self._free_pebble_search(v, u)
            if reach_v is None:
                continue
            self.last_reach = reach_u | reach_v
            return False
        if self.pebbles[u] == 0:
            u, v = v, u
        self.pebbles[u] -= 1
        self.out[u].add(v)
        return True


def is_minimally_2_rigid(g: Graph) -> RigidityVerdict:
    """Exact Laman test via the (2,3)-pebble game."""
    n = g.n
    if n < 2:
        raise ValueError("need at least 2 vertices")
    target = minimal_edge_count(n, 2)
    game = _PebbleGame(n)
    rank = 0
    witness = None
    for u, v in g.sorted_edges():
        if game.insert(u, v):
            rank += 1
        elif witness is None:
            # Reached set has all pebbles spent: the induced subgraph
            # together with the rejected edge over-counts 2n'-3.
            witness = tuple(sorted(game.last_reach | {u, v}))
    if rank < target:
        if g.edge_count == target:
            return RigidityVerdict(
                RigidityStatus.FLEXIBLE, witness, "dependent edge in a tight count"
            )
        return RigidityVerdict(
            RigidityStatus.FLEXIBLE,
            witness,
            f"rank {rank} < {target}",
        )
    if g.edge_count > target:
        return RigidityVerdict(
            RigidityStatus.RIGID_NOT_MINIMAL,
            witness,
            f"{g.edge_count} > {target} edges",
        )
    return RigidityVerdict(RigidityStatus.MINIMALLY_RIGID)


def laman_check_brute_force(g: Graph) -> bool:
    """Literal subgraph-count definition; only viable for small n."""
    n = g.n
    if g.edge_count != minimal_edge_count(n, 2):
        return False
    for k in range(2, n + 1):
        for sub in combinations(range(1, n + 1), k):
            inside = sum(1 for (u, v) in g.edges if u in sub and v in sub)
            if inside > 2 * k - 3:
                return False
    return True


def _matrix_rank_mod_p(rows: list[list[int]], p: int) -> int:
    """Gaussian elimination over F_p; destroys `rows`."""
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    col = 0
    nrows = len(rows)
    while rank < nrows and col < ncols:
        piv = None
        for r in range(rank, nrows):
            if rows[r][col] % p:
                piv = r
                break
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], p - 2, p)
        prow = rows[rank]
        for r in range(rank + 1, nrows):
            f = rows[r][col] % p
            if f:
                f = f * inv % p
                rr = rows[r]
                for c in range(col, ncols):
                    rr[c] = (rr[c] - f * prow[c]) % p
        rank += 1
        col += 1
    return rank


def rigidity_matrix_rank(g: Graph, d: int, placement: list[list[int]], p: int) -> int:
    """Rank of the edge-length Jacobian at the given placement over F_p."""
    rows = []
    for u, v in g.sorted_edges():
        row = [0] * (d * g.n)
        pu, pv = placement[u], placement[v]
        for c in range(d):
            diff = (pu[c] - pv[c]) % p
            row[(u - 1) * d + c] = diff
            row[(v - 1) * d + c] = (-diff) % p
        rows.append(row)
    return _matrix_rank_mod_p(rows, p)


def is_minimally_d_rigid(
    g: Graph, d: int, trials: int = 3, seed: int = 0
) -> RigidityVerdict:
    """Probabilistic rank test; full rank on any trial is a certificate.

    For d = 2 this must agree with the pebble game: the rank test never
    returns a rigid verdict for a flexible graph, so any disagreement is a
    bug rather than bad luck.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    n = g.n
    if n < d:
        raise ValueError(f"need n >= d (got n={n}, d={d})")
    target = minimal_edge_count(n, d)
    m = g.edge_count
    if m != target:
        if m < target:
            return RigidityVerdict(
                RigidityStatus.FLEXIBLE,
                None,
                f"edge count {m} != {target}",
            )
        # Over-count: cannot be minimal, but may still be rigid.
        for t in range(trials):
            p = TRIAL_PRIMES[t % len(TRIAL_PRIMES)]
            rng = random.Random(f"rigidity:{seed}:{t}")
            placement = [[rng.randrange(p) for _ in range(d)] for _ in range(n + 1)]
            if rigidity_matrix_rank(g, d, placement, p) == target:
                return RigidityVerdict(
                    RigidityStatus.RIGID_NOT_MINIMAL,
                    None,
                    f"edge count {m} != {target}",
                    trials=t + 1,
                )
        return RigidityVerdict(
            RigidityStatus.PROBABLY_FLEXIBLE,
            None,
            f"edge count {m} != {target}; rank deficit in all trials",
            trials=trials,
        )
    for t in range(trials):
        p = TRIAL_PRIMES[t % len(TRIAL_PRIMES)]
        rng = random.Random(f"rigidity:{seed}:{t}")
        placement = [[rng.randrange(p) for _ in range(d)] for _ in range(n + 1)]
        if rigidity_matrix_rank(g, d, placement, p) == target:
            return RigidityVerdict(RigidityStatus.MINIMALLY_RIGID, trials=t + 1)
    return RigidityVerdict(
        RigidityStatus.PROBABLY_FLEXIBLE,
        None,
        "rank deficit in all trials",
        trials=trials,
    )
