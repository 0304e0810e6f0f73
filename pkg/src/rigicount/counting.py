"""Realization counting via pinned edge-length systems over prime fields.

For a minimally d-rigid graph the squared-edge-length equations, with
d(d+1)/2 coordinates pinned to zero, form a square quadric system with
finitely many complex solutions.  The pinning kills translations and
rotations except for a residual group of diagonal sign matrices: order
2^(d-1) in Euclidean space (determinant +1) and 2^d on the sphere.  We
therefore count the pinned system's solutions with a Groebner basis over a
random 31-bit prime at random nonzero edge lengths and divide by that
symmetry order; the divisibility itself doubles as a per-trial sanity
check.  Trials with distinct primes are compared and the modal raw degree
is reported.

On the sphere the edge quadrics are augmented with the bilinear forms
<p_u, p_v> - (2 - lambda_uv)/2, which lie in the same ideal modulo the unit
equations and keep the basis degrees low.

For larger spherical jobs there is an optional sign-fixed assembly
(`fix_sign`): the first pinned vertex sits at the pole (0,..,0,1) - its
unit equation factors as z = +-1 and the two branches are swapped by a
determinant-one sign matrix, so fixing z = +1 keeps exactly half the
representatives and the divisor drops to 2^(d-1).  The bilinear edge forms
at that vertex then freeze the top coordinate of each of its neighbors,
removing 1 + deg(v1) variables.  Both assemblies count the same classes
and are cross-checked in the tests.
"""

from __future__ import annotations

import json
import os
import random
import sys
from dataclasses import dataclass
from fractions import Fraction

from .algebra import Budget, Polynomial, PolynomialRing, buchberger, is_zero_dimensional, standard_monomial_count
from .graphs import Graph, canonical_code, induced_subgraph
from .rigidity import TRIAL_PRIMES, is_minimally_2_rigid, is_minimally_d_rigid, minimal_edge_count

__all__ = [
    "EUCLIDEAN",
    "SPHERICAL",
    "CountModel",
    "PinningScheme",
    "PinnedSystem",
    "CountResult",
    "CountCache",
    "DegenerateSystemError",
    "build_system",
    "realization_count",
    "count_via_formula",
    "default_cache",
]

EUCLIDEAN = "euclidean"
SPHERICAL = "spherical"

CACHE_ENV_VAR = "RIGICOUNT_CACHE"
DEFAULT_CACHE_PATH = "./counts.jsonl"


class DegenerateSystemError(RuntimeError):
    """Random lengths produced a degenerate system twice in a row."""


@dataclass(frozen=True)
class CountModel:
    """Job descriptor: ambient dimension and Euclidean vs spherical space."""

    d: int
    space: str = EUCLIDEAN

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("dimension must be >= 1")
        if self.space not in (EUCLIDEAN, SPHERICAL):
            raise ValueError(f"unknown space {self.space!r}")

    @property
    def coords_per_vertex(self) -> int:
        return self.d + 1 if self.space == SPHERICAL else self.d

    @property
    def symmetry_divisor(self) -> int:
        """Order of the residual diagonal sign group of the pinning."""
        return 1 << (self.d if self.space == SPHERICAL else self.d - 1)

    def short(self) -> str:
        return f"{'S' if self.space == SPHERICAL else 'E'}{self.d}"


@dataclass(frozen=True)
class PinningScheme:
    """The d vertices whose coordinates absorb the isometry group.

    Euclidean: the k-th pinned vertex has coordinates k..d zeroed.
    Spherical: the k-th pinned vertex has its first d+1-k coordinates zeroed.
    Either way d(d+1)/2 coordinates vanish.
    """

    vertices: tuple[int, ...]

    @staticmethod
    def default(d: int) -> "PinningScheme":
        return PinningScheme(tuple(range(1, d + 1)))

    def zeroed_coords(self, model: CountModel) -> set[tuple[int, int]]:
        if len(self.vertices) != model.d:
            raise ValueError(f"need exactly {model.d} pinned vertices")
        if len(set(self.vertices)) != model.d:
            raise ValueError("pinned vertices must be distinct")
        zero: set[tuple[int, int]] = set()
        for k, v in enumerate(self.vertices, start=1):
            if model.space == SPHERICAL:
                zero.update((v, c) for c in range(1, model.d + 2 - k))
            else:
                zero.update((v, c) for c in range(k, model.d + 1))
        return zero


@dataclass(frozen=True)
class PinnedSystem:
    """Square polynomial system plus the variable layout that produced it."""

    ring: PolynomialRing
    polynomials: tuple[Polynomial, ...]
    variables: tuple[tuple[int, int], ...]  # (vertex, coordinate) per ring var

    def __iter__(self):
        return iter(self.polynomials)


def build_system(
    g: Graph,
    model: CountModel,
    lengths: dict[tuple[int, int], int],
    pin: PinningScheme | None = None,
    prime: int = TRIAL_PRIMES[0],
    augment: bool = True,
    fix_sign: bool = False,
) -> PinnedSystem:
    """Pinned edge-length system; raises on a non-square shape.

    Euclidean: one quadric sum_c (p_{u,c} - p_{v,c})^2 - lambda_uv per edge.
    Spherical: per-vertex unit quadrics sum_c p_{v,c}^2 - 1 plus the same
    edge quadrics in d+1 coordinates (optionally augmented with their
    bilinear reductions).  Pinned coordinates are substituted by zero.

    `fix_sign` (spherical only) assembles the reduced sign-representative
    system instead: the first pinned vertex is frozen at the pole and the
    top coordinates of its neighbors become constants; the residual
    symmetry order halves to 2^(d-1).
    """
    if fix_sign and model.space != SPHERICAL:
        raise ValueError("fix_sign applies to the spherical model only")
    if pin is None:
        if fix_sign:
            # The pole vertex eliminates one variable per incident edge, so
            # take a maximum-degree vertex.
            v1 = max(g.vertices(), key=g.degree)
            rest = [v for v in g.vertices() if v != v1][: model.d - 1]
            pin = PinningScheme((v1, *rest))
        else:
            pin = PinningScheme.default(model.d)
    if any(not 1 <= v <= g.n for v in pin.vertices):
        raise ValueError("pinned vertices out of range")
    zero = pin.zeroed_coords(model)
    p = prime
    top = model.coords_per_vertex
    for u, v in g.sorted_edges():
        if (u, v) not in lengths:
            raise ValueError(f"missing edge length for ({u},{v})")
    inv2 = pow(2, p - 2, p)
    fixed: dict[tuple[int, int], int] = {}
    pole = None
    if fix_sign:
        pole = pin.vertices[0]
        fixed[(pole, top)] = 1
        for u in g.neighbors(pole):
            lam = lengths[(min(u, pole), max(u, pole))] % p
            # <p_pole, p_u> = z_u = (2 - lambda)/2
            fixed[(u, top)] = (2 - lam) * inv2 % p

    variables: list[tuple[int, int]] = []
    index: dict[tuple[int, int], int] = {}
    for v in range(1, g.n + 1):
        for c in range(1, top + 1):
            if (v, c) in zero or (v, c) in fixed:
                continue
            index[(v, c)] = len(variables)
            variables.append((v, c))
    nv = len(variables)
    if model.space == SPHERICAL:
        n_equations = g.edge_count + g.n
        if fix_sign:
            # The pole's unit equation and its incident edge equations are
            # consumed by the coordinate elimination.
            n_equations -= 1 + g.degree(pole)
    else:
        n_equations = g.edge_count
    if nv != n_equations:
        raise ValueError(
            f"non-square system: {n_equations} equations vs {nv} unknowns "
            "(input not minimally rigid for this model?)"
        )
    ring = PolynomialRing(nv, p)
    polys: list[Polynomial] = []

    def coord(v, c):
        """(variable index or None, constant multiplier)."""
        if (v, c) in zero:
            return None, 0
        if (v, c) in fixed:
            return None, fixed[(v, c)]
        return index[(v, c)], 1

    def emit(terms: dict[tuple[int, ...], int]):
        packed = [(e, c % p) for e, c in terms.items() if c % p]
        polys.append(ring.polynomial(packed))

    def bump(terms, exps, c):
        c %= p
        if c:
            terms[exps] = (terms.get(exps, 0) + c) % p

    def dot_terms(terms, u, v, scale):
        """Add scale * <p_u, p_v> into the term map."""
        for c in range(1, top + 1):
            iu, ku = coord(u, c)
            iv, kv = coord(v, c)
            e = [0] * nv
            coeff = scale
            if iu is None:
                coeff = coeff * ku % p
            else:
                e[iu] += 1
            if iv is None:
                coeff = coeff * kv % p
            else:
                e[iv] += 1
            bump(terms, tuple(e), coeff)

    if model.space == SPHERICAL:
        for v in range(1, g.n + 1):
            if fix_sign and v == pole:
                continue  # the pole's unit equation collapsed to 1 = 1
            terms: dict[tuple[int, ...], int] = {}
            dot_terms(terms, v, v, 1)
            bump(terms, (0,) * nv, -1)
            emit(terms)
    if not (fix_sign and model.space == SPHERICAL):
        for u, v in g.sorted_edges():
            lam = lengths[(u, v)] % p
            terms = {}
            dot_terms(terms, u, u, 1)
            dot_terms(terms, v, v, 1)
            dot_terms(terms, u, v, -2)
            bump(terms, (0,) * nv, -lam)
            emit(terms)
    if model.space == SPHERICAL and (augment or fix_sign):
        for u, v in g.sorted_edges():
            if fix_sign and pole in (u, v):
                continue  # consumed by the coordinate elimination
            lam = lengths[(u, v)] % p
            terms = {}
            dot_terms(terms, u, v, 1)
            bump(terms, (0,) * nv, -((2 - lam) * inv2))
            emit(terms)
    return PinnedSystem(ring, tuple(polys), tuple(variables))


@dataclass(frozen=True)
class CountResult:
    """Multi-trial realization-count outcome."""

    count: int
    raw_degrees: tuple[int, ...]
    symmetry_divisor: int
    trials: int
    agreement: bool
    primes: tuple[int, ...]
    seed: int

    def to_record(self, key: int, n: int, model: CountModel) -> dict:
        return {
            "key": str(key),
            "n": n,
            "dim": model.d,
            "space": model.space,
            "count": self.count,
            "raw": list(self.raw_degrees),
            "primes": list(self.primes),
            "seed": self.seed,
            "agreement": self.agreement,
        }

    @staticmethod
    def from_record(rec: dict) -> "CountResult":
        # The divisor is not journaled; it is recoverable as raw/count (the
        # sign-fixed spherical assembly halves it).
        raws = tuple(rec["raw"])
        divisor = max(raws) // rec["count"] if rec["count"] else 1
        return CountResult(
            count=rec["count"],
            raw_degrees=raws,
            symmetry_divisor=divisor,
            trials=len(raws),
            agreement=rec["agreement"],
            primes=tuple(rec["primes"]),
            seed=rec["seed"],
        )


class CountCache:
    """Append-only JSONL journal keyed by (canonical code, n, model).

    Reads return the latest agreeing entry; corrupt lines are skipped with a
    warning on stderr.  Appends go through a single `write` call per record
    so concurrent writers interleave at line granularity.
    """

    def __init__(self, path: str | os.PathLike | None = None):
        self.path = str(
            path
            if path is not None
            else os.environ.get(CACHE_ENV_VAR, DEFAULT_CACHE_PATH)
        )
        self._mem: dict[tuple[str, int, int, str], dict] = {}
        self._loaded = False

    def _key(self, code: int, n: int, model: CountModel):
        return (str(code), n, model.d, model.space)

    def _load(self):
        if self._loaded:
            return
        self._loaded = True
        if not os.path.exists(self.path):
            return
        with open(self.path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                    key = (rec["key"], rec["n"], rec["dim"], rec["space"])
                    if rec.get("agreement"):
                        self._mem[key] = rec
                except (json.JSONDecodeError, KeyError, TypeError):
                    print(
                        f"warning: skipping corrupt cache line {lineno} in {self.path}",
                        file=sys.stderr,
                    )

    def get(self, code: int, n: int, model: CountModel) -> CountResult | None:
        self._load()
        rec = self._mem.get(self._key(code, n, model))
        return CountResult.from_record(rec) if rec else None

    def put(self, code: int, n: int, model: CountModel, result: CountResult):
        self._load()
        rec = result.to_record(code, n, model)
        if result.agreement:
            self._mem[self._key(code, n, model)] = rec
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(rec) + "\n")


def default_cache() -> CountCache:
    return CountCache()


def default_trials(model: CountModel) -> int:
    """5 trials through dimension 2, 3 beyond (cost), CLI-raisable."""
    return 5 if model.d <= 2 else 3


def _count_one_trial(
    g: Graph,
    model: CountModel,
    canon: int,
    seed: int,
    trial: int,
    budget: Budget,
    pin: PinningScheme | None,
    fix_sign: bool,
) -> tuple[int, int]:
    """One randomized trial; returns (raw staircase degree, prime)."""
    p = TRIAL_PRIMES[trial % len(TRIAL_PRIMES)]
    for attempt in ("", ":retry"):
        rng = random.Random(
            f"count:{seed}:{canon}:{model.space}:{model.d}:{trial}{attempt}"
        )
        lengths = {e: rng.randrange(1, p) for e in g.sorted_edges()}
        system = build_system(g, model, lengths, pin=pin, prime=p, fix_sign=fix_sign)
        gb = buchberger(list(system.polynomials), budget)
        if is_zero_dimensional(gb):
            return standard_monomial_count(gb), p
    raise DegenerateSystemError(
        f"system not zero-dimensional after re-randomizing (trial {trial})"
    )


def realization_count(
    g: Graph,
    model: CountModel,
    trials: int | None = None,
    seed: int = 0,
    cache: CountCache | None = None,
    budget: Budget | None = None,
    pin: PinningScheme | None = None,
    check_rigidity: bool = True,
    fix_sign: bool | None = None,
) -> CountResult:
    """Count non-congruent complex realizations for generic edge lengths.

    Each trial draws a fresh prime and fresh uniform nonzero lengths; the
    modal raw degree across trials, divided by the residual symmetry order,
    is the reported count.  Trials whose raw degree the divisor does not
    divide are discarded as degenerate.  Agreeing results are cached.

    `fix_sign=None` picks the reduced spherical assembly automatically for
    7 or more vertices, where it is a large constant-factor win.
    """
    trials = trials if trials is not None else default_trials(model)
    if trials < 1:
        raise ValueError("need at least one trial")
    if fix_sign is None:
        fix_sign = model.space == SPHERICAL and g.n >= 7
    budget = budget or Budget()
    canon = canonical_code(g).code
    if cache is not None:
        hit = cache.get(canon, g.n, model)
        if hit is not None:
            return hit
    if check_rigidity:
        verdict = (
            is_minimally_2_rigid(g)
            if model.d == 2
            else is_minimally_d_rigid(g, model.d, seed=seed)
        )
        if not verdict.minimally_rigid:
            raise ValueError(
                f"graph is not minimally {model.d}-rigid: {verdict.status.value}"
            )
    divisor = model.symmetry_divisor
    if fix_sign:
        divisor //= 2
    raws: list[int] = []
    primes: list[int] = []
    for t in range(trials):
        raw, p = _count_one_trial(g, model, canon, seed, t, budget, pin, fix_sign)
        if raw % divisor:
            # Degenerate random lengths; discard this trial.
            continue
        raws.append(raw)
        primes.append(p)
    if not raws:
        raise DegenerateSystemError("all trials degenerate")
    modal = max(set(raws), key=lambda r: (raws.count(r), -r))
    result = CountResult(
        count=modal // divisor,
        raw_degrees=tuple(raws),
        symmetry_divisor=divisor,
        trials=len(raws),
        agreement=all(r == modal for r in raws),
        primes=tuple(primes),
        seed=seed,
    )
    if cache is not None:
        cache.put(canon, g.n, model, result)
    return result


def _strip_vertex(g: Graph, v: int) -> Graph:
    keep = [u for u in g.vertices() if u != v]
    return induced_subgraph(g, keep)


def _connected_components(g: Graph, removed: frozenset[int]) -> list[list[int]]:
    seen: set[int] = set(removed)
    comps = []
    for start in g.vertices():
        if start in seen:
            continue
        stack = [start]
        seen.add(start)
        comp = []
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in g.neighbors(x):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append(comp)
    return comps


def _is_min_rigid(g: Graph, d: int) -> bool:
    if g.n < d:
        return False
    if d == 2:
        return is_minimally_2_rigid(g).minimally_rigid
    return is_minimally_d_rigid(g, d).minimally_rigid


def count_via_formula(
    g: Graph,
    model: CountModel = CountModel(2, EUCLIDEAN),
    cache: CountCache | None = None,
    _max_block: int = 6,
) -> int | None:
    """Structural shortcut: 0-reductions, cache hits, and gluing splits.

    Returns a count only when the reduction bottoms out at a cached or
    trivially known graph (complete graphs on d or d+1 vertices); absence is
    a valid answer.
    """
    d = model.d
    n = g.n
    if n < d or g.edge_count != minimal_edge_count(n, d):
        return None
    if n <= d + 1:
        # Only the complete graph is minimally rigid here.
        if g.edge_count == n * (n - 1) // 2:
            return 1 if n <= d else 2
        return None
    # 0-reduction: a degree-d vertex contributes an exact factor of 2.
    for v in g.vertices():
        if g.degree(v) == d:
            sub = count_via_formula(_strip_vertex(g, v), model, cache, _max_block)
            return None if sub is None else 2 * sub
    if cache is not None:
        hit = cache.get(canonical_code(g).code, n, model)
        if hit is not None:
            return hit.count
    # Gluing split: a minimally rigid block W that disconnects the rest.
    from itertools import combinations

    for w_size in range(d, min(n - 1, _max_block) + 1):
        for w in combinations(range(1, n + 1), w_size):
            h = induced_subgraph(g, w)
            if not _is_min_rigid(h, d):
                continue
            comps = _connected_components(g, frozenset(w))
            if len(comps) < 2:
                continue
            lam_h = count_via_formula(h, model, cache, _max_block)
            if lam_h is None:
                continue
            value = Fraction(lam_h)
            ok = True
            for comp in comps:
                piece = induced_subgraph(g, list(w) + comp)
                if not _is_min_rigid(piece, d):
                    ok = False
                    break
                lam_piece = count_via_formula(piece, model, cache, _max_block)
                if lam_piece is None:
                    ok = False
                    break
                value *= Fraction(lam_piece, lam_h)
            if ok:
                assert value.denominator == 1
                return int(value)
    return None
