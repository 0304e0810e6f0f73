"""Sparse multivariate polynomials over a prime field and Buchberger's algorithm.

This is the computational core behind realization counting: square quadric
systems in up to ~20 variables whose Groebner bases stay moderate but whose
reductions are hot.  Monomials are packed into single integers (16 bits per
exponent), so multiplication is integer addition and divisibility is one
masked subtraction.  A second packed integer per monomial caches its graded
reverse lexicographic sort key: total degree in the top slot, bias-inverted
exponents below, making degrevlex comparison a plain integer comparison and
keeping the key additive under monomial multiplication.

Pair handling uses the Gebauer-Moeller refinements of Buchberger's two
criteria with the normal selection strategy (minimal lcm degree, then
first-come).  Hard caps on basis size, processed pairs, and live terms turn
runaway inputs into a clean budget error instead of a wrong answer.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "BudgetExceededError",
    "Budget",
    "PolynomialRing",
    "Polynomial",
    "GroebnerBasis",
    "buchberger",
    "normal_form",
    "is_zero_dimensional",
    "standard_monomial_count",
]

_BITS = 16
_SLOT_MAX = (1 << _BITS) - 1
_GUARD = 1 << (_BITS - 1)


class BudgetExceededError(RuntimeError):
    """A resource cap was hit; the computation is abandoned, never wrong."""

    def __init__(self, resource: str, limit: int):
        super().__init__(f"budget exceeded: {resource} > {limit}")
        self.resource = resource
        self.limit = limit


@dataclass(frozen=True)
class Budget:
    max_basis: int = 4000
    max_pairs: int = 2_000_000
    max_terms: int = 4_000_000


class PolynomialRing:
    """F_p[x_1..x_k] with degrevlex order and packed monomials."""

    def __init__(self, nvars: int, prime: int):
        if nvars < 1:
            raise ValueError("need at least one variable")
        if prime < 3:
            raise ValueError("prime must be an odd prime")
        self.nvars = nvars
        self.p = prime
        k = nvars
        self.guard_mask = sum(_GUARD << (_BITS * i) for i in range(k))
        # Key of the constant monomial: degree 0, all slots at full bias.
        self.key_one = sum(_SLOT_MAX << (_BITS * i) for i in range(k))
        self.deg_shift = _BITS * k
        self.slot_masks = tuple(_SLOT_MAX << (_BITS * i) for i in range(k))
        self.units = tuple(1 << (_BITS * i) for i in range(k))

    # --- packed monomial helpers -------------------------------------
    def pack(self, exps: Sequence[int]) -> int:
        if len(exps) != self.nvars:
            raise ValueError("exponent vector has wrong length")
        m = 0
        for i, e in enumerate(exps):
            if not 0 <= e < _GUARD:
                raise ValueError("exponent out of packable range")
            m |= e << (_BITS * i)
        return m

    def unpack(self, m: int) -> tuple[int, ...]:
        return tuple((m >> (_BITS * i)) & _SLOT_MAX for i in range(self.nvars))

    def degree(self, m: int) -> int:
        return sum(self.unpack(m))

    def key(self, m: int) -> int:
        """Degrevlex sort key; bigger key = bigger monomial."""
        exps = self.unpack(m)
        k = sum(exps) << self.deg_shift
        for i, e in enumerate(exps):
            k |= (_SLOT_MAX - e) << (_BITS * i)
        return k

    def divides(self, a: int, b: int) -> bool:
        return ((b | self.guard_mask) - a) & self.guard_mask == self.guard_mask

    def lcm(self, a: int, b: int) -> int:
        t = (b | self.guard_mask) - a
        g = t & self.guard_mask
        low = g - (g >> (_BITS - 1))
        return a + ((t ^ g) & low)

    # --- polynomial construction --------------------------------------
    def polynomial(self, terms: Iterable[tuple[Sequence[int], int]]) -> "Polynomial":
        acc: dict[int, int] = {}
        for exps, c in terms:
            m = self.pack(exps)
            acc[m] = (acc.get(m, 0) + c) % self.p
        packed = [(self.key(m), m, c) for m, c in acc.items() if c % self.p]
        packed.sort(reverse=True)
        return Polynomial(self, tuple(packed))

    def zero(self) -> "Polynomial":
        return Polynomial(self, ())

    def constant(self, c: int) -> "Polynomial":
        return self.polynomial([((0,) * self.nvars, c)])

    def variable(self, i: int) -> "Polynomial":
        exps = [0] * self.nvars
        exps[i] = 1
        return self.polynomial([(exps, 1)])


class Polynomial:
    """Immutable: terms strictly descending in degrevlex, coefficients in (0,p)."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolynomialRing, terms: tuple[tuple[int, int, int], ...]):
        self.ring = ring
        self.terms = terms

    def is_zero(self) -> bool:
        return not self.terms

    def lead_monomial(self) -> tuple[int, ...]:
        return self.ring.unpack(self.terms[0][1])

    def lead_coefficient(self) -> int:
        return self.terms[0][2]

    def total_degree(self) -> int:
        return self.ring.degree(self.terms[0][1]) if self.terms else 0

    def monic(self) -> "Polynomial":
        if not self.terms or self.terms[0][2] == 1:
            return self
        p = self.ring.p
        inv = pow(self.terms[0][2], p - 2, p)
        return Polynomial(
            self.ring, tuple((k, m, c * inv % p) for k, m, c in self.terms)
        )

    def items(self) -> list[tuple[tuple[int, ...], int]]:
        """(exponent tuple, coefficient) pairs, lead first."""
        return [(self.ring.unpack(m), c) for _, m, c in self.terms]

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and (self.ring.nvars, self.ring.p) == (other.ring.nvars, other.ring.p)
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash(self.terms)

    def _combine(self, other: "Polynomial", sign: int) -> "Polynomial":
        p = self.ring.p
        acc = {m: c for _, m, c in self.terms}
        for _, m, c in other.terms:
            acc[m] = (acc.get(m, 0) + sign * c) % p
        packed = [(self.ring.key(m), m, c) for m, c in acc.items() if c]
        packed.sort(reverse=True)
        return Polynomial(self.ring, tuple(packed))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        return self._combine(other, 1)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self._combine(other, -1)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        p = self.ring.p
        acc: dict[int, int] = {}
        for _, ma, ca in self.terms:
            for _, mb, cb in other.terms:
                m = ma + mb
                acc[m] = (acc.get(m, 0) + ca * cb) % p
        packed = [(self.ring.key(m), m, c) for m, c in acc.items() if c]
        packed.sort(reverse=True)
        return Polynomial(self.ring, tuple(packed))


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced monic degrevlex basis; generators sorted by leading monomial."""

    ring: PolynomialRing
    generators: tuple[Polynomial, ...]

    def lead_monomials(self) -> list[tuple[int, ...]]:
        return [g.lead_monomial() for g in self.generators]

    def contains_one(self) -> bool:
        return any(g.terms[0][1] == 0 for g in self.generators)


# Basis entries used during reduction: (lead key, lead monomial, tail terms).
_Entry = tuple[int, int, tuple[tuple[int, int, int], ...]]


def _normal_form_packed(
    fterms: Iterable[tuple[int, int, int]],
    basis: list[_Entry],
    ring: PolynomialRing,
    max_terms: int,
) -> list[tuple[int, int, int]]:
    """Full normal form of a term list vs monic reducers; unsorted output."""
    p = ring.p
    guard = ring.guard_mask
    work: dict[int, int] = {}
    heap: list[tuple[int, int]] = []
    push = heapq.heappush
    pop = heapq.heappop
    get = work.get
    for k, m, c in fterms:
        cc = get(m)
        cc = c % p if cc is None else (cc + c) % p
        if cc:
            if m not in work:
                push(heap, (-k, m))
            work[m] = cc
        elif m in work:
            del work[m]
    out: list[tuple[int, int, int]] = []
    while heap:
        nk, m = pop(heap)
        c = work.pop(m, 0)
        if not c:
            continue
        k = -nk
        red = None
        for entry in basis:
            if entry[0] > k:
                break
            if ((m | guard) - entry[1]) & guard == guard:
                red = entry
                break
        if red is None:
            out.append((k, m, c))
            continue
        lk, lm, tail = red
        mq = m - lm
        kq = k - lk
        for tk, tm, tc in tail:
            m2 = mq + tm
            cc = get(m2)
            if cc is None:
                cc = -c * tc % p
                if cc:
                    work[m2] = cc
                    push(heap, (-(kq + tk), m2))
            else:
                cc = (cc - c * tc) % p
                if cc:
                    work[m2] = cc
                else:
                    del work[m2]
        if len(work) > max_terms:
            raise BudgetExceededError("terms", max_terms)
    return out


def buchberger(
    gens: Sequence[Polynomial], budget: Budget | None = None
) -> GroebnerBasis:
    """Reduced Groebner basis w.r.t. degrevlex.

    Deterministic: the reduced basis is unique for the ideal and the order,
    and all internal tie-breaks (pair selection by minimal lcm degree then
    first-come, reducer choice by smallest lead) are fixed.  Raises
    BudgetExceededError when a resource cap is hit.
    """
    if not gens:
        raise ValueError("need at least one generator")
    ring = gens[0].ring
    for g in gens:
        if (g.ring.nvars, g.ring.p) != (ring.nvars, ring.p):
            raise ValueError("generators live in different rings")
    budget = budget or Budget()
    lcm = ring.lcm
    divides = ring.divides
    deg = ring.degree
    p = ring.p

    basis: list[_Entry] = []  # sorted by lead key, every generator ever added
    gen_lead: list[int] = []  # lead monomial by generator index
    gen_tail: list[tuple[tuple[int, int, int], ...]] = []
    gen_leadkey: list[int] = []
    alive: list[bool] = []
    pairs: list[tuple[int, int, int, int, int]] = []  # (lcmdeg, tick, i, j, lcm)
    tick = 0

    def add_generator(terms: list[tuple[int, int, int]]):
        nonlocal tick
        terms.sort(reverse=True)
        k0, m0, c0 = terms[0]
        if c0 != 1:
            inv = pow(c0, p - 2, p)
            terms = [(k, m, c * inv % p) for k, m, c in terms]
        t = len(gen_lead)

        # Chain criterion (Gebauer-Moeller B) on surviving old pairs.
        kept = [
            e
            for e in pairs
            if not (
                divides(m0, e[4])
                and lcm(gen_lead[e[2]], m0) != e[4]
                and lcm(gen_lead[e[3]], m0) != e[4]
            )
        ]
        if len(kept) != len(pairs):
            pairs[:] = kept
            heapq.heapify(pairs)

        # New pairs, pruned by Gebauer-Moeller M and F plus the product test.
        cand = [(i, lcm(gen_lead[i], m0)) for i in range(t) if alive[i]]
        kept_cand = []
        for i, l in cand:
            if any(l2 != l and divides(l2, l) for j, l2 in cand if j != i):
                continue
            kept_cand.append((i, l))
        coprime_lcms = {l for i, l in kept_cand if l == gen_lead[i] + m0}
        by_lcm: dict[int, int] = {}
        for i, l in kept_cand:
            if l in coprime_lcms or l in by_lcm:
                continue
            by_lcm[l] = i
        for l, i in by_lcm.items():
            heapq.heappush(pairs, (deg(l), tick, i, t, l))
            tick += 1

        for i in range(t):
            if alive[i] and divides(m0, gen_lead[i]):
                alive[i] = False
        gen_lead.append(m0)
        gen_leadkey.append(k0)
        gen_tail.append(tuple(terms[1:]))
        alive.append(True)
        entry = (k0, m0, gen_tail[-1])
        lo, hi = 0, len(basis)
        while lo < hi:
            mid = (lo + hi) // 2
            if basis[mid][0] < k0:
                lo = mid + 1
            else:
                hi = mid
        basis.insert(lo, entry)
        if len(gen_lead) > budget.max_basis:
            raise BudgetExceededError("basis", budget.max_basis)

    for g in sorted(gens, key=lambda q: q.terms[0][0] if q.terms else -1):
        if g.is_zero():
            continue
        nf = _normal_form_packed(g.terms, basis, ring, budget.max_terms)
        if nf:
            add_generator(nf)

    processed = 0
    while pairs:
        _, _, i, j, l = heapq.heappop(pairs)
        processed += 1
        if processed > budget.max_pairs:
            raise BudgetExceededError("pairs", budget.max_pairs)
        lkey = ring.key(l)
        kqi = lkey - gen_leadkey[i]
        kqj = lkey - gen_leadkey[j]
        qi = l - gen_lead[i]
        qj = l - gen_lead[j]
        sterms = [(kqi + tk, qi + tm, tc) for tk, tm, tc in gen_tail[i]]
        sterms += [(kqj + tk, qj + tm, (-tc) % p) for tk, tm, tc in gen_tail[j]]
        nf = _normal_form_packed(sterms, basis, ring, budget.max_terms)
        if nf:
            add_generator(nf)

    # Interreduce the minimal generators to the unique reduced basis.
    minimal = [
        i
        for i in range(len(gen_lead))
        if not any(
            j != i and divides(gen_lead[j], gen_lead[i])
            for j in range(len(gen_lead))
        )
    ]
    reduced: list[Polynomial] = []
    for i in minimal:
        others = [
            (gen_leadkey[j], gen_lead[j], gen_tail[j]) for j in minimal if j != i
        ]
        others.sort(key=lambda e: e[0])
        head = (gen_leadkey[i], gen_lead[i], 1)
        nf = _normal_form_packed(
            [head, *gen_tail[i]], others, ring, budget.max_terms
        )
        nf.sort(reverse=True)
        reduced.append(Polynomial(ring, tuple(nf)).monic())
    reduced.sort(key=lambda q: q.terms[0][0])
    return GroebnerBasis(ring, tuple(reduced))


def normal_form(f: Polynomial, gb: GroebnerBasis, budget: Budget | None = None) -> Polynomial:
    """Unique remainder of f modulo the reduced basis."""
    budget = budget or Budget()
    entries = [
        (g.terms[0][0], g.terms[0][1], g.terms[1:]) for g in gb.generators
    ]
    entries.sort(key=lambda e: e[0])
    nf = _normal_form_packed(f.terms, entries, gb.ring, budget.max_terms)
    nf.sort(reverse=True)
    return Polynomial(gb.ring, tuple(nf))


def is_zero_dimensional(gb: GroebnerBasis) -> bool:
    """True iff every variable has a pure-power leading monomial (or GB = {1})."""
    if gb.contains_one():
        return True
    ring = gb.ring
    covered = [False] * ring.nvars
    for g in gb.generators:
        m = g.terms[0][1]
        for i, mask in enumerate(ring.slot_masks):
            if m and m & mask == m:
                covered[i] = True
    return all(covered)


def standard_monomial_count(gb: GroebnerBasis) -> int:
    """Dimension of the quotient: monomials outside the leading-term ideal.

    Walks the staircase from 1; standard monomials are closed under division
    so the walk visits exactly the staircase plus its immediate boundary.
    """
    if not is_zero_dimensional(gb):
        raise ValueError("ideal is not zero-dimensional")
    if gb.contains_one():
        return 0
    ring = gb.ring
    guard = ring.guard_mask
    lms = [g.terms[0][1] for g in gb.generators]
    units = ring.units
    seen = {0}
    queue = [0]
    count = 0
    while queue:
        m = queue.pop()
        count += 1
        for u in units:
            m2 = m + u
            if m2 in seen:
                continue
            seen.add(m2)
            for lm in lms:
                if ((m2 | guard) - lm) & guard == guard:
                    break
            else:
                queue.append(m2)
    return count
