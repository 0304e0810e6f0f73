"""Exact evaluators for the realization-count bound formulas.

Everything is big-integer or Fraction arithmetic; irrational growth rates
are evaluated with Decimal at 30 significant digits and rounded half-even
to 5 decimals only for display, so float drift can never leak into a
comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal, getcontext
from fractions import Fraction
from math import gcd

__all__ = [
    "GrowthRate",
    "growth_rate",
    "fan_count",
    "FanBoundInput",
    "genfan_lower_bound",
    "theorem_bounds",
    "ratio_alpha_bound",
    "RadicalPower",
    "THEOREMS",
]

_PRECISION = 30


def _nth_root(ratio: Fraction, root: int) -> Decimal:
    """(ratio)^(1/root) to _PRECISION significant digits."""
    ctx = getcontext().copy()
    ctx.prec = _PRECISION
    num = ctx.divide(Decimal(ratio.numerator), Decimal(ratio.denominator))
    return ctx.exp(ctx.divide(ctx.ln(num), Decimal(root)))


def _display5(value: Decimal) -> str:
    return str(value.quantize(Decimal("0.00001"), rounding=ROUND_HALF_EVEN))


@dataclass(frozen=True)
class GrowthRate:
    """Per-vertex factor (lamG/lamH)^(1/dv), kept exact for display."""

    lam_g: int
    lam_h: int
    dv: int
    value: Decimal

    @property
    def display(self) -> str:
        return _display5(self.value)


def growth_rate(lam_g: int, lam_h: int, dv: int) -> GrowthRate:
    """Exact rational power to >= 10 digits; display rounds half-even to 5."""
    if dv < 1:
        raise ValueError("vertex difference must be >= 1")
    if lam_h < 1:
        raise ValueError("subgraph count must be >= 1")
    if lam_g % lam_h:
        raise ValueError(f"{lam_h} does not divide {lam_g}")
    return GrowthRate(lam_g, lam_h, dv, _nth_root(Fraction(lam_g, lam_h), dv))


def fan_count(lam_g: int, lam_h: int, k: int) -> int:
    """lamH * (lamG/lamH)^k: the count of a k-copy fan glued along H."""
    if k < 1:
        raise ValueError("copy count must be >= 1")
    if lam_h < 1 or lam_g % lam_h:
        raise ValueError(f"{lam_h} does not divide {lam_g}")
    return lam_h * (lam_g // lam_h) ** k


@dataclass(frozen=True)
class FanBoundInput:
    """Generalized-fan bound parameters: glue copies of G along H, pad with
    degree-d vertex additions (factor 2 each) up to n vertices."""

    n: int
    v: int  # |V(G)|
    w: int  # |V(H)|
    lam_g: int
    lam_h: int

    def __post_init__(self):
        if not self.w < self.v:
            raise ValueError("H must be a proper subgraph (|W| < |V|)")
        if self.lam_h < 1 or self.lam_g % self.lam_h:
            raise ValueError(f"{self.lam_h} does not divide {self.lam_g}")
        if self.n < self.w:
            raise ValueError("target vertex count below |W|")


def genfan_lower_bound(inp: FanBoundInput) -> int:
    """2^((n-|W|) mod (|V|-|W|)) * lamH * (lamG/lamH)^floor((n-|W|)/(|V|-|W|))."""
    step = inp.v - inp.w
    extra = inp.n - inp.w
    return (
        (1 << (extra % step))
        * inp.lam_h
        * (inp.lam_g // inp.lam_h) ** (extra // step)
    )


@dataclass(frozen=True)
class _Theorem:
    """One displayed bound formula: base * 2^((n-shift) mod period) * ratio^floor(...)."""

    base: int
    ratio: int
    period: int
    shift: int  # subtracted from n; may depend on d via shift_d
    min_n: int
    min_d: int | None = None
    shift_uses_d: bool = False
    kind: str = "lower"  # lower bound on the max / upper bound on the min

    def value(self, n: int, d: int | None = None) -> int:
        shift = self.shift
        if self.shift_uses_d:
            if d is None:
                raise ValueError("this theorem needs a dimension")
            if self.min_d is not None and d < self.min_d:
                raise ValueError(f"dimension {d} below theorem range (d >= {self.min_d})")
            shift = d + self.shift
        if n < max(self.min_n, shift):
            raise ValueError(f"n={n} below theorem range")
        extra = n - shift
        return self.base * (1 << (extra % self.period)) * self.ratio ** (extra // self.period)


# Constants are carried verbatim from the displayed formulas, never recomputed.
THEOREMS: dict[str, _Theorem] = {
    # max lambda_2(n) >= 8 * 2^((n-5) mod 19) * (611930960/8)^floor((n-5)/19)
    "lower2d": _Theorem(base=8, ratio=611930960 // 8, period=19, shift=5, min_n=5),
    # max lambda^S_2(n) >= 8 * 2^((n-5) mod 12) * (1376256/8)^floor((n-5)/12)
    "lowersphere": _Theorem(base=8, ratio=1376256 // 8, period=12, shift=5, min_n=5),
    # max lambda_3(n) >= 1 * 2^((n-3) mod 9) * 54272^floor((n-3)/9)
    "lower3d": _Theorem(base=1, ratio=54272, period=9, shift=3, min_n=3),
    # min lambda_3(n) <= 1 * 2^((n-3) mod 15) * 11552^floor((n-3)/15)
    "min3d": _Theorem(base=1, ratio=11552, period=15, shift=3, min_n=3, kind="upper"),
    # max lambda_d(n) >= 2 * 2^((n-d-1) mod 6) * 2432^floor((n-d-1)/6), d >= 5
    "maxhigh": _Theorem(
        base=2, ratio=2432, period=6, shift=1, min_n=0, min_d=5, shift_uses_d=True
    ),
    # min lambda_d(n) <= 2^((n-d) mod 15) * 11552^floor((n-d)/15), d >= 4
    "mind": _Theorem(
        base=1,
        ratio=11552,
        period=15,
        shift=0,
        min_n=0,
        min_d=4,
        shift_uses_d=True,
        kind="upper",
    ),
}

_ALIASES = {
    "lower_2d": "lower2d",
    "lower_sphere": "lowersphere",
    "lowers2d": "lowersphere",
    "lower_3d": "lower3d",
    "min_3d": "min3d",
    "max_high": "maxhigh",
    "min_d": "mind",
}


def theorem_bounds(name: str, n: int, d: int | None = None) -> int:
    """Exact integer value of a named theorem's displayed formula at n."""
    key = name.lower().replace("-", "").replace(" ", "")
    key = _ALIASES.get(key, key)
    if key not in THEOREMS:
        raise ValueError(f"unknown theorem id {name!r}; known: {sorted(THEOREMS)}")
    return THEOREMS[key].value(n, d)


@dataclass(frozen=True)
class RadicalPower:
    """(num/den)^(p/q) in lowest terms, for display next to the decimal value."""

    num: int
    den: int
    exp_num: int
    exp_den: int

    def __str__(self):
        base = f"{self.num}/{self.den}" if self.den != 1 else str(self.num)
        if self.exp_den == 1 and self.exp_num == 1:
            return base
        return f"({base})^({self.exp_num}/{self.exp_den})"


def _factor_small(x: int, bound: int = 10_000) -> dict[int, int] | None:
    out: dict[int, int] = {}
    f = 2
    while f * f <= x and f <= bound:
        while x % f == 0:
            out[f] = out.get(f, 0) + 1
            x //= f
        f += 1
    if x > 1:
        if x > bound * bound:
            return None
        out[x] = out.get(x, 0) + 1
    return out


def _simplify_radical(ratio: Fraction, root: int) -> RadicalPower | None:
    """Try to rewrite ratio^(1/root) as (a/b)^(p/q) with a small base."""
    fn = _factor_small(ratio.numerator)
    fd = _factor_small(ratio.denominator)
    if fn is None or fd is None:
        return None
    exps: dict[int, int] = dict(fn)
    for prime, e in fd.items():
        exps[prime] = exps.get(prime, 0) - e
    if not exps:
        return RadicalPower(1, 1, 1, 1)
    g = 0
    for e in exps.values():
        g = gcd(g, abs(e))
    common = Fraction(g, root)
    num = den = 1
    for prime, e in exps.items():
        q = e // g
        if q > 0:
            num *= prime**q
        else:
            den *= prime**-q
    return RadicalPower(num, den, common.numerator, common.denominator)


def ratio_alpha_bound(lam: int, lam_s: int, dv: int) -> tuple[Decimal, RadicalPower | None]:
    """(lamS/lam)^(1/dv): the per-vertex sphere/plane ratio a fan certifies."""
    if dv < 1:
        raise ValueError("vertex difference must be >= 1")
    if lam < 1 or lam_s < 1:
        raise ValueError("counts must be positive")
    ratio = Fraction(lam_s, lam)
    return _nth_root(ratio, dv), _simplify_radical(ratio, dv)
