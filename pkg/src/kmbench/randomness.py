"""Likelihood-ratio martingales, finite-depth classification, and codelength statistics."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from . import coder
from .measures import ZERO, Measure, ProductMeasure, RateFunction, check_bits

#: fractional bits of the reported log2 of a ratio
LOG2_FRAC_BITS = 10
DEFAULT_THRESHOLD = 20


def ratio(p: Measure, q: Measure, x: str) -> Fraction:
    """``Q(x) / P(x)``, zero where ``P(x) = 0``."""
    den = p.mass(x)
    if den == 0:
        return ZERO
    return q.mass(x) / den


def _floor_log2(r: Fraction) -> int:
    e = r.numerator.bit_length() - r.denominator.bit_length()
    # 2^(e-1) < r < 2^(e+1); settle which side of 2^e
    if (r.numerator << max(0, -e)) < (r.denominator << max(0, e)):
        e -= 1
    return e


def _log2_fixed_exact(r: Fraction, frac_bits: int) -> int:
    e = _floor_log2(r)
    m = r / Fraction(2) ** e
    bits = 0
    for _ in range(frac_bits):
        m = m * m
        bits <<= 1
        if m >= 2:
            bits |= 1
            m /= 2
    return e * (1 << frac_bits) + bits


def log2_fixed(r: Fraction, frac_bits: int = LOG2_FRAC_BITS) -> int | None:
    """``floor(2^frac_bits * log2(r))`` computed exactly; ``None`` for r = 0.

    Fractional bits come from repeated squaring of the mantissa in [1, 2). The
    squaring runs on a 128-bit lower/upper bracket and falls back to exact
    rationals only if the bracket ever straddles 2.
    """
    if r < 0:
        raise ValueError("log of a negative ratio")
    if r == 0:
        return None
    e = _floor_log2(r)
    mant = r / Fraction(2) ** e
    prec = 128
    two = 2 << prec
    lo = (mant.numerator << prec) // mant.denominator
    hi = -((-mant.numerator << prec) // mant.denominator)
    bits = 0
    for _ in range(frac_bits):
        lo = (lo * lo) >> prec
        hi = -((-(hi * hi)) >> prec)
        bits <<= 1
        if lo >= two:
            bits |= 1
            lo >>= 1
            hi = -((-hi) >> 1)
        elif hi >= two:
            return _log2_fixed_exact(r, frac_bits)
    return e * (1 << frac_bits) + bits


class Verdict(enum.Enum):
    CONSISTENT_BOTH = "CONSISTENT_BOTH"
    P_NOT_Q = "P_NOT_Q"
    Q_NOT_P = "Q_NOT_P"
    UNDECIDED = "UNDECIDED"


def verdict_for(r: Fraction, t: int, p_mass: Fraction | None = None, q_mass: Fraction | None = None) -> Verdict:
    if p_mass == 0 and q_mass == 0:
        return Verdict.UNDECIDED
    if p_mass == 0:
        # Q puts mass where P puts none
        return Verdict.Q_NOT_P
    bound = Fraction(2) ** t
    if r * bound <= 1:
        return Verdict.P_NOT_Q
    if r >= bound:
        return Verdict.Q_NOT_P
    return Verdict.CONSISTENT_BOTH


def classify(p: Measure, q: Measure, x: str, t: int = DEFAULT_THRESHOLD) -> Verdict:
    """Threshold rule on the exact likelihood ratio at ``x``.

    ``r <= 2^-t`` reads as random for P but not Q, ``r >= 2^t`` the reverse.
    Under P, Ville's inequality bounds the chance that ``r`` ever reaches
    ``2^t`` by ``2^-t``.
    """
    if t < 1:
        raise ValueError("threshold must be at least one bit")
    pm, qm = p.mass(x), q.mass(x)
    r = qm / pm if pm else ZERO
    return verdict_for(r, t, pm, qm)


@dataclass(frozen=True)
class TracePoint:
    n: int
    ratio: Fraction
    log2r: int | None  # fixed point, LOG2_FRAC_BITS fractional bits; None for r = 0

    @property
    def sign(self) -> int:
        """Exact comparison of r against 1."""
        return (self.ratio > 1) - (self.ratio < 1)


@dataclass
class MartingaleTrace:
    points: list[TracePoint] = field(default_factory=list)

    @property
    def final(self) -> TracePoint:
        return self.points[-1]

    def running_min(self) -> list[Fraction]:
        out, cur = [], None
        for pt in self.points:
            cur = pt.ratio if cur is None else min(cur, pt.ratio)
            out.append(cur)
        return out

    def csv_rows(self):
        for pt in self.points:
            yield (
                pt.n,
                "-inf" if pt.log2r is None else pt.log2r,
                pt.ratio.numerator,
                pt.ratio.denominator,
            )


def martingale_trace(p: Measure, q: Measure, xs: str, checkpoints=None, with_log: bool = True) -> MartingaleTrace:
    """Exact ratios over the prefixes of ``xs`` (all prefixes unless ``checkpoints`` given)."""
    check_bits(xs)
    keep = None if checkpoints is None else set(checkpoints)
    trace = MartingaleTrace()
    cp, cq = p.walk(xs), q.walk(xs)
    for n, (a, b) in enumerate(zip(cp, cq)):
        if keep is not None and n not in keep:
            continue
        r = b.mass / a.mass if a.mass else ZERO
        trace.points.append(TracePoint(n, r, log2_fixed(r) if with_log else None))
    return trace


# ---------------------------------------------------------------------------
# codelength statistics


def independence_stat(pm: ProductMeasure, g: RateFunction, x: str, y: str) -> int:
    """``|pair code| - |code of x under P_X| - |code of y under P_Y|`` in bits."""
    gc = coder.GridCoder(pm, g)
    if not gc.on_grid(x, y):
        raise coder.CodingError("not a grid cell")
    return len(gc.encode_pair(x, y)) - len(coder.encode(pm.marginal_x(), x)) - len(coder.encode(pm.marginal_y(), y))


def decomposition_stat(pm: ProductMeasure, g: RateFunction, x: str, y: str) -> int:
    """``|pair code| - |conditional code of x given y| - |code of y under P_Y|`` in bits."""
    gc = coder.GridCoder(pm, g)
    if not gc.on_grid(x, y):
        raise coder.CodingError("not a grid cell")
    return len(gc.encode_pair(x, y)) - len(coder.encode_cond(pm, g, x, y)) - len(coder.encode(pm.marginal_y(), y))


@dataclass(frozen=True)
class CodelengthPoint:
    n: int
    pair: int
    cond: int | None
    x_alone: int | None
    y_alone: int

    @property
    def decomposition(self) -> int:
        return self.pair - self.cond - self.y_alone

    @property
    def independence(self) -> int:
        return self.pair - self.x_alone - self.y_alone


def codelength_trace(
    pm: ProductMeasure,
    g: RateFunction,
    x: str,
    y: str,
    with_cond: bool = True,
    with_marginal_x: bool = True,
) -> list[CodelengthPoint]:
    """Codelengths of every grid cell ``(x[:n], y[:g(n)])`` along one path.

    One pass per code; the statistics of every prefix come out together.
    """
    nmax = len(x)
    if len(y) < g(nmax):
        raise coder.CodingError("y too short for the grid path")
    y = y[: g(nmax)]
    pair = coder.GridCoder(pm, g).codelengths(x, y)
    ylens = coder.codelengths(pm.marginal_y(), y)
    cond = coder.cond_codelengths(pm, g, x, y) if with_cond else None
    xlens = coder.codelengths(pm.marginal_x(), x) if with_marginal_x else None
    return [
        CodelengthPoint(
            n,
            pair[n],
            cond[n] if cond else None,
            xlens[n] if xlens else None,
            ylens[g(n)],
        )
        for n in range(nmax + 1)
    ]


def lsq_slope(xs, ys) -> float:
    """Least-squares slope; reporting only."""
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((a - mx) ** 2 for a in xs)
    if sxx == 0:
        return 0.0
    return sum((a - mx) * (b - my) for a, b in zip(xs, ys)) / sxx
