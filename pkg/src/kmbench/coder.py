"""Monotone interval codes for measures, grid cells and conditional chains.

Every string (or grid cell) is mapped to a half-open interval of [0, 1) whose
length is its probability; children split their parent left to right in
lexicographic order. A codeword ``p`` names the dyadic interval
``[0.p, 0.p + 2^-|p|)``. Encoding picks the shortest (then leftmost) dyadic
interval inside the target; decoding descends as long as the dyadic interval
stays inside one child, which makes every decoder monotone in its program.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterator, NamedTuple

from .measures import (
    ONE,
    ZERO,
    Measure,
    ProductCursor,
    ProductMeasure,
    RateFunction,
    check_bits,
)


class CodingError(ValueError):
    pass


class Interval(NamedTuple):
    lo: Fraction
    hi: Fraction

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi


UNIT = Interval(ZERO, ONE)


def dyadic_interval(p: str) -> Interval:
    check_bits(p)
    if not p:
        return UNIT
    lo = Fraction(int(p, 2), 1 << len(p))
    return Interval(lo, lo + Fraction(1, 1 << len(p)))


def _min_depth(length: Fraction) -> int:
    """Smallest k with 2^-k <= length."""
    num, den = length.numerator, length.denominator
    k = max(0, den.bit_length() - num.bit_length() - 1)
    while (num << k) < den:
        k += 1
    return k


def shortest_codeword(iv: Interval) -> str:
    """Shortest, then leftmost, ``p`` with ``I_p`` inside ``iv``."""
    if iv.length <= 0:
        raise CodingError("unencodable: empty interval")
    k = _min_depth(iv.length)
    while True:
        scale = 1 << k
        j = -((-iv.lo.numerator * scale) // iv.lo.denominator)  # ceil(lo * 2^k)
        if (j + 1) * iv.hi.denominator <= iv.hi.numerator * scale:
            return format(j, f"0{k}b") if k else ""
        k += 1


def codelength(iv: Interval) -> int:
    return len(shortest_codeword(iv))


# ---------------------------------------------------------------------------
# one-dimensional


def interval_trace(m: Measure, x: str) -> Iterator[Interval]:
    """Intervals of every prefix of ``x``, shortest first."""
    check_bits(x)
    c = m.cursor()
    lo = ZERO
    yield Interval(lo, lo + c.mass)
    for b in x:
        c0 = c.child("0")
        if b == "0":
            c = c0
        else:
            lo += c0.mass
            c = c.child("1")
        yield Interval(lo, lo + c.mass)


def interval_of(m: Measure, x: str) -> Interval:
    *_, iv = interval_trace(m, x)
    return iv


def encode(m: Measure, x: str) -> str:
    iv = interval_of(m, x)
    if iv.length == 0:
        raise CodingError(f"unencodable: zero-mass string {x!r}")
    return shortest_codeword(iv)


def codelengths(m: Measure, x: str) -> list[int]:
    """``|encode(m, x[:n])|`` for n = 0..|x|."""
    out = []
    for iv in interval_trace(m, x):
        if iv.length == 0:
            raise CodingError("unencodable: zero-mass prefix")
        out.append(codelength(iv))
    return out


def _descend(target: Interval, lo: Fraction, parent: Fraction, left: Fraction, forced_ok: bool):
    """Which child of ``[lo, lo + parent)`` holds ``target``: '0', '1' or None."""
    if left == parent or left == 0:
        # one child carries the whole interval
        if not forced_ok:
            return None
        return "0" if left == parent else "1"
    mid = lo + left
    if target.hi <= mid:
        return "0"
    if target.lo >= mid:
        return "1"
    return None


def decode(m: Measure, p: str, max_length: int | None = None) -> str:
    """Longest ``x`` with ``I_p`` inside ``V_x``.

    A step whose sibling has zero mass does not narrow the interval, so a
    deterministic continuation would never end. Such forced steps are taken
    only when ``max_length`` bounds the output; otherwise decoding stops there.
    """
    target = dyadic_interval(p)
    c = m.cursor()
    lo = ZERO
    while max_length is None or len(c.x) < max_length:
        if c.mass == 0:
            break
        c0 = c.child("0")
        b = _descend(target, lo, c.mass, c0.mass, max_length is not None)
        if b is None:
            break
        if b == "0":
            c = c0
        else:
            lo += c0.mass
            c = c.child("1")
    return c.x


# ---------------------------------------------------------------------------
# grid cells


class GridCoder:
    """Interval code over the grid ``{(x, y) : |y| = g(|x|)}``.

    The children of ``(x, y)`` are ``(xb, yz)`` with ``|z| = g(|x|+1) - g(|x|)``,
    laid out left to right in lexicographic order of ``(b, z)``.
    """

    def __init__(self, pm: ProductMeasure, g: RateFunction):
        self.pm = pm
        self.g = g

    def on_grid(self, x: str, y: str) -> bool:
        return len(y) == self.g(len(x))

    def _children(self, c: ProductCursor, root: bool = False):
        if root:
            # cells (empty, z) with |z| = g(0) partition the unit interval
            for z in itertools.product("01", repeat=self.g(0)):
                yield "", "".join(z)
            return
        i = len(c.x)
        d = self.g(i + 1) - self.g(i)
        for b in "01":
            for z in itertools.product("01", repeat=d):
                yield b, "".join(z)

    def cell_trace(self, x: str, y: str) -> Iterator[tuple[str, str, Interval]]:
        """Intervals of the grid cells along the path to ``(x, y)``."""
        check_bits(x)
        check_bits(y)
        if not self.on_grid(x, y):
            raise CodingError(f"not a grid cell: |x|={len(x)}, |y|={len(y)}, g={self.g(len(x))}")
        c = self.pm.grid_cursor()
        lo = ZERO
        wants = [("", y[: self.g(0)])] if self.g(0) else []
        wants += [(x[i], y[self.g(i) : self.g(i + 1)]) for i in range(len(x))]
        if not self.g(0):
            yield c.x, c.y, Interval(lo, lo + c.mass)
        for step, want in enumerate(wants):
            for b, z in self._children(c, root=step == 0 and self.g(0) > 0):
                child = c.child(b, z)
                if (b, z) == want:
                    c = child
                    break
                lo += child.mass
            yield c.x, c.y, Interval(lo, lo + c.mass)

    def interval(self, x: str, y: str) -> Interval:
        *_, (_, _, iv) = self.cell_trace(x, y)
        return iv

    def encode_pair(self, x: str, y: str) -> str:
        iv = self.interval(x, y)
        if iv.length == 0:
            raise CodingError("unencodable: zero-mass cell")
        return shortest_codeword(iv)

    def codelengths(self, x: str, y: str) -> list[int]:
        """Codelengths of every cell on the path, indexed by ``|x|``."""
        out = []
        for _, _, iv in self.cell_trace(x, y):
            if iv.length == 0:
                raise CodingError("unencodable: zero-mass cell")
            out.append(codelength(iv))
        return out

    def decode_pair(self, p: str, max_depth: int | None = None) -> tuple[str, str]:
        """Deepest grid cell whose interval contains ``I_p``."""
        target = dyadic_interval(p)
        c = self.pm.grid_cursor()
        lo = ZERO
        root = self.g(0) > 0
        while max_depth is None or len(c.x) < max_depth:
            if c.mass == 0:
                break
            start = lo
            nxt = None
            for b, z in self._children(c, root=root):
                child = c.child(b, z)
                w = child.mass
                if w and start <= target.lo and target.hi <= start + w:
                    nxt, lo = child, start
                    break
                start += w
            if nxt is None or (nxt.mass == c.mass and max_depth is None):
                break
            c = nxt
            root = False
        return c.x, c.y


def encode_pair(pm: ProductMeasure, g: RateFunction, x: str, y: str) -> str:
    return GridCoder(pm, g).encode_pair(x, y)


def decode_pair(pm: ProductMeasure, g: RateFunction, p: str) -> tuple[str, str]:
    return GridCoder(pm, g).decode_pair(p)


# ---------------------------------------------------------------------------
# conditional chain


def cond_next(pm: ProductMeasure, g: RateFunction, x: str, y: str) -> Fraction:
    """``P(x0 | y') / P(x | y')`` with ``y'`` the first ``g(|x|+1)`` bits of ``y``."""
    need = g(len(x) + 1)
    if len(y) < need:
        raise CodingError(f"insufficient condition: need {need} bits of y, have {len(y)}")
    yp = y[:need]
    den = pm.mass2(x, yp)
    if den == 0:
        raise CodingError("zero conditional")
    return pm.mass2(x + "0", yp) / den


class _CondWalker:
    """Walks x while keeping cells ``(x[:i], y[:g(i+1)])`` as product cursors."""

    def __init__(self, pm: ProductMeasure, g: RateFunction, y: str):
        self.g = g
        self.y = y
        self.c = pm.grid_cursor()
        self.weight = ONE  # sequential probability of the current x
        self.lo = ZERO

    def ready(self) -> bool:
        return len(self.y) >= self.g(len(self.c.x) + 1)

    def split(self) -> tuple[Fraction, object]:
        """Left child's weight and the cursor aligned with the next condition."""
        need = self.g(len(self.c.x) + 1)
        c = self.c
        if len(c.y) < need:
            c = c.child("", self.y[len(c.y):need])
            self.c = c
        if c.mass == 0:
            return None, c
        c0 = c.child("0", "")
        return self.weight * c0.mass / c.mass, c0

    def step(self, b: str, left: Fraction, c0) -> None:
        if b == "0":
            self.c = c0
            self.weight = left
        else:
            self.c = self.c.child("1", "")
            self.lo += left
            self.weight -= left

    @property
    def interval(self) -> Interval:
        return Interval(self.lo, self.lo + self.weight)


def cond_interval_trace(pm: ProductMeasure, g: RateFunction, x: str, y: str) -> Iterator[Interval]:
    """Conditional intervals of every prefix of ``x`` given ``y``."""
    check_bits(x)
    check_bits(y)
    if len(y) < g(len(x)):
        raise CodingError(f"insufficient condition: need {g(len(x))} bits of y, have {len(y)}")
    w = _CondWalker(pm, g, y)
    yield w.interval
    for b in x:
        left, c0 = w.split()
        if left is None:
            raise CodingError("zero conditional")
        w.step(b, left, c0)
        yield w.interval


def encode_cond(pm: ProductMeasure, g: RateFunction, x: str, y: str) -> str:
    *_, iv = cond_interval_trace(pm, g, x, y)
    if iv.length == 0:
        raise CodingError("unencodable: zero conditional probability")
    return shortest_codeword(iv)


def cond_codelengths(pm: ProductMeasure, g: RateFunction, x: str, y: str) -> list[int]:
    out = []
    for iv in cond_interval_trace(pm, g, x, y):
        if iv.length == 0:
            raise CodingError("unencodable: zero conditional probability")
        out.append(codelength(iv))
    return out


def decode_cond(pm: ProductMeasure, g: RateFunction, p: str, y: str, max_length: int | None = None) -> str:
    """Decode ``p`` reading only as much of ``y`` as the rate function asks for.

    Stops, without error, when the next step needs more condition bits than ``y``
    provides; extending either ``p`` or ``y`` can only extend the output.
    """
    check_bits(y)
    target = dyadic_interval(p)
    w = _CondWalker(pm, g, y)
    while (max_length is None or len(w.c.x) < max_length) and w.ready():
        if w.weight == 0:
            break
        left, c0 = w.split()
        if left is None:
            break
        b = _descend(target, w.lo, w.weight, left, max_length is not None)
        if b is None:
            break
        w.step(b, left, c0)
    return w.c.x
