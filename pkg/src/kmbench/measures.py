"""Exactly computable probability measures on binary strings and on pairs of strings.

Strings are plain ``str`` values over ``"01"``; the empty string is the empty word.
All masses are :class:`fractions.Fraction`; no floating point is used anywhere in
mass evaluation.

Two evaluation routes exist for every measure:

* ``mass(x)`` / ``mass2(x, y)`` evaluate a single cylinder from scratch;
* ``cursor()`` / ``grid_cursor()`` walk a path of cylinders incrementally, which
  is what the coders and samplers use on long sequences.
"""
from __future__ import annotations

import itertools
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

ZERO = Fraction(0)
ONE = Fraction(1)

Matrix = tuple[tuple[Fraction, ...], ...]


# ---------------------------------------------------------------------------
# strings


def check_bits(x: str) -> str:
    if not isinstance(x, str) or any(c not in "01" for c in x):
        raise ValueError(f"not a binary string: {x!r}")
    return x


def is_prefix(a: str, b: str) -> bool:
    """``a`` is a prefix of ``b`` (reflexive)."""
    return b.startswith(a)


def all_strings(n: int) -> Iterable[str]:
    """All binary strings of length ``n`` in lexicographic order."""
    if n == 0:
        yield ""
        return
    for t in itertools.product("01", repeat=n):
        yield "".join(t)


def as_fraction(v) -> Fraction:
    if isinstance(v, float):
        raise TypeError("floats are not accepted; pass a Fraction, int or 'a/b' string")
    return Fraction(v)


def dyadic_value(bits: str) -> Fraction:
    """The dyadic rational ``0.bits``."""
    check_bits(bits)
    if not bits:
        return ZERO
    return Fraction(int(bits, 2), 1 << len(bits))


def binary_expansion(theta: Fraction, k: int) -> str:
    """First ``k`` bits of the binary expansion of ``theta`` in [0, 1].

    Dyadic values use the terminating expansion; 1 maps to all ones.
    """
    theta = as_fraction(theta)
    if not 0 <= theta <= 1:
        raise ValueError("theta must lie in [0, 1]")
    if theta == 1:
        return "1" * k
    c = (theta.numerator << k) // theta.denominator
    return format(c, f"0{k}b") if k else ""


# ---------------------------------------------------------------------------
# one-dimensional measures


class Cursor(ABC):
    """A position in the binary tree together with its cylinder mass."""

    __slots__ = ()

    x: str

    @property
    @abstractmethod
    def mass(self) -> Fraction: ...

    @abstractmethod
    def child(self, b: str) -> "Cursor": ...


class _MassCursor(Cursor):
    __slots__ = ("measure", "x", "__dict__")

    def __init__(self, measure: "Measure", x: str):
        self.measure = measure
        self.x = x

    @cached_property
    def mass(self) -> Fraction:
        return self.measure.mass(self.x)

    def child(self, b: str) -> Cursor:
        return _MassCursor(self.measure, self.x + b)


class Measure(ABC):
    """A probability measure on infinite binary sequences, given on cylinders."""

    @abstractmethod
    def mass(self, x: str) -> Fraction:
        """Mass of the cylinder of all sequences extending ``x``."""

    def cursor(self) -> Cursor:
        return _MassCursor(self, "")

    def walk(self, x: str) -> list[Cursor]:
        """Cursors for every prefix of ``x`` (length ``len(x) + 1``)."""
        c = self.cursor()
        out = [c]
        for b in x:
            c = c.child(b)
            out.append(c)
        return out


def _vecmat(v: Sequence[Fraction], m: Matrix) -> tuple[Fraction, ...]:
    n = len(m[0])
    out = [ZERO] * n
    for i, vi in enumerate(v):
        if vi:
            row = m[i]
            for j in range(n):
                if row[j]:
                    out[j] += vi * row[j]
    return tuple(out)


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    return tuple(_vecmat(row, b) for row in a)


def _matadd(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(p + q for p, q in zip(ra, rb)) for ra, rb in zip(a, b))


class _ForwardCursor(Cursor):
    __slots__ = ("fsm", "x", "vec", "_mass")

    def __init__(self, fsm: "FiniteStateMeasure", x: str, vec):
        self.fsm = fsm
        self.x = x
        self.vec = vec
        self._mass = None

    @property
    def mass(self) -> Fraction:
        if self._mass is None:
            self._mass = self.fsm.vec_mass(self.vec)
        return self._mass

    def child(self, b: str) -> Cursor:
        return _ForwardCursor(self.fsm, self.x + b, self.fsm.step_vec(self.vec, b))


def _prime_factors(n: int) -> tuple[int, ...]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return tuple(out)


def _coprime_fraction(num: int, den: int) -> Fraction:
    """Fraction from a pair already in lowest terms, skipping the big-integer gcd."""
    f = object.__new__(Fraction)
    f._numerator = num
    f._denominator = den
    return f


def _reduce_over(num: int, den: int, primes: tuple[int, ...]) -> Fraction:
    # every prime of den is in primes, so dividing those out leaves lowest terms
    if num == 0:
        return ZERO
    for p in primes:
        if p == 2:
            k = min((num & -num).bit_length(), (den & -den).bit_length()) - 1
            if k:
                num >>= k
                den >>= k
        else:
            while den % p == 0 and num % p == 0:
                num //= p
                den //= p
    return _coprime_fraction(num, den)


class FiniteStateMeasure(Measure):
    """A measure generated by a weighted automaton.

    ``mass(x) = init . T[x1] ... T[xn] . 1``. Additivity holds because the
    rows of ``T['0'] + T['1']`` sum to one and ``init`` sums to one.
    """

    def __init__(self, init: Sequence, t0: Sequence[Sequence], t1: Sequence[Sequence]):
        self.init = tuple(as_fraction(v) for v in init)
        self.trans = {
            "0": tuple(tuple(as_fraction(v) for v in row) for row in t0),
            "1": tuple(tuple(as_fraction(v) for v in row) for row in t1),
        }
        d = len(self.init)
        for b in "01":
            m = self.trans[b]
            if len(m) != d or any(len(r) != d for r in m):
                raise ValueError("transition matrices must be square and match init")
        if sum(self.init) != 1 or any(v < 0 for v in self.init):
            raise ValueError("initial weights must be nonnegative and sum to 1")
        for i in range(d):
            r0, r1 = self.trans["0"][i], self.trans["1"][i]
            if any(v < 0 for v in r0 + r1) or sum(r0) + sum(r1) != 1:
                raise ValueError(f"state {i}: outgoing weights must be nonnegative and sum to 1")

    @property
    def states(self) -> int:
        return len(self.init)

    @cached_property
    def trans_any(self) -> Matrix:
        return _matadd(self.trans["0"], self.trans["1"])

    # Forward vectors in hot loops are (integer numerators, common denominator)
    # pairs: one lcm up front instead of a gcd per entry per step.

    @cached_property
    def _integer_form(self):
        mats = {"0": self.trans["0"], "1": self.trans["1"], "*": self.trans_any}
        den = math.lcm(*(v.denominator for m in mats.values() for row in m for v in row))
        d = self.states
        cols = {
            s: tuple(tuple((i, int(m[i][j] * den)) for i in range(d) if m[i][j]) for j in range(d))
            for s, m in mats.items()
        }
        iden = math.lcm(*(v.denominator for v in self.init))
        start = (tuple(int(v * iden) for v in self.init), iden)
        return den, cols, start, _prime_factors(den * iden)

    def start_vec(self):
        return self._integer_form[2]

    def step_vec(self, vec, symbol: str):
        """Advance a forward vector by ``'0'``, ``'1'`` or ``'*'`` (either symbol)."""
        nums, den = vec
        tden, cols, _, _ = self._integer_form
        return tuple(sum(nums[i] * w for i, w in col) for col in cols[symbol]), den * tden

    def vec_mass(self, vec) -> Fraction:
        nums, den = vec
        return _reduce_over(sum(nums), den, self._integer_form[3])

    def mass(self, x: str) -> Fraction:
        v = self.start_vec()
        for b in check_bits(x):
            v = self.step_vec(v, b)
        return self.vec_mass(v)

    def cursor(self) -> Cursor:
        return _ForwardCursor(self, "", self.start_vec())


class Bernoulli(FiniteStateMeasure):
    def __init__(self, theta):
        theta = as_fraction(theta)
        if not 0 <= theta <= 1:
            raise ValueError(f"bernoulli parameter out of range: {theta}")
        self.theta = theta
        super().__init__([ONE], [[1 - theta]], [[theta]])

    def mass(self, x: str) -> Fraction:
        check_bits(x)
        k = x.count("1")
        return self.theta**k * (1 - self.theta) ** (len(x) - k)

    def __repr__(self):
        return f"bernoulli({self.theta})"


class Markov1(FiniteStateMeasure):
    """First-order Markov chain with ``P(z1 = 1) = p1`` and transitions ``p[a][b]``.

    States: 0 = start, 1 = last symbol was 0, 2 = last symbol was 1.
    """

    def __init__(self, p1, p: Sequence[Sequence]):
        p1 = as_fraction(p1)
        p = [[as_fraction(v) for v in row] for row in p]
        if not 0 <= p1 <= 1:
            raise ValueError("initial probability out of range")
        if len(p) != 2 or any(len(r) != 2 for r in p):
            raise ValueError("transition matrix must be 2x2")
        for row in p:
            if any(v < 0 for v in row) or sum(row) != 1:
                raise ValueError(f"transition matrix is not row-stochastic: {p}")
        self.p1 = p1
        self.p = p
        t0 = [[0, 1 - p1, 0], [0, p[0][0], 0], [0, p[1][0], 0]]
        t1 = [[0, 0, p1], [0, 0, p[0][1]], [0, 0, p[1][1]]]
        super().__init__([1, 0, 0], t0, t1)

    def __repr__(self):
        flat = ",".join(str(v) for row in self.p for v in row)
        return f"markov1({self.p1}; {flat})"


class DyadicAtoms(Measure):
    """A prior concentrated on finitely many points of [0, 1].

    A point ``theta`` is identified with its binary expansion (terminating for
    dyadic values, all ones for 1), so ``mass(y)`` is the total weight of atoms
    whose expansion begins with ``y``.
    """

    def __init__(self, atoms: dict):
        self.atoms = {as_fraction(t): as_fraction(w) for t, w in atoms.items()}
        if not self.atoms:
            raise ValueError("at least one atom required")
        for t, w in self.atoms.items():
            if not 0 <= t <= 1:
                raise ValueError("atom outside [0, 1]")
            if w <= 0:
                raise ValueError("atom weights must be positive")
            if t != 1 and (t.denominator & (t.denominator - 1)):
                raise ValueError(f"atom {t} is not a dyadic rational")
        if sum(self.atoms.values()) != 1:
            raise ValueError("atom weights must sum to 1")

    def mass(self, x: str) -> Fraction:
        check_bits(x)
        return sum((w for t, w in self.atoms.items() if binary_expansion(t, len(x)) == x), ZERO)


class MixtureMeasure(Measure):
    def __init__(self, members: Sequence[Measure], weights: Sequence[Fraction]):
        self.members = list(members)
        self.weights = list(weights)

    def mass(self, x: str) -> Fraction:
        return sum((a * m.mass(x) for a, m in zip(self.weights, self.members)), ZERO)


@dataclass(frozen=True)
class ModelFamily:
    """Finitely many measures with positive prior weights summing to one."""

    members: tuple
    alpha: tuple

    def __init__(self, members: Sequence[Measure], alpha: Sequence | None = None):
        members = tuple(members)
        if len(members) < 2:
            raise ValueError("a model family needs at least two members")
        if alpha is None:
            alpha = [Fraction(1, len(members))] * len(members)
        alpha = tuple(as_fraction(a) for a in alpha)
        if len(alpha) != len(members):
            raise ValueError("one weight per member required")
        if any(a <= 0 for a in alpha):
            raise ValueError("prior weights must be positive")
        if sum(alpha) != 1:
            raise ValueError("prior weights must sum to 1")
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "alpha", alpha)

    def __len__(self):
        return len(self.members)


def bernoulli(theta) -> Bernoulli:
    return Bernoulli(theta)


def markov1(p1, p) -> Markov1:
    return Markov1(p1, p)


def mixture(fam: ModelFamily) -> Measure:
    if all(isinstance(m, FiniteStateMeasure) for m in fam.members):
        # block-diagonal automaton
        init: list[Fraction] = []
        blocks = []
        for a, m in zip(fam.alpha, fam.members):
            init.extend(a * v for v in m.init)
            blocks.append(m)
        d = len(init)
        mats = {}
        for b in "01":
            rows = []
            off = 0
            for m in blocks:
                for row in m.trans[b]:
                    rows.append([ZERO] * off + list(row) + [ZERO] * (d - off - m.states))
                off += m.states
            mats[b] = rows
        return FiniteStateMeasure(init, mats["0"], mats["1"])
    return MixtureMeasure(fam.members, fam.alpha)


# ---------------------------------------------------------------------------
# rate functions


class RateFunction:
    """A nondecreasing map from naturals to naturals (zero allowed)."""

    def __init__(self, fn: Callable[[int], int], name: str = "custom", check_upto: int = 256):
        self.fn = fn
        self.name = name
        prev = 0
        for n in range(check_upto + 1):
            v = fn(n)
            if not isinstance(v, (int, np.integer)) or v < 0:
                raise ValueError(f"rate function must map to naturals; g({n}) = {v!r}")
            if v < prev:
                raise ValueError(f"rate function is not monotone at n={n}")
            prev = v

    def __call__(self, n: int) -> int:
        return int(self.fn(n))

    def __repr__(self):
        return self.name

    @classmethod
    def identity(cls) -> "RateFunction":
        return cls(lambda n: n, "identity")

    @classmethod
    def zero(cls) -> "RateFunction":
        return cls(lambda n: 0, "zero")

    @classmethod
    def constant(cls, c: int) -> "RateFunction":
        return cls(lambda n: c, f"const({c})")

    @classmethod
    def scaled(cls, ratio) -> "RateFunction":
        r = as_fraction(ratio)
        if r < 0:
            raise ValueError("scale must be nonnegative")
        return cls(lambda n: (r.numerator * n) // r.denominator, f"scaled({r})")


# ---------------------------------------------------------------------------
# product measures


class ProductCursor(ABC):
    """A cell ``(x, y)`` of the product tree with its mass."""

    __slots__ = ()

    x: str
    y: str

    @property
    @abstractmethod
    def mass(self) -> Fraction: ...

    @abstractmethod
    def child(self, bx: str, by: str) -> "ProductCursor":
        """Cell ``(x + bx, y + by)``."""


class _Mass2Cursor(ProductCursor):
    __slots__ = ("pm", "x", "y", "__dict__")

    def __init__(self, pm: "ProductMeasure", x: str, y: str):
        self.pm, self.x, self.y = pm, x, y

    @cached_property
    def mass(self) -> Fraction:
        return self.pm.mass2(self.x, self.y)

    def child(self, bx: str, by: str) -> ProductCursor:
        return _Mass2Cursor(self.pm, self.x + bx, self.y + by)


class _Marginal(Measure):
    def __init__(self, pm: "ProductMeasure", axis: str):
        self.pm = pm
        self.axis = axis

    def mass(self, x: str) -> Fraction:
        return self.pm.mass2(x, "") if self.axis == "x" else self.pm.mass2("", x)


class ProductMeasure(ABC):
    """A probability measure on pairs of sequences, given on product cylinders."""

    @abstractmethod
    def mass2(self, x: str, y: str) -> Fraction: ...

    def marginal_x(self) -> Measure:
        return _Marginal(self, "x")

    def marginal_y(self) -> Measure:
        return _Marginal(self, "y")

    def grid_cursor(self) -> ProductCursor:
        return _Mass2Cursor(self, "", "")


class _IndependentCursor(ProductCursor):
    __slots__ = ("cx", "cy")

    def __init__(self, cx: Cursor, cy: Cursor):
        self.cx, self.cy = cx, cy

    @property
    def x(self):
        return self.cx.x

    @property
    def y(self):
        return self.cy.x

    @property
    def mass(self) -> Fraction:
        return self.cx.mass * self.cy.mass

    def child(self, bx: str, by: str) -> ProductCursor:
        cx, cy = self.cx, self.cy
        for b in bx:
            cx = cx.child(b)
        for b in by:
            cy = cy.child(b)
        return _IndependentCursor(cx, cy)


class IndependentProduct(ProductMeasure):
    def __init__(self, px: Measure, py: Measure):
        self.px, self.py = px, py

    def mass2(self, x: str, y: str) -> Fraction:
        return self.px.mass(x) * self.py.mass(y)

    def marginal_x(self) -> Measure:
        return self.px

    def marginal_y(self) -> Measure:
        return self.py

    def grid_cursor(self) -> ProductCursor:
        return _IndependentCursor(self.px.cursor(), self.py.cursor())


def _pattern_symbol(x: str, y: str, j: int) -> str:
    """Symbol at 1-based position ``j`` of the interleaved sequence, ``*`` if free."""
    if j % 2:
        i = (j + 1) // 2
        return x[i - 1] if i <= len(x) else "*"
    i = j // 2
    return y[i - 1] if i <= len(y) else "*"


# exhaustive sweeps revisit the same short cells many times
_MEMO_CELL_SIZE = 24
_MEMO_MAX = 1 << 17


class _InterleaveCursor(ProductCursor):
    """Forward vector over the fully known prefix of the interleaved pattern."""

    __slots__ = ("pm", "x", "y", "known", "vec", "_mass")

    def __init__(self, pm: "Interleave", x: str, y: str, known: int, vec):
        self.pm, self.x, self.y = pm, x, y
        self.known = known
        self.vec = vec
        self._mass = None

    @property
    def mass(self) -> Fraction:
        if self._mass is None:
            fsm = self.pm.base
            v = self.vec
            end = max(2 * len(self.x) - 1, 2 * len(self.y))
            for j in range(self.known + 1, end + 1):
                v = fsm.step_vec(v, _pattern_symbol(self.x, self.y, j))
            self._mass = fsm.vec_mass(v)
        return self._mass

    def child(self, bx: str, by: str) -> ProductCursor:
        x, y = self.x + bx, self.y + by
        memo = self.pm._short_cells
        short = len(x) + len(y) <= _MEMO_CELL_SIZE
        if short:
            hit = memo.get((x, y))
            if hit is not None:
                return hit
        known = min(2 * len(x), 2 * len(y) + 1)
        v = self.vec
        fsm = self.pm.base
        for j in range(self.known + 1, known + 1):
            v = fsm.step_vec(v, _pattern_symbol(x, y, j))
        c = _InterleaveCursor(self.pm, x, y, known, v)
        if short and len(memo) < _MEMO_MAX:
            memo[(x, y)] = c
        return c


class Interleave(ProductMeasure):
    """``mass2(x, y) = m(x1 y1 x2 y2 ...)`` with X on odd and Y on even coordinates.

    When ``|x|`` and ``|y|`` are unbalanced, the free coordinates inside the
    pattern are summed over. Finite-state bases do this with a forward pass;
    other bases enumerate the fill-ins.
    """

    def __init__(self, base: Measure):
        self.base = base
        self._short_cells: dict = {}

    def mass2(self, x: str, y: str) -> Fraction:
        check_bits(x)
        check_bits(y)
        end = max(2 * len(x) - 1, 2 * len(y))
        pattern = [_pattern_symbol(x, y, j) for j in range(1, end + 1)]
        if isinstance(self.base, FiniteStateMeasure):
            v = self.base.start_vec()
            for s in pattern:
                v = self.base.step_vec(v, s)
            return self.base.vec_mass(v)
        free = [i for i, s in enumerate(pattern) if s == "*"]
        total = ZERO
        for fill in itertools.product("01", repeat=len(free)):
            z = list(pattern)
            for i, b in zip(free, fill):
                z[i] = b
            total += self.base.mass("".join(z))
        return total

    def marginal_x(self) -> Measure:
        if isinstance(self.base, FiniteStateMeasure):
            any_ = self.base.trans_any
            t = {b: _matmul(self.base.trans[b], any_) for b in "01"}
            return FiniteStateMeasure(self.base.init, t["0"], t["1"])
        return _Marginal(self, "x")

    def marginal_y(self) -> Measure:
        if isinstance(self.base, FiniteStateMeasure):
            any_ = self.base.trans_any
            t = {b: _matmul(self.base.trans[b], any_) for b in "01"}
            return FiniteStateMeasure(_vecmat(self.base.init, any_), t["0"], t["1"])
        return _Marginal(self, "y")

    def grid_cursor(self) -> ProductCursor:
        if isinstance(self.base, FiniteStateMeasure):
            return _InterleaveCursor(self, "", "", 0, self.base.start_vec())
        return super().grid_cursor()


def interleave(m: Measure) -> Interleave:
    return Interleave(m)


def independent_product(px: Measure, py: Measure) -> IndependentProduct:
    return IndependentProduct(px, py)


def noisy_copy(theta, flip) -> Interleave:
    """X i.i.d. Bernoulli(theta); Y is X with each bit flipped independently w.p. ``flip``.

    Built as the interleaving of a three-state automaton (awaiting x, holding 0,
    holding 1), so all grid machinery applies.
    """
    theta, flip = as_fraction(theta), as_fraction(flip)
    if not (0 <= theta <= 1 and 0 <= flip <= 1):
        raise ValueError("noisy_copy parameters must lie in [0, 1]")
    t0 = [[0, 1 - theta, 0], [1 - flip, 0, 0], [flip, 0, 0]]
    t1 = [[0, 0, theta], [flip, 0, 0], [1 - flip, 0, 0]]
    return Interleave(FiniteStateMeasure([1, 0, 0], t0, t1))


# -- Bayesian Bernoulli model -------------------------------------------------


def _binomial_upper_tail(total: int, k: int, c: int, m: int) -> Fraction:
    """``P(Binomial(total, c / 2^m) >= k)`` as an exact rational."""
    d = 1 << m
    if k <= 0:
        return ONE
    if k > total:
        return ZERO
    if c == 0:
        return ZERO
    if c == d:
        return ONE
    e = d - c
    # T_j = C(total, j) c^j e^(total-j); accumulate the shorter tail
    if k > total // 2:
        t = c**total
        acc = t
        for j in range(total, k, -1):
            t = t * j * e // ((total - j + 1) * c)
            acc += t
        return Fraction(acc, d**total)
    t = e**total
    acc = t
    for j in range(0, k - 1):
        t = t * (total - j) * c // ((j + 1) * e)
        acc += t
    return 1 - Fraction(acc, d**total)


def beta_integer(k: int, n: int) -> Fraction:
    """``integral_0^1 t^k (1-t)^(n-k) dt = k! (n-k)! / (n+1)!``."""
    from math import comb

    return Fraction(1, (n + 1) * comb(n, k))


class BayesBernoulli(ProductMeasure):
    """Bernoulli likelihood integrated against a prior on the parameter bits.

    ``mass2(x, y) = integral over the parameter cylinder of y of
    theta^k (1 - theta)^(n - k)``, with ``n = |x|`` and ``k`` the number of ones.

    Supported priors: the uniform (Lebesgue) prior, given as ``bernoulli(1/2)``,
    and :class:`DyadicAtoms`. Anything else is rejected because the integral
    could not be kept rational.
    """

    def __init__(self, prior: Measure):
        if isinstance(prior, Bernoulli) and prior.theta == Fraction(1, 2):
            self.uniform = True
        elif isinstance(prior, DyadicAtoms):
            self.uniform = False
        else:
            raise ValueError("bernoulli_bayes supports only the uniform prior or finitely many dyadic atoms")
        self.prior = prior
        self._cache: dict = {}

    def likelihood_integral(self, n: int, k: int, y: str) -> Fraction:
        key = (n, k, y)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if self.uniform:
            if not y:
                val = beta_integer(k, n)
            else:
                m = len(y)
                c = int(y, 2)
                # integral_u^v t^k (1-t)^(n-k) dt = B(k+1, n-k+1) (I_v - I_u),
                # I_t the binomial tail P(Bin(n+1, t) >= k+1)
                val = beta_integer(k, n) * (
                    _binomial_upper_tail(n + 1, k + 1, c + 1, m) - _binomial_upper_tail(n + 1, k + 1, c, m)
                )
        else:
            val = sum(
                (w * t**k * (1 - t) ** (n - k) for t, w in self.prior.atoms.items() if binary_expansion(t, len(y)) == y),
                ZERO,
            )
        if len(self._cache) < 200_000:
            self._cache[key] = val
        return val

    def mass2(self, x: str, y: str) -> Fraction:
        check_bits(x)
        check_bits(y)
        return self.likelihood_integral(len(x), x.count("1"), y)

    def marginal_y(self) -> Measure:
        return self.prior


def bernoulli_bayes(prior: Measure) -> BayesBernoulli:
    return BayesBernoulli(prior)


def conditional(pm: ProductMeasure, x: str, y: str) -> Fraction:
    """``P(x | y) = mass2(x, y) / mass2('', y)``, zero when the denominator vanishes."""
    den = pm.mass2("", y)
    if den == 0:
        return ZERO
    return pm.mass2(x, y) / den


# ---------------------------------------------------------------------------
# sampling

#: Uniform variates are 64-bit integers from PCG64, read as dyadic rationals u / 2^64.
VARIATE_BITS = 64


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 seeded through :class:`numpy.random.SeedSequence`, one stream per trial."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed) & (2**64 - 1))))


def _draw_bit(rng: np.random.Generator, parent: Fraction, left: Fraction) -> str:
    # bit is 0 iff u / 2^64 < left / parent, compared exactly
    u = int(rng.bit_generator.random_raw())
    return "0" if u * parent < left * (1 << VARIATE_BITS) else "1"


def sample_prefix(m: Measure, n: int, seed: int) -> str:
    rng = make_rng(seed)
    c = m.cursor()
    for _ in range(n):
        if c.mass == 0:
            raise ValueError("sampled into a zero-mass cylinder")
        c0 = c.child("0")
        c = c0 if _draw_bit(rng, c.mass, c0.mass) == "0" else c.child("1")
    return c.x


def sample_pair(pm: ProductMeasure, nx: int, ny: int, seed: int) -> tuple[str, str]:
    """Joint sample, refining x and y alternately (x first) until both lengths are met."""
    rng = make_rng(seed)
    c = pm.grid_cursor()
    while len(c.x) < nx or len(c.y) < ny:
        for axis in "xy":
            if axis == "x" and len(c.x) >= nx or axis == "y" and len(c.y) >= ny:
                continue
            if c.mass == 0:
                raise ValueError("sampled into a zero-mass cylinder")
            c0 = c.child("0", "") if axis == "x" else c.child("", "0")
            if _draw_bit(rng, c.mass, c0.mass) == "0":
                c = c0
            else:
                c = c.child("1", "") if axis == "x" else c.child("", "1")
    return c.x, c.y
