"""Text syntax for measures and rate functions, as used in config files and CLI flags.

Measures::

    bernoulli(1/3)
    markov1(1/2; 3/4,1/4,1/2,1/2)          p1; p00,p01,p10,p11
    mixture([bernoulli(1/4), bernoulli(3/4)]; [1/2, 1/2])
    atoms([0: 1/4, 1/2: 3/4])              finitely many dyadic points
    interleave(markov1(...))               product measure
    product(bernoulli(1/2), bernoulli(1/3))
    noisy_copy(1/2; 1/8)                   theta; flip probability
    bayes_uniform()
    bayes(atoms([...]))

Rationals are written ``a/b`` or ``a``. Rate functions: ``identity`` (or ``n``),
``zero`` (or ``0``), ``const(c)``, ``scaled(a/b)`` for ``floor(a n / b)``.
"""
from __future__ import annotations

import re
from fractions import Fraction

from . import measures as M


class SpecError(ValueError):
    def __init__(self, msg: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{msg} at column {pos + 1}: {text!r}")


_TOKEN = re.compile(r"(?:(?P<num>-?\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[()\[\];,:]))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = []
        pos = 0
        while True:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos >= len(text):
                break
            m = _TOKEN.match(text, pos)
            if not m:
                raise SpecError("unexpected character", text, pos)
            kind = m.lastgroup
            self.toks.append((kind, m.group(kind), pos))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, len(self.text))

    def take(self, kind=None, value=None):
        k, v, p = self.peek()
        if k is None:
            raise SpecError("unexpected end of input", self.text, p)
        if (kind and k != kind) or (value and v != value):
            raise SpecError(f"expected {value or kind}, found {v!r}", self.text, p)
        self.i += 1
        return v, p

    def at(self, value) -> bool:
        return self.peek()[1] == value

    def done(self):
        k, v, p = self.peek()
        if k is not None:
            raise SpecError(f"trailing input {v!r}", self.text, p)

    # -- grammar

    def rational(self) -> Fraction:
        v, _ = self.take("num")
        return Fraction(v)

    def rationals(self, n=None) -> list[Fraction]:
        out = [self.rational()]
        while self.at(","):
            self.take(value=",")
            out.append(self.rational())
        if n is not None and len(out) != n:
            raise SpecError(f"expected {n} numbers, found {len(out)}", self.text, self.peek()[2])
        return out

    def node(self):
        name, pos = self.take("name")
        self.take(value="(")
        try:
            obj = self._build(name, pos)
        except SpecError:
            raise
        except ValueError as e:
            raise SpecError(str(e), self.text, pos) from None
        self.take(value=")")
        return obj

    def _build(self, name, pos):
        if name == "bernoulli":
            return M.bernoulli(self.rational())
        if name == "markov1":
            p1 = self.rational()
            self.take(value=";")
            p00, p01, p10, p11 = self.rationals(4)
            return M.markov1(p1, [[p00, p01], [p10, p11]])
        if name == "mixture":
            self.take(value="[")
            members = [self.measure()]
            while self.at(","):
                self.take(value=",")
                members.append(self.measure())
            self.take(value="]")
            alpha = None
            if self.at(";"):
                self.take(value=";")
                self.take(value="[")
                alpha = self.rationals()
                self.take(value="]")
            return M.mixture(M.ModelFamily(members, alpha))
        if name == "atoms":
            self.take(value="[")
            atoms = {}
            while True:
                t = self.rational()
                self.take(value=":")
                atoms[t] = self.rational()
                if not self.at(","):
                    break
                self.take(value=",")
            self.take(value="]")
            return M.DyadicAtoms(atoms)
        if name == "interleave":
            return M.interleave(self.measure())
        if name == "product":
            a = self.measure()
            self.take(value=",")
            return M.independent_product(a, self.measure())
        if name == "noisy_copy":
            theta = self.rational()
            self.take(value=";")
            return M.noisy_copy(theta, self.rational())
        if name == "bayes_uniform":
            return M.bernoulli_bayes(M.bernoulli(Fraction(1, 2)))
        if name == "bayes":
            return M.bernoulli_bayes(self.measure())
        raise SpecError(f"unknown constructor {name!r}", self.text, pos)

    def measure(self) -> M.Measure:
        pos = self.peek()[2]
        obj = self.node()
        if not isinstance(obj, M.Measure):
            raise SpecError("expected a measure on single sequences, found a product measure", self.text, pos)
        return obj


def parse_any(text: str):
    p = _Parser(text)
    obj = p.node()
    p.done()
    return obj


def parse_measure(text: str) -> M.Measure:
    obj = parse_any(text)
    if not isinstance(obj, M.Measure):
        raise SpecError("expected a measure on single sequences", text, 0)
    return obj


def parse_product(text: str) -> M.ProductMeasure:
    obj = parse_any(text)
    if not isinstance(obj, M.ProductMeasure):
        raise SpecError("expected a product measure", text, 0)
    return obj


def parse_rational(text) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    p = _Parser(str(text))
    v = p.rational()
    p.done()
    return v


_RATE = re.compile(r"^\s*(identity|n|zero|0|const\((\d+)\)|scaled\((\d+(?:/\d+)?)\))\s*$")


def parse_rate(text: str) -> M.RateFunction:
    m = _RATE.match(str(text))
    if not m:
        raise SpecError("unknown rate function", str(text), 0)
    word = m.group(1)
    if word in ("identity", "n"):
        return M.RateFunction.identity()
    if word in ("zero", "0"):
        return M.RateFunction.zero()
    if m.group(2) is not None:
        return M.RateFunction.constant(int(m.group(2)))
    return M.RateFunction.scaled(Fraction(m.group(3)))
