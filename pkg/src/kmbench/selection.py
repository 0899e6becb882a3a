"""MDL model selection over a finite model family and its consistency experiment."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .measures import ZERO, ModelFamily, check_bits, sample_prefix


def _argmax(weights: Sequence[Fraction]) -> int:
    best = 0
    for i, w in enumerate(weights):
        if w > weights[best]:
            best = i
    return best + 1


def mdl_select(fam: ModelFamily, x: str) -> int:
    """1-based index maximizing ``alpha(n) P_n(x)``; ties go to the smallest index."""
    check_bits(x)
    return _argmax([a * m.mass(x) for a, m in zip(fam.alpha, fam.members)])


def loo_beta(fam: ModelFamily, nstar: int) -> list[Fraction]:
    """Leave-one-out prior: ``alpha`` renormalized off ``nstar``, zero at ``nstar``."""
    _check_index(fam, nstar)
    rest = 1 - fam.alpha[nstar - 1]
    return [ZERO if i == nstar - 1 else a / rest for i, a in enumerate(fam.alpha)]


def _loo_from_masses(beta: Sequence[Fraction], masses: Sequence[Fraction], nstar: int) -> Fraction:
    den = masses[nstar - 1]
    if den == 0:
        raise ValueError("leave-one-out ratio undefined: P_nstar(x) = 0")
    return sum((b * m for b, m in zip(beta, masses)), ZERO) / den


def loo_ratio(fam: ModelFamily, nstar: int, x: str) -> Fraction:
    """``P^-(x) / P_nstar(x)`` with the leave-one-out mixture ``P^-``."""
    check_bits(x)
    beta = loo_beta(fam, nstar)
    return _loo_from_masses(beta, [m.mass(x) for m in fam.members], nstar)


def _check_index(fam: ModelFamily, nstar: int) -> None:
    if not 1 <= nstar <= len(fam):
        raise ValueError(f"model index {nstar} outside 1..{len(fam)}")


def geometric_checkpoints(length: int) -> list[int]:
    """10, 20, 50, 100, 200, 500, ... up to ``length``, always ending at ``length``."""
    out = []
    base = 10
    while base <= length:
        for f in (1, 2, 5):
            if f * base <= length:
                out.append(f * base)
        base *= 10
    if not out or out[-1] != length:
        out.append(length)
    return out


@dataclass(frozen=True)
class SelectionPoint:
    n: int
    selected: int
    loo_ratio: Fraction


def selection_trace(fam: ModelFamily, nstar: int, x: str, checkpoints: Iterable[int]) -> list[SelectionPoint]:
    """MDL choice and leave-one-out ratio at each checkpoint prefix of ``x``."""
    beta = loo_beta(fam, nstar)
    walks = [m.walk(x) for m in fam.members]
    out = []
    for n in checkpoints:
        masses = [w[n].mass for w in walks]
        sel = _argmax([a * m for a, m in zip(fam.alpha, masses)])
        out.append(SelectionPoint(n, sel, _loo_from_masses(beta, masses, nstar)))
    return out


def consistency_trial(fam: ModelFamily, nstar: int, length: int, seed: int, checkpoints=None) -> list[SelectionPoint]:
    _check_index(fam, nstar)
    cps = geometric_checkpoints(length) if checkpoints is None else list(checkpoints)
    x = sample_prefix(fam.members[nstar - 1], length, seed)
    return selection_trace(fam, nstar, x, cps)


def consistency_run(fam: ModelFamily, nstar: int, length: int, seeds: Iterable[int], checkpoints=None):
    """Seed -> selection trace, sampling each path from member ``nstar``."""
    return {s: consistency_trial(fam, nstar, length, s, checkpoints) for s in seeds}
