"""Posterior masses of parameter cylinders, posterior concentration, and the MAP-cylinder estimator."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .measures import (
    BayesBernoulli,
    ProductMeasure,
    all_strings,
    bernoulli,
    binary_expansion,
    check_bits,
    dyadic_value,
    sample_prefix,
)
from .selection import geometric_checkpoints


class ZeroEvidence(ValueError):
    pass


def posterior_mass(pm: ProductMeasure, y: str, x: str) -> Fraction:
    """Posterior mass of the parameter cylinder ``y`` after observing ``x``."""
    check_bits(y)
    evidence = pm.mass2(x, "")
    if evidence == 0:
        raise ZeroEvidence(f"zero evidence for x of length {len(x)}")
    return pm.mass2(x, y) / evidence


@dataclass(frozen=True)
class PosteriorSnapshot:
    n: int
    cylinder_masses: dict

    @property
    def total(self) -> Fraction:
        return sum(self.cylinder_masses.values(), Fraction(0))


def posterior_snapshot(pm: ProductMeasure, x: str, k: int) -> PosteriorSnapshot:
    return PosteriorSnapshot(len(x), {y: posterior_mass(pm, y, x) for y in all_strings(k)})


def concentration_trace(pm: ProductMeasure, ytrue: str, x_full: str, k: int, checkpoints=None) -> list[tuple[int, Fraction]]:
    """Posterior mass of the true depth-``k`` cylinder at each checkpoint prefix."""
    check_bits(ytrue)
    if len(ytrue) < k:
        raise ValueError("true parameter string shorter than k")
    cyl = ytrue[:k]
    cps = [0] + geometric_checkpoints(len(x_full)) if checkpoints is None else list(checkpoints)
    return [(n, posterior_mass(pm, cyl, x_full[:n])) for n in cps]


def _map_by_enumeration(pm: ProductMeasure, k: int, x: str) -> str:
    best, best_mass = None, None
    for y in all_strings(k):
        w = pm.mass2(x, y)
        if best_mass is None or w > best_mass:
            best, best_mass = y, w
    return best


def _map_bayes_uniform(pm: BayesBernoulli, k: int, x: str) -> str:
    # t^h (1-t)^(n-h) is strictly log-concave for n >= 1, so the mass of a
    # width-2^-k window is unimodal in its position and peaks at a window
    # start within one width left of the mode h/n: only the cylinder holding
    # the mode and its two neighbours can win.
    n, h = len(x), x.count("1")
    top = (1 << k) - 1
    c = min(top, (h << k) // n)
    best, best_mass = None, None
    for j in range(max(0, c - 1), min(top, c + 1) + 1):
        y = format(j, f"0{k}b")
        w = pm.mass2(x, y)
        if best_mass is None or w > best_mass:
            best, best_mass = y, w
    return best


def map_cylinder(pm: ProductMeasure, k: int, x: str) -> str:
    """Depth-``k`` parameter cylinder of largest posterior mass; ties go lexicographically first."""
    check_bits(x)
    if k == 0:
        return ""
    if isinstance(pm, BayesBernoulli) and pm.uniform and x:
        return _map_bayes_uniform(pm, k, x)
    return _map_by_enumeration(pm, k, x)


def estimator_schedule(n: int) -> int:
    """Parameter depth ``floor(log2(n) / 2)``; zero for n <= 1."""
    if n <= 1:
        return 0
    return (n.bit_length() - 1) // 2


def fast_schedule(n: int) -> int:
    """Parameter depth ``ceil(log2(n))``, the too-greedy negative control."""
    if n <= 1:
        return 0
    return (n - 1).bit_length()


@dataclass(frozen=True)
class EstimateRow:
    seed: int
    n: int
    k: int
    map_cylinder: str
    true_prefix: str
    hit: bool
    posterior_mass: Fraction

    def csv_row(self):
        return (
            self.seed,
            self.n,
            self.k,
            self.map_cylinder,
            self.true_prefix,
            int(self.hit),
            self.posterior_mass.numerator,
            self.posterior_mass.denominator,
        )


def estimate_trial(pm: ProductMeasure, theta_bits: str, length: int, seed: int, checkpoints=None, schedule=estimator_schedule) -> list[EstimateRow]:
    """Sample from Bernoulli(0.theta_bits) and score the MAP cylinder at each checkpoint."""
    theta = dyadic_value(theta_bits)
    x = sample_prefix(bernoulli(theta), length, seed)
    cps = geometric_checkpoints(length) if checkpoints is None else list(checkpoints)
    rows = []
    for n in cps:
        k = schedule(n)
        xn = x[:n]
        est = map_cylinder(pm, k, xn)
        truth = binary_expansion(theta, k)
        rows.append(EstimateRow(seed, n, k, est, truth, est == truth, posterior_mass(pm, est, xn)))
    return rows


def estimate_experiment(pm: ProductMeasure, theta_bits: str, length: int, seeds: Iterable[int], checkpoints=None) -> dict[str, list[EstimateRow]]:
    """Hit tables for the ``1/2 log n`` schedule and the ``log n`` control, in seed order."""
    out = {"standard": [], "fast": []}
    for s in seeds:
        out["standard"] += estimate_trial(pm, theta_bits, length, s, checkpoints, estimator_schedule)
        out["fast"] += estimate_trial(pm, theta_bits, length, s, checkpoints, fast_schedule)
    return out
