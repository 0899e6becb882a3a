"""Experiment runners. Each takes an :class:`ExperimentConfig` and returns result rows.

Per-seed work lives in module-level functions that rebuild measures from their
spec strings, so trials can be shipped to worker processes.
"""
from __future__ import annotations

import functools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .. import bayes, coder, randomness, selection
from ..bitstream import read_bits
from ..grammar import parse_measure, parse_product, parse_rate, parse_rational
from ..measures import ModelFamily, binary_expansion, bernoulli, check_bits, dyadic_value, sample_pair, sample_prefix
from .config import ConfigError, ExperimentConfig

DEFAULT_BAYES = "bayes_uniform()"
UNIFORM = "bernoulli(1/2)"


@dataclass
class Table:
    """CSV payload: header plus rows, written by the orchestrator."""

    header: list
    rows: list
    suffix: str = ""  # appended to the output stem for secondary tables


@dataclass
class Result:
    tables: list
    message: str = ""
    bits: str | None = None  # bitstream payload for the encoders


# ---------------------------------------------------------------------------
# cached parsing inside workers

_measure = functools.lru_cache(maxsize=None)(parse_measure)
_product = functools.lru_cache(maxsize=None)(parse_product)
_rate = functools.lru_cache(maxsize=None)(parse_rate)


def _family(specs: tuple, alpha: tuple | None) -> ModelFamily:
    return ModelFamily([_measure(s) for s in specs], None if alpha is None else [parse_rational(a) for a in alpha])


def _map_seeds(fn, seeds, workers: int) -> list:
    if workers <= 1 or len(seeds) <= 1:
        return [fn(s) for s in seeds]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map preserves input order, so rows come back in seed order
        return list(pool.map(fn, seeds))


def _frac(r: Fraction):
    return r.numerator, r.denominator


def _log(r: Fraction):
    v = randomness.log2_fixed(r)
    return "-inf" if v is None else v


def _bits_arg(cfg: ExperimentConfig, what: str = "program") -> str:
    if cfg.program is not None:
        return check_bits(cfg.program)
    if cfg.input is not None:
        return read_bits(cfg.input)
    raise ConfigError(f"{cfg.kind}: give the {what} with --program or --input")


def _theta_bits(cfg: ExperimentConfig) -> str:
    cfg.need("theta_bits")
    return check_bits(cfg.theta_bits)


# ---------------------------------------------------------------------------
# trials (module level for pickling)


def _sample_trial(seed, *, measure, pair, length, length_y):
    if pair:
        x, y = sample_pair(_product(pair), length, length_y, seed)
        return [(seed, x, y)]
    return [(seed, sample_prefix(_measure(measure), length, seed))]


def _classify_trial(seed, *, p, q, truth, length, threshold, checkpoints):
    pm, qm = _measure(p), _measure(q)
    x = sample_prefix(pm if truth == "p" else qm, length, seed)
    trace = randomness.martingale_trace(pm, qm, x, checkpoints, with_log=True)
    rows = []
    for pt in trace.points:
        pmass, qmass = pm.mass(x[: pt.n]), qm.mass(x[: pt.n])
        v = randomness.verdict_for(pt.ratio, threshold, pmass, qmass)
        rows.append((seed, pt.n, v.name, "-inf" if pt.log2r is None else pt.log2r, *_frac(pt.ratio)))
    return rows


def _mdl_trial(seed, *, family, alpha, nstar, length, checkpoints):
    fam = _family(family, alpha)
    trace = selection.consistency_trial(fam, nstar, length, seed, checkpoints)
    return [(seed, pt.n, pt.selected, *_frac(pt.loo_ratio)) for pt in trace]


def _posterior_trial(seed, *, pair, theta_bits, length, k, checkpoints):
    pm = _product(pair)
    theta = dyadic_value(theta_bits)
    x = sample_prefix(bernoulli(theta), length, seed)
    trace = bayes.concentration_trace(pm, binary_expansion(theta, k), x, k, checkpoints)
    return [(seed, n, k, *_frac(m)) for n, m in trace]


def _estimate_trial(seed, *, pair, theta_bits, length, checkpoints):
    pm = _product(pair)
    std = bayes.estimate_trial(pm, theta_bits, length, seed, checkpoints, bayes.estimator_schedule)
    fast = bayes.estimate_trial(pm, theta_bits, length, seed, checkpoints, bayes.fast_schedule)
    return [r.csv_row() for r in std], [r.csv_row() for r in fast]


def _codelength_trial(seed, *, pair, g, length, checkpoints, which):
    pm, rate = _product(pair), _rate(g)
    x, y = sample_pair(pm, length, rate(length), seed)
    pts = randomness.codelength_trace(pm, rate, x, y, with_cond=which == "decompose", with_marginal_x=which == "independence")
    rows = []
    for n in checkpoints:
        pt = pts[n]
        if which == "decompose":
            rows.append((seed, n, pt.pair, pt.cond, pt.y_alone, pt.decomposition))
        else:
            rows.append((seed, n, pt.pair, pt.x_alone, pt.y_alone, pt.independence))
    return rows


def _flatten(chunks):
    return [row for chunk in chunks for row in chunk]


# ---------------------------------------------------------------------------
# runners


def run_sample(cfg):
    cfg.need("length")
    if cfg.pair_measure:
        ly = cfg.length_y if cfg.length_y is not None else _rate(cfg.g)(cfg.length)
        fn = functools.partial(_sample_trial, measure=None, pair=cfg.pair_measure, length=cfg.length, length_y=ly)
        return Result([Table(["seed", "x", "y"], _flatten(_map_seeds(fn, cfg.seed_list(), cfg.workers)))])
    cfg.need("measure")
    _measure(cfg.measure)
    fn = functools.partial(_sample_trial, measure=cfg.measure, pair=None, length=cfg.length, length_y=None)
    return Result([Table(["seed", "x"], _flatten(_map_seeds(fn, cfg.seed_list(), cfg.workers)))])


def run_encode(cfg):
    cfg.need("x")
    m = _measure(cfg.measure or UNIFORM)
    bits = coder.encode(m, check_bits(cfg.x))
    return Result([], bits, bits)


def run_decode(cfg):
    m = _measure(cfg.measure or UNIFORM)
    return Result([], coder.decode(m, _bits_arg(cfg), max_length=cfg.length))


def run_encode_pair(cfg):
    cfg.need("pair_measure", "x", "y")
    bits = coder.GridCoder(_product(cfg.pair_measure), _rate(cfg.g)).encode_pair(check_bits(cfg.x), check_bits(cfg.y))
    return Result([], bits, bits)


def run_decode_pair(cfg):
    cfg.need("pair_measure")
    x, y = coder.GridCoder(_product(cfg.pair_measure), _rate(cfg.g)).decode_pair(_bits_arg(cfg), max_depth=cfg.length)
    return Result([], f"{x} {y}")


def run_encode_cond(cfg):
    cfg.need("pair_measure", "x", "y")
    bits = coder.encode_cond(_product(cfg.pair_measure), _rate(cfg.g), check_bits(cfg.x), check_bits(cfg.y))
    return Result([], bits, bits)


def run_decode_cond(cfg):
    cfg.need("pair_measure", "y")
    x = coder.decode_cond(_product(cfg.pair_measure), _rate(cfg.g), _bits_arg(cfg), check_bits(cfg.y), max_length=cfg.length)
    return Result([], x)


def run_martingale(cfg):
    cfg.need("measure", "measure_q")
    p, q = _measure(cfg.measure), _measure(cfg.measure_q)
    if cfg.x is not None:
        x = check_bits(cfg.x)
    else:
        cfg.need("length")
        seeds = cfg.seed_list()
        if len(seeds) != 1:
            raise ConfigError("martingale traces a single sequence: give x or exactly one seed")
        x = sample_prefix(p if cfg.truth == "p" else q, cfg.length, seeds[0])
    cps = None if cfg.checkpoints in (None, "all") else [0] + cfg.checkpoint_list(len(x))
    trace = randomness.martingale_trace(p, q, x, cps)
    return Result([Table(["n", "log2r_fixed", "ratio_num", "ratio_den"], list(trace.csv_rows()))])


def run_classify(cfg):
    cfg.need("measure", "measure_q", "length")
    _measure(cfg.measure), _measure(cfg.measure_q)
    cps = [cfg.length] if cfg.checkpoints is None else cfg.checkpoint_list(cfg.length)
    fn = functools.partial(
        _classify_trial, p=cfg.measure, q=cfg.measure_q, truth=cfg.truth, length=cfg.length, threshold=cfg.threshold, checkpoints=cps
    )
    rows = _flatten(_map_seeds(fn, cfg.seed_list(), cfg.workers))
    return Result([Table(["seed", "n", "verdict", "log2r_fixed", "ratio_num", "ratio_den"], rows)])


def run_mdl(cfg):
    cfg.need("family", "nstar", "length")
    family = tuple(cfg.family)
    alpha = None if cfg.alpha is None else tuple(str(a) for a in cfg.alpha)
    fam = _family(family, alpha)
    if not 1 <= cfg.nstar <= len(fam):
        raise ConfigError(f"nstar must lie in 1..{len(fam)}")
    fn = functools.partial(_mdl_trial, family=family, alpha=alpha, nstar=cfg.nstar, length=cfg.length, checkpoints=cfg.checkpoint_list(cfg.length))
    rows = _flatten(_map_seeds(fn, cfg.seed_list(), cfg.workers))
    return Result([Table(["seed", "n", "selected", "loo_ratio_num", "loo_ratio_den"], rows)])


def run_posterior(cfg):
    cfg.need("length", "k")
    theta_bits = _theta_bits(cfg)
    pair = cfg.pair_measure or DEFAULT_BAYES
    _product(pair)
    cps = [0] + cfg.checkpoint_list(cfg.length) if cfg.checkpoints is None else cfg.checkpoint_list(cfg.length)
    fn = functools.partial(_posterior_trial, pair=pair, theta_bits=theta_bits, length=cfg.length, k=cfg.k, checkpoints=cps)
    rows = _flatten(_map_seeds(fn, cfg.seed_list(), cfg.workers))
    return Result([Table(["seed", "n", "k", "posterior_mass_num", "posterior_mass_den"], rows)])


ESTIMATE_HEADER = ["seed", "n", "k", "map_cylinder", "true_prefix", "hit", "posterior_mass_num", "posterior_mass_den"]


def run_estimate(cfg):
    cfg.need("length")
    theta_bits = _theta_bits(cfg)
    pair = cfg.pair_measure or DEFAULT_BAYES
    _product(pair)
    fn = functools.partial(_estimate_trial, pair=pair, theta_bits=theta_bits, length=cfg.length, checkpoints=cfg.checkpoint_list(cfg.length))
    results = _map_seeds(fn, cfg.seed_list(), cfg.workers)
    std = _flatten(r[0] for r in results)
    fast = _flatten(r[1] for r in results)
    return Result([Table(ESTIMATE_HEADER, std), Table(ESTIMATE_HEADER, fast, suffix=".fast")])


def _run_codelength(cfg, which):
    cfg.need("pair_measure", "length")
    _product(cfg.pair_measure), _rate(cfg.g)
    fn = functools.partial(
        _codelength_trial, pair=cfg.pair_measure, g=cfg.g, length=cfg.length, checkpoints=cfg.checkpoint_list(cfg.length, default="all"), which=which
    )
    rows = _flatten(_map_seeds(fn, cfg.seed_list(), cfg.workers))
    mid = "cond_len" if which == "decompose" else "x_len"
    return Result([Table(["seed", "n", "pair_len", mid, "y_len", "stat"], rows)])


def run_decompose(cfg):
    return _run_codelength(cfg, "decompose")


def run_independence(cfg):
    return _run_codelength(cfg, "independence")


RUNNERS = {
    "sample": run_sample,
    "encode": run_encode,
    "decode": run_decode,
    "encode-pair": run_encode_pair,
    "decode-pair": run_decode_pair,
    "encode-cond": run_encode_cond,
    "decode-cond": run_decode_cond,
    "martingale": run_martingale,
    "classify": run_classify,
    "mdl": run_mdl,
    "posterior": run_posterior,
    "estimate": run_estimate,
    "decompose": run_decompose,
    "independence": run_independence,
}
