"""Acceptance criteria 1-9.

Each test prints one ``ACCEPTANCE <n> PASS|FAIL`` line and then asserts. The
sampled experiments (3-6, 8) are run end to end through the command line from
JSON configs; criterion 9 re-runs those configs and compares the CSV bytes.

Run with ``pytest tests/test_acceptance.py -v``.
"""
import csv
import json
import math
import os
import time
from fractions import Fraction as F

import pytest

from kmbench import bayes as B
from kmbench import coder as C
from kmbench import measures as M
from kmbench import randomness as R
from kmbench.harness.cli import run
from kmbench.randomness import lsq_slope

from _oracles import neg_log2_bounds

MARKOV_SPEC = "markov1(1/2; 3/4,1/4,1/2,1/2)"
MARKOV = M.markov1(F(1, 2), [[F(3, 4), F(1, 4)], [F(1, 2), F(1, 2)]])
BERN13 = M.bernoulli(F(1, 3))
FAMILY3 = M.ModelFamily([M.bernoulli(F(1, 4)), M.bernoulli(F(1, 2)), M.bernoulli(F(3, 4))])
IDENTITY = M.RateFunction.identity()
WORKERS = os.cpu_count() or 1

CONFIGS = {
    "decompose": dict(
        kind="decompose", pair_measure=f"interleave({MARKOV_SPEC})", g="identity", length=2000, checkpoints="all", base_seed=1, count=20
    ),
    "independence": dict(
        kind="independence", pair_measure="noisy_copy(1/2; 1/8)", g="identity", length=2000, checkpoints=[2000], base_seed=1, count=20
    ),
    "classify_p": dict(kind="classify", measure="bernoulli(1/3)", measure_q="bernoulli(2/3)", truth="p", length=2000, threshold=20, base_seed=1, count=100),
    # roles swapped: the same paths from B(1/3), now named Q against P = B(2/3)
    "classify_swap": dict(kind="classify", measure="bernoulli(2/3)", measure_q="bernoulli(1/3)", truth="q", length=2000, threshold=20, base_seed=1, count=100),
    "classify_same": dict(kind="classify", measure="bernoulli(1/3)", measure_q="bernoulli(1/3)", truth="p", length=2000, threshold=20, base_seed=1, count=100),
    "mdl": dict(
        kind="mdl", family=["bernoulli(1/4)", "bernoulli(1/2)", "bernoulli(3/4)"], nstar=3, length=500, checkpoints="geometric", base_seed=1, count=100
    ),
    "posterior": dict(kind="posterior", pair_measure="bayes_uniform()", theta_bits="1001110001", k=4, length=4096, base_seed=1, count=50),
    "estimate": dict(kind="estimate", pair_measure="bayes_uniform()", theta_bits="1001110001", length=4096, checkpoints="geometric", base_seed=1, count=50),
}

_RUNS: dict = {}


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    return tmp_path_factory.mktemp("acceptance")


def _run_config(name, directory):
    cfg = dict(CONFIGS[name], output=str(directory / f"{name}.csv"), workers=WORKERS)
    path = directory / f"{name}.json"
    path.write_text(json.dumps(cfg, indent=2))
    t0 = time.perf_counter()
    code = run([cfg["kind"], "--config", str(path), "--deterministic"])
    elapsed = time.perf_counter() - t0
    assert code == 0, f"{name}: exit status {code}"
    return directory / f"{name}.csv", elapsed


def experiment(name, workdir):
    if name not in _RUNS:
        _RUNS[name] = _run_config(name, workdir)
    return _RUNS[name]


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return rows


def by_seed(rows):
    out = {}
    for r in rows:
        out.setdefault(int(r["seed"]), []).append(r)
    return out


@pytest.fixture
def report(capsys):
    def _report(number, ok, summary):
        with capsys.disabled():
            print(f"\nACCEPTANCE {number} {'PASS' if ok else 'FAIL'}: {summary}")
        return ok

    return _report


# ---------------------------------------------------------------------------


def test_criterion_1_coder_exhaustive(report):
    t0 = time.perf_counter()
    failures = []
    measures = {"bernoulli(1/3)": BERN13, MARKOV_SPEC: MARKOV, "mixture of 3": M.mixture(FAMILY3)}
    for name, m in measures.items():
        for n in range(13):
            kraft = F(0)
            for x in M.all_strings(n):
                p = C.encode(m, x)
                kraft += F(1, 1 << len(p))
                if not C.decode(m, p).startswith(x):
                    failures.append((name, x, "round trip"))
                lo, hi = neg_log2_bounds(m.mass(x))
                if not lo <= len(p) <= hi + 2:
                    failures.append((name, x, f"length {len(p)} outside [{lo}, {hi + 2}]"))
            if kraft > 1:
                failures.append((name, n, f"Kraft sum {kraft}"))
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 10
    report(1, ok, f"3 measures x all |x| <= 12: {len(failures)} violations, {elapsed:.1f}s (limit 10s)")
    assert not failures, failures[:5]
    assert elapsed < 10


def test_criterion_2_monotone_machines(report):
    # p <= p' is a chain of one-bit extensions, and prefix order is transitive,
    # so checking every one-bit extension covers every comparable pair.
    t0 = time.perf_counter()
    bad = []

    out = {p: C.decode(BERN13, p) for n in range(15) for p in M.all_strings(n)}
    for p, x in out.items():
        if len(p) < 14:
            for b in "01":
                if not out[p + b].startswith(x):
                    bad.append(("decode", p + b))

    uniform_grid = C.GridCoder(M.independent_product(M.bernoulli(F(1, 2)), M.bernoulli(F(1, 2))), IDENTITY)
    pairs = {p: uniform_grid.decode_pair(p) for n in range(11) for p in M.all_strings(n)}
    for p, (x, y) in pairs.items():
        if len(p) < 10:
            for b in "01":
                x2, y2 = pairs[p + b]
                if not (x2.startswith(x) and y2.startswith(y)):
                    bad.append(("decode_pair", p + b))

    pm = M.interleave(MARKOV)
    words = [w for n in range(9) for w in M.all_strings(n)]
    cond = {(p, y): C.decode_cond(pm, IDENTITY, p, y) for p in words for y in words}
    for (p, y), x in cond.items():
        for b in "01":
            if len(p) < 8 and not cond[(p + b, y)].startswith(x):
                bad.append(("decode_cond p", p + b, y))
            if len(y) < 8 and not cond[(p, y + b)].startswith(x):
                bad.append(("decode_cond y", p, y + b))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 60
    report(
        2,
        ok,
        f"decode |p|<=14, decode_pair |p|<=10, decode_cond |p|,|y|<=8 ({len(cond)} pairs): {len(bad)} violations, {elapsed:.1f}s (limit 60s)",
    )
    assert not bad, bad[:5]
    assert elapsed < 60


def test_criterion_3_decomposition(report, workdir):
    path, elapsed = experiment("decompose", workdir)
    seeds = by_seed(read_csv(path))
    good = 0
    worst = 0
    slopes = []
    for rows in seeds.values():
        ns = [int(r["n"]) for r in rows]
        stats = [int(r["stat"]) for r in rows]
        assert ns == list(range(1, 2001))
        slope = lsq_slope(ns, stats)
        worst = max(worst, max(abs(s) for s in stats))
        slopes.append(abs(slope))
        if max(abs(s) for s in stats) <= 16 and abs(slope) < 0.01:
            good += 1
    ok = len(seeds) == 20 and good >= 19 and elapsed < 120
    report(3, ok, f"{good}/20 seeds bounded (max |stat| {worst} bits, max |slope| {max(slopes):.2e}), {elapsed:.1f}s (limit 120s)")
    assert len(seeds) == 20 and good >= 19
    assert elapsed < 120


def test_criterion_4_independence(report, workdir):
    pm = M.independent_product(M.bernoulli(F(1, 2)), M.bernoulli(F(1, 2)))
    lo = hi = 0
    out_of_range = 0
    # every grid cell with n <= 8 is a prefix cell of some path to depth 8,
    # and one codelength trace yields the statistic of every cell on its path
    seen = set()
    for x in M.all_strings(8):
        for y in M.all_strings(8):
            pts = R.codelength_trace(pm, IDENTITY, x, y, with_cond=False)
            for n, pt in enumerate(pts):
                key = (x[:n], y[:n])
                if key in seen:
                    continue
                seen.add(key)
                s = pt.independence
                lo, hi = min(lo, s), max(hi, s)
                out_of_range += not -6 <= s <= 4
    # the trace agrees with the direct statistic
    for x, y in [("", ""), ("1", "0"), ("0110", "1011"), ("11111111", "00000000")]:
        assert R.independence_stat(pm, IDENTITY, x, y) == R.codelength_trace(pm, IDENTITY, x, y, with_cond=False)[-1].independence
    assert len(seen) == sum(4**n for n in range(9))

    path, _ = experiment("independence", workdir)
    rows = read_csv(path)
    finals = {int(r["seed"]): int(r["stat"]) for r in rows if int(r["n"]) == 2000}
    bound = -0.4 * 2000 + 50
    good = sum(s <= bound for s in finals.values())
    ok = out_of_range == 0 and len(finals) == 20 and good >= 18
    report(
        4,
        ok,
        f"uniform product n<=8: stat in [{lo}, {hi}] over {len(seen)} cells; noisy copy: {good}/20 seeds <= {bound:g} "
        f"(stats {min(finals.values())}..{max(finals.values())})",
    )
    assert out_of_range == 0
    assert len(finals) == 20 and good >= 18


def test_criterion_5_martingale_classification(report, workdir):
    verdicts = {}
    for name in ("classify_p", "classify_swap", "classify_same"):
        path, _ = experiment(name, workdir)
        rows = read_csv(path)
        assert len(rows) == 100 and all(int(r["n"]) == 2000 for r in rows)
        verdicts[name] = [r["verdict"] for r in rows]
    a = verdicts["classify_p"].count("P_NOT_Q")
    b = verdicts["classify_swap"].count("Q_NOT_P")
    c = verdicts["classify_same"].count("CONSISTENT_BOTH")
    ok = a == b == c == 100
    report(5, ok, f"P_NOT_Q {a}/100, swapped Q_NOT_P {b}/100, P=Q CONSISTENT_BOTH {c}/100")
    assert ok


def test_criterion_6_mdl_consistency(report, workdir):
    path, _ = experiment("mdl", workdir)
    seeds = by_seed(read_csv(path))
    assert len(seeds) == 100
    selected = sum(all(r["selected"] == "3" for r in rows if int(r["n"]) >= 100) for rows in seeds.values())
    threshold = F(1, 2**20)
    small = 0
    for rows in seeds.values():
        final = [r for r in rows if int(r["n"]) == 500]
        assert len(final) == 1
        small += F(int(final[0]["loo_ratio_num"]), int(final[0]["loo_ratio_den"])) < threshold
    ok = selected >= 95 and small >= 95
    report(6, ok, f"selected n*=3 at all n>=100 in {selected}/100 seeds; loo ratio < 2^-20 at n=500 in {small}/100")
    assert ok


def test_criterion_7_bayes_exactness(report):
    pm = M.bernoulli_bayes(M.bernoulli(F(1, 2)))
    bad_mass = bad_sum = 0
    checked = 0
    for n in range(11):
        for x in M.all_strings(n):
            h = x.count("1")
            if pm.mass2(x, "") != F(math.factorial(h) * math.factorial(n - h), math.factorial(n + 1)):
                bad_mass += 1
            for k in range(7):
                if sum((B.posterior_mass(pm, y, x) for y in M.all_strings(k)), F(0)) != 1:
                    bad_sum += 1
                checked += 1
    ok = bad_mass == 0 and bad_sum == 0
    report(7, ok, f"all |x| <= 10: {bad_mass} evidence mismatches, {bad_sum}/{checked} posterior sums != 1")
    assert ok


def test_criterion_8_posterior_consistency(report, workdir):
    post_path, t_post = experiment("posterior", workdir)
    est_path, t_est = experiment("estimate", workdir)
    elapsed = t_post + t_est

    post = by_seed(read_csv(post_path))
    concentrated = 0
    for rows in post.values():
        final = rows[-1]
        assert int(final["n"]) == 4096 and int(final["k"]) == 4
        concentrated += F(int(final["posterior_mass_num"]), int(final["posterior_mass_den"])) >= F(9, 10)

    std = by_seed(read_csv(est_path))
    fast = by_seed(read_csv(est_path.with_name(est_path.stem + ".fast.csv")))
    hits = fast_hits = 0
    for seed in std:
        a, b = std[seed][-1], fast[seed][-1]
        assert int(a["n"]) == int(b["n"]) == 4096
        assert int(a["k"]) == 6 and int(b["k"]) == 12
        hits += a["hit"] == "1"
        fast_hits += b["hit"] == "1"

    ok = len(post) == len(std) == 50 and concentrated >= 45 and hits >= 40 and fast_hits <= 10 and elapsed < 300
    report(
        8,
        ok,
        f"k=4 mass >= 0.9 in {concentrated}/50 (need 45); MAP k=6 hits {hits}/50 (need 40); "
        f"fast k=12 hits {fast_hits}/50 (need <= 10); {elapsed:.1f}s (limit 300s)",
    )
    assert len(post) == len(std) == 50
    assert concentrated >= 45
    assert hits >= 40
    assert fast_hits <= 10
    assert elapsed < 300


def test_criterion_9_determinism(report, workdir, tmp_path):
    differing = []
    for name in CONFIGS:
        first, _ = experiment(name, workdir)
        again, _ = _run_config(name, tmp_path)
        if first.read_bytes() != again.read_bytes():
            differing.append(name)
        if name == "estimate":
            fa = first.with_name(first.stem + ".fast.csv")
            fb = again.with_name(again.stem + ".fast.csv")
            if fa.read_bytes() != fb.read_bytes():
                differing.append(name + ".fast")
    ok = not differing
    report(9, ok, f"{len(CONFIGS)} configs re-run under --deterministic: {'all byte-identical' if ok else 'differ: ' + ', '.join(differing)}")
    assert ok
