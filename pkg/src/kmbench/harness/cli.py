"""``kmbench`` command line.

Exit codes: 0 ok, 2 usage, 3 config file syntax, 4 invalid settings,
5 invalid measure spec, 6 output not writable, 7 coding or bitstream error.
"""
from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import os
import sys
from pathlib import Path

from ..bitstream import BitstreamError, write_bits
from ..coder import CodingError
from ..grammar import SpecError
from .config import ConfigError, ConfigParseError, build_config, load_config
from .experiments import RUNNERS, Result

EXIT_OK, EXIT_USAGE, EXIT_CONFIG_PARSE, EXIT_INVALID, EXIT_SPEC, EXIT_OUTPUT, EXIT_CODING = 0, 2, 3, 4, 5, 6, 7


class OutputError(OSError):
    pass


# flag name -> argparse kwargs
_FLAGS = {
    "measure": dict(help="measure spec, e.g. 'bernoulli(1/3)'"),
    "measure-q": dict(dest="measure_q", help="alternative measure Q"),
    "pair-measure": dict(dest="pair_measure", help="product measure spec, e.g. 'interleave(markov1(1/2; 3/4,1/4,1/2,1/2))'"),
    "family": dict(action="append", help="model family member spec (repeat per member)"),
    "alpha": dict(action="append", help="prior weight a/b (repeat per member; default uniform)"),
    "nstar": dict(type=int, help="1-based index of the true model"),
    "g": dict(help="rate function: identity, zero, const(c), scaled(a/b)"),
    "length": dict(type=int, help="sequence length n"),
    "length-y": dict(dest="length_y", type=int, help="length of y (default g(length))"),
    "checkpoints": dict(help="'all', 'geometric', or comma-separated lengths"),
    "threshold": dict(type=int, help="decision threshold t in bits (default 20)"),
    "truth": dict(choices=["p", "q"], help="measure the path is sampled from"),
    "x": dict(help="bit string x"),
    "y": dict(help="bit string y (the condition)"),
    "program": dict(help="codeword as a bit string"),
    "input": dict(help="codeword bitstream file"),
    "theta-bits": dict(dest="theta_bits", help="true parameter as dyadic bits, theta = 0.b1b2..."),
    "k": dict(type=int, help="parameter cylinder depth"),
}

_SUBCOMMANDS = {
    "sample": ("draw sample paths", ["measure", "pair-measure", "g", "length", "length-y"]),
    "encode": ("encode x under a measure (default uniform)", ["measure", "x"]),
    "decode": ("decode a codeword under a measure", ["measure", "program", "input", "length"]),
    "encode-pair": ("encode a grid cell (x, y)", ["pair-measure", "g", "x", "y"]),
    "decode-pair": ("decode a pair codeword", ["pair-measure", "g", "program", "input", "length"]),
    "encode-cond": ("encode x given condition y", ["pair-measure", "g", "x", "y"]),
    "decode-cond": ("decode x given condition y", ["pair-measure", "g", "program", "input", "y", "length"]),
    "martingale": ("likelihood ratio trace Q/P along one path", ["measure", "measure-q", "truth", "x", "length", "checkpoints"]),
    "classify": ("threshold verdicts over many seeds", ["measure", "measure-q", "truth", "length", "threshold", "checkpoints"]),
    "mdl": ("MDL selection consistency run", ["family", "alpha", "nstar", "length", "checkpoints"]),
    "posterior": ("posterior mass of the true parameter cylinder", ["pair-measure", "theta-bits", "length", "k", "checkpoints"]),
    "estimate": ("MAP cylinder estimator with fast-schedule control", ["pair-measure", "theta-bits", "length", "checkpoints"]),
    "decompose": ("pair minus conditional minus y codelengths", ["pair-measure", "g", "length", "checkpoints"]),
    "independence": ("pair minus x minus y codelengths", ["pair-measure", "g", "length", "checkpoints"]),
}


def _seed_list(text: str) -> list[int]:
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kmbench", description="Exact measures, interval codes and randomness experiments on binary strings.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
    for name, (summary, flags) in _SUBCOMMANDS.items():
        sp = sub.add_parser(name, help=summary, description=summary)
        common = sp.add_argument_group("common options")
        common.add_argument("--config", help="JSON config file; flags override its values")
        common.add_argument("--seed", type=int, help="single seed")
        common.add_argument("--seeds", type=_seed_list, help="comma-separated seed list")
        common.add_argument("--base-seed", dest="base_seed", type=int, help="first seed of a consecutive range")
        common.add_argument("--count", type=int, help="number of seeds in the range")
        common.add_argument("--out", dest="output", help="output file (CSV, or bitstream for encoders)")
        common.add_argument("--deterministic", action="store_true", help="omit the timestamp header line")
        common.add_argument("--workers", type=int, help="worker processes over seeds (default 1)")
        own = sp.add_argument_group(f"{name} options")
        for flag in flags:
            own.add_argument(f"--{flag}", **_FLAGS[flag])
    return parser


def _overrides(ns: argparse.Namespace) -> dict:
    out = {k: v for k, v in vars(ns).items() if k not in ("command", "config", "deterministic", "seed")}
    if ns.seed is not None:
        out["seeds"] = [ns.seed]
    cps = out.get("checkpoints")
    if isinstance(cps, str) and cps not in ("all", "geometric"):
        try:
            out["checkpoints"] = [int(v) for v in cps.split(",")]
        except ValueError:
            raise ConfigError(f"invalid checkpoints: {cps!r}") from None
    return out


def _check_writable(path: Path) -> None:
    parent = path.parent if str(path.parent) else Path(".")
    if path.is_dir() or not parent.is_dir() or not os.access(parent, os.W_OK) or (path.exists() and not os.access(path, os.W_OK)):
        raise OutputError(f"output path not writable: {path}")


def _table_path(out: Path, suffix: str) -> Path:
    if not suffix:
        return out
    return out.with_name(out.stem + suffix + (out.suffix or ".csv"))


def render_table(table, deterministic: bool) -> str:
    buf = io.StringIO()
    if not deterministic:
        stamp = _dt.datetime.now(_dt.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
        buf.write(f"# generated {stamp}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.header)
    w.writerows(table.rows)
    return buf.getvalue()


def _emit(result: Result, out: str | None, deterministic: bool) -> None:
    if result.bits is not None:
        if out:
            try:
                write_bits(out, result.bits)
            except OSError as e:
                raise OutputError(f"cannot write {out}: {e.strerror}") from None
        print(result.message)
        return
    if not result.tables:
        if out:
            try:
                Path(out).write_text(result.message + "\n")
            except OSError as e:
                raise OutputError(f"cannot write {out}: {e.strerror}") from None
        print(result.message)
        return
    for table in result.tables:
        text = render_table(table, deterministic)
        if out is None:
            if table.suffix:
                sys.stdout.write(f"# table {table.suffix.lstrip('.')}\n")
            sys.stdout.write(text)
            continue
        path = _table_path(Path(out), table.suffix)
        try:
            path.write_text(text)
        except OSError as e:
            raise OutputError(f"cannot write {path}: {e.strerror}") from None
        print(f"wrote {path} ({len(table.rows)} rows)", file=sys.stderr)


def run(argv=None) -> int:
    sys.set_int_max_str_digits(0)
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    try:
        file_values = load_config(ns.config) if ns.config else {}
        overrides = _overrides(ns)
        if overrides.get("seeds") is not None or overrides.get("base_seed") is not None:
            # a seed choice on the command line replaces whichever form the file used
            file_values = {k: v for k, v in file_values.items() if k not in ("seeds", "base_seed", "count")}
        cfg = build_config(ns.command, file_values, overrides)
        if cfg.output:
            for table_suffix in ("", ".fast") if ns.command == "estimate" else ("",):
                _check_writable(_table_path(Path(cfg.output), table_suffix))
        result = RUNNERS[ns.command](cfg)
        _emit(result, cfg.output, ns.deterministic)
    except ConfigParseError as e:
        return _fail(EXIT_CONFIG_PARSE, e)
    except SpecError as e:
        return _fail(EXIT_SPEC, e)
    except OutputError as e:
        return _fail(EXIT_OUTPUT, e)
    except (CodingError, BitstreamError) as e:
        return _fail(EXIT_CODING, e)
    except (ConfigError, ValueError, TypeError) as e:
        return _fail(EXIT_INVALID, e)
    except OSError as e:
        return _fail(EXIT_INVALID, f"{e.filename}: {e.strerror}")
    return EXIT_OK


def _fail(code: int, err) -> int:
    print(f"kmbench: error: {err}", file=sys.stderr)
    return code


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
