"""Experiment configuration: JSON files overridden by CLI flags.

Schema (all keys optional unless the experiment needs them)::

    {
      "kind": "mdl",                       # must match the subcommand if present
      "measure": "bernoulli(1/3)",         # P, or the sampling measure
      "measure_q": "bernoulli(2/3)",       # Q for likelihood ratios
      "pair_measure": "interleave(...)",   # product measure
      "family": ["bernoulli(1/4)", ...],   # model family
      "alpha": ["1/3", ...],               # prior weights (default uniform)
      "nstar": 3,                          # 1-based true model index
      "g": "identity",                     # rate function
      "length": 500, "length_y": 500,
      "checkpoints": "geometric" | "all" | [10, 20, ...],
      "seeds": [1, 2, 3]  or  "base_seed": 1, "count": 100,
      "threshold": 20,
      "truth": "p" | "q",                  # which measure classify samples from
      "x": "0110", "y": "01", "program": "11", "input": "code.bin",
      "theta_bits": "1001110001", "k": 4,
      "output": "out.csv",
      "workers": 1
    }
"""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any


class ConfigParseError(ValueError):
    """Malformed config file; carries line and column."""

    def __init__(self, path, line: int, col: int, msg: str):
        self.line, self.col = line, col
        super().__init__(f"{path}:{line}:{col}: {msg}")


class ConfigError(ValueError):
    """Well-formed config with invalid content."""


@dataclass
class ExperimentConfig:
    kind: str = ""
    measure: str | None = None
    measure_q: str | None = None
    pair_measure: str | None = None
    family: list | None = None
    alpha: list | None = None
    nstar: int | None = None
    g: str = "identity"
    length: int | None = None
    length_y: int | None = None
    checkpoints: Any = None
    seeds: list | None = None
    base_seed: int | None = None
    count: int | None = None
    threshold: int = 20
    truth: str = "p"
    x: str | None = None
    y: str | None = None
    program: str | None = None
    input: str | None = None
    theta_bits: str | None = None
    k: int | None = None
    output: str | None = None
    workers: int = 1
    extras: dict = field(default_factory=dict)

    def seed_list(self) -> list[int]:
        if self.seeds is not None:
            seeds = [int(s) for s in self.seeds]
        elif self.base_seed is not None and self.count is not None:
            seeds = list(range(int(self.base_seed), int(self.base_seed) + int(self.count)))
        elif self.base_seed is not None:
            seeds = [int(self.base_seed)]
        else:
            raise ConfigError("no seeds given (use seeds, or base_seed with count)")
        if not seeds:
            raise ConfigError("seed list is empty")
        if len(set(seeds)) != len(seeds):
            raise ConfigError("seeds must be distinct")
        return seeds

    def checkpoint_list(self, length: int, default: str = "geometric") -> list[int]:
        from ..selection import geometric_checkpoints

        spec = self.checkpoints if self.checkpoints is not None else default
        if spec == "geometric":
            return geometric_checkpoints(length)
        if spec == "all":
            return list(range(1, length + 1))
        if isinstance(spec, list) and all(isinstance(v, int) for v in spec):
            if any(not 0 <= v <= length for v in spec):
                raise ConfigError(f"checkpoints must lie in 0..{length}")
            return sorted(set(spec))
        raise ConfigError(f"invalid checkpoints: {spec!r}")

    def need(self, *names: str) -> None:
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise ConfigError(f"{self.kind}: missing required setting(s): {', '.join(missing)}")

    def validate(self) -> None:
        for name in ("length", "length_y"):
            v = getattr(self, name)
            if v is not None and (not isinstance(v, int) or v < 1):
                raise ConfigError(f"{name} must be a positive integer")
        if not isinstance(self.threshold, int) or self.threshold < 1:
            raise ConfigError("threshold must be a positive integer")
        if self.truth not in ("p", "q"):
            raise ConfigError("truth must be 'p' or 'q'")
        if not isinstance(self.workers, int) or self.workers < 1:
            raise ConfigError("workers must be a positive integer")
        if self.seeds is not None and not self.seeds:
            raise ConfigError("seed list is empty")


_FIELDS = {f.name for f in dataclasses.fields(ExperimentConfig)} - {"extras"}


def load_config(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigParseError(path, e.lineno, e.colno, e.msg) from None
    if not isinstance(data, dict):
        raise ConfigParseError(path, 1, 1, "top level must be a JSON object")
    unknown = set(data) - _FIELDS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return data


def build_config(kind: str, file_values: dict, overrides: dict) -> ExperimentConfig:
    values = dict(file_values)
    if values.get("kind", kind) != kind:
        raise ConfigError(f"config is for {values['kind']!r}, not {kind!r}")
    values["kind"] = kind
    values.update({k: v for k, v in overrides.items() if v is not None})
    cfg = ExperimentConfig(**values)
    cfg.validate()
    return cfg
