"""Flat ``key = value`` experiment configuration.

Blank lines and ``#`` comments are ignored; list values are comma separated.
Recognised keys (all optional)::

    signal      = synthetic            # or a .pgm / .csv path
    row         = 100                  # image row for PGM input
    n           = 256                  # synthetic sample count
    frequencies = 1,2,4,8,16,32,64     # synthetic, cycles per unit length
    amplitudes  = 1,0.5,...            # synthetic, default 1/f
    m           = 1024                 # network width
    activations = tanh,relu,sinc,gaussian
    strategies  = vary_q,vary_sigma
    k_values    = 8,16,32,64,128
    sigma       = 1024                 # fixed scale for vary_q (default m)
    q_fixed     = 100                  # fixed iterations for vary_sigma
    engine      = mask                 # mask | train
    max_train_iters = 100000
    seed        = 0
    workers     = 1
"""

from __future__ import annotations

import configparser
from dataclasses import asdict, dataclass, fields
from typing import Optional, Tuple

from .activations import KINDS
from .experiments.signals import DEFAULT_FREQUENCIES, SignalSource, SynthSpec

STRATEGIES = ("vary_q", "vary_sigma")
ENGINES = ("mask", "train")


class ConfigError(ValueError):
    pass


def _floats(v) -> Tuple[float, ...]:
    return tuple(float(t) for t in str(v).split(",") if t.strip())


def _ints(v) -> Tuple[int, ...]:
    return tuple(int(t) for t in str(v).split(",") if t.strip())


def _names(v) -> Tuple[str, ...]:
    return tuple(t.strip().lower() for t in str(v).split(",") if t.strip())


@dataclass(frozen=True)
class ExperimentConfig:
    signal: str = "synthetic"
    row: int = 100
    n: int = 256
    frequencies: Tuple[float, ...] = DEFAULT_FREQUENCIES
    amplitudes: Optional[Tuple[float, ...]] = None
    m: int = 1024
    activations: Tuple[str, ...] = ("tanh", "relu", "sinc", "gaussian")
    strategies: Tuple[str, ...] = STRATEGIES
    k_values: Tuple[int, ...] = (8, 16, 32, 64, 128)
    sigma: Optional[float] = None
    q_fixed: float = 100.0
    engine: str = "mask"
    max_train_iters: int = 100_000
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        bad = [a for a in self.activations if a not in KINDS or a == "impulse"]
        if bad:
            raise ConfigError(f"unsupported activations {bad}")
        bad = [s for s in self.strategies if s not in STRATEGIES]
        if bad:
            raise ConfigError(f"unknown strategies {bad}")
        if self.engine not in ENGINES:
            raise ConfigError(f"engine must be one of {ENGINES}")
        if self.m < 1 or self.n < 1:
            raise ConfigError("m and n must be positive")
        if not self.k_values or min(self.k_values) < 1:
            raise ConfigError("k_values must be positive integers")
        if self.amplitudes is not None and len(self.amplitudes) != len(self.frequencies):
            raise ConfigError("need one amplitude per frequency")

    @property
    def fixed_sigma(self) -> float:
        return float(self.m if self.sigma is None else self.sigma)

    def signal_source(self) -> SignalSource:
        synth = SynthSpec(self.frequencies, self.amplitudes, self.n)
        return SignalSource.from_string(self.signal, self.row, synth)

    def to_mapping(self) -> dict:
        d = asdict(self)
        d["sigma"] = self.fixed_sigma
        return d

    @classmethod
    def from_mapping(cls, raw: dict) -> "ExperimentConfig":
        conv = {
            "signal": str,
            "row": int,
            "n": int,
            "frequencies": _floats,
            "amplitudes": _floats,
            "m": int,
            "activations": _names,
            "strategies": _names,
            "k_values": _ints,
            "sigma": float,
            "q_fixed": float,
            "engine": lambda v: str(v).strip().lower(),
            "max_train_iters": int,
            "seed": int,
            "workers": int,
        }
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        kwargs = {}
        for key, val in raw.items():
            try:
                kwargs[key] = conv[key](val)
            except ValueError as exc:
                raise ConfigError(f"bad value for {key!r}: {val!r}") from exc
        return cls(**kwargs)


def read_config(path) -> ExperimentConfig:
    parser = configparser.ConfigParser(
        inline_comment_prefixes=("#",), interpolation=None, delimiters=("=",)
    )
    try:
        with open(path) as fh:
            parser.read_string("[run]\n" + fh.read())
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    return ExperimentConfig.from_mapping(dict(parser["run"]))
