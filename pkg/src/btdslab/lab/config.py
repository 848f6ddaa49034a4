"""Sweep configuration: defaults, an optional YAML file, then command-line overrides."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import yaml

from btdslab.errors import ParseError
from btdslab.fintop import DEFAULT_TOPOLOGY_CAP
from btdslab.homotopy import DEFAULT_K_CAP
from btdslab.selection import DEFAULT_ORACLE_LEN

CONFIG_ENV = "BTDSLAB_CONFIG"

MAX_ORACLE_LEN = 6
MAX_WORKERS = 256


@dataclass(frozen=True)
class SweepConfig:
    min_points: int = 1
    max_points: int = 2
    interval_k: int = DEFAULT_K_CAP
    oracle_len: int = DEFAULT_ORACLE_LEN
    predicate: str | None = None
    workers: int = 1
    seed: int = 0
    out: str | None = None
    iso_dedup: bool = False
    anchor_reading: str = "per-set"
    target_openness: str = "strict"
    compare_readings: bool = True

    def validate(self) -> SweepConfig:
        if not 1 <= self.min_points <= self.max_points:
            raise ParseError("need 1 <= min-points <= max-points")
        if self.max_points > DEFAULT_TOPOLOGY_CAP:
            raise ParseError(f"max-points is capped at {DEFAULT_TOPOLOGY_CAP}")
        if not 1 <= self.interval_k <= DEFAULT_K_CAP:
            raise ParseError(f"interval-k must lie in 1..{DEFAULT_K_CAP}")
        if not 1 <= self.oracle_len <= MAX_ORACLE_LEN:
            raise ParseError(f"oracle-len must lie in 1..{MAX_ORACLE_LEN}")
        if not 1 <= self.workers <= MAX_WORKERS:
            raise ParseError(f"workers must lie in 1..{MAX_WORKERS}")
        if self.anchor_reading not in ("per-set", "union"):
            raise ParseError("anchor-reading must be per-set or union")
        if self.target_openness not in ("strict", "cover-only"):
            raise ParseError("target-openness must be strict or cover-only")
        return self

    def decision_options(self) -> dict:
        """The settings that change verdicts; recorded in checkpoints and reports."""
        return {
            "interval_k": self.interval_k,
            "oracle_len": self.oracle_len,
            "anchor_reading": self.anchor_reading,
            "target_openness": self.target_openness,
            "compare_readings": self.compare_readings,
        }

    def to_dict(self) -> dict:
        return asdict(self)


_KEYS = {f.name for f in fields(SweepConfig)}


def load_config(path: str | Path | None = None, **overrides) -> SweepConfig:
    """Defaults, then the YAML file (``path`` or ``$BTDSLAB_CONFIG``), then non-None overrides."""
    values: dict = {}
    if path is None:
        path = os.environ.get(CONFIG_ENV) or None
    if path is not None:
        try:
            data = yaml.safe_load(Path(path).read_text()) or {}
        except OSError as exc:
            raise ParseError(f"cannot read config {path}: {exc}") from exc
        except yaml.YAMLError as exc:
            raise ParseError(f"config {path}: invalid YAML: {exc}") from exc
        if not isinstance(data, dict):
            raise ParseError(f"config {path} must be a mapping")
        for k, v in data.items():
            k = k.replace("-", "_")
            if k not in _KEYS:
                raise ParseError(f"config {path}: unknown key {k!r}")
            values[k] = v
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return SweepConfig(**values).validate()
    except TypeError as exc:
        raise ParseError(str(exc)) from exc
