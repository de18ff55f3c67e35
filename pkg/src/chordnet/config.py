"""Run configuration: one serializable object per analysis run."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field, fields, replace
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

from chordnet.annotations import MODES, ColumnMapping, PeriodMap
from chordnet.errors import ConfigError

CONFIG_ENV = "CHORDNET_CONFIG"


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("chordnet") / "data" / name))


@dataclass(frozen=True)
class RunConfig:
    input: str | None = None
    out: str = "out"
    columns: ColumnMapping = field(default_factory=ColumnMapping)
    periods: PeriodMap = field(default_factory=PeriodMap.default)
    mode: str | None = None
    period: str | None = None
    alpha: float = 0.85
    tol: float = 1e-12
    max_iter: int = 100_000
    seed: int = 0
    restarts: int = 100
    null_restarts: int = 10
    ensemble: int = 100
    null_method: str = "stub"
    null_weighted: bool = True
    weighted_degrees: bool = True
    include_changes: bool = True
    top_m: int = 30
    metric: str = "fidelity"
    profile_top: int = 5
    zipf_window: tuple[int, int] = (9, 300)
    degree_window: tuple[int, int] = (0, 30)
    pagerank_window: tuple[int, int] = (0, 200)
    n_jobs: int = 1

    def __post_init__(self):
        if self.mode is not None and self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, not {self.mode!r}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.restarts < 1 or self.null_restarts < 1:
            raise ConfigError("restart counts must be at least 1")
        if self.ensemble < 2:
            raise ConfigError("ensemble size must be at least 2")
        if self.metric not in ("fidelity", "similarity"):
            raise ConfigError(f"unknown metric {self.metric!r}")
        if self.period is not None and self.period not in self.periods.order:
            raise ConfigError(f"unknown period {self.period!r}; known: {list(self.periods.order)}")

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "RunConfig":
        data = dict(data)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        if "columns" in data:
            data["columns"] = ColumnMapping.from_dict(data["columns"])
        if "periods" in data:
            data["periods"] = PeriodMap.from_dict(data["periods"])
        for key in ("zipf_window", "degree_window", "pagerank_window"):
            if key in data:
                data[key] = tuple(data[key])
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
        if "input" in data and data["input"] and not Path(data["input"]).is_absolute():
            data["input"] = str((path.parent / data["input"]).resolve())
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, (ColumnMapping, PeriodMap)):
                value = value.to_dict()
            elif isinstance(value, tuple):
                value = list(value)
            out[f.name] = value
        return out

    def digest(self) -> str:
        """SHA-256 of the canonical JSON form, ignoring input and output locations."""
        data = self.to_dict()
        data.pop("out")
        data.pop("input")
        blob = json.dumps(data, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def override(self, **changes) -> "RunConfig":
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


def demo_config() -> RunConfig:
    """Configuration for the bundled synthetic mini-corpus."""
    cfg = RunConfig.from_file(bundled_path("mini_config.json"))
    return replace(cfg, input=str(bundled_path("mini_corpus.tsv")))


def resolve_config(path: str | None) -> RunConfig:
    path = path or os.environ.get(CONFIG_ENV)
    return RunConfig.from_file(path) if path else RunConfig()

