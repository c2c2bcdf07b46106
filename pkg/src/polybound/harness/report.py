"""Experiment reports, log-log fits and instance dumps."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np
from scipy.stats import linregress

# covering density of the plane by unit discs; annotation only
THETA_2 = 2 * math.pi / math.sqrt(27)

PASS, FAIL, INDETERMINATE = "pass", "fail", "indeterminate"
DEGENERACY_LIMIT = 0.05


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [_jsonable(v) for v in items]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    if hasattr(x, "to_dict"):
        return _jsonable(x.to_dict())
    return x


@dataclass
class ExperimentReport:
    experiment: str
    config: dict[str, Any]
    trials: list[dict[str, Any]] = field(default_factory=list)
    summary: dict[str, Any] = field(default_factory=dict)
    verdict: str = INDETERMINATE
    wall_clock: float = 0.0

    @property
    def violations(self) -> list[dict[str, Any]]:
        return [t for t in self.trials if t.get("ok") is False]

    @property
    def skipped(self) -> list[dict[str, Any]]:
        return [t for t in self.trials if t.get("skipped")]

    def decide(self, extra_failures: Sequence[str] = ()) -> str:
        """Verdict: fail on any violation, indeterminate on too many degenerate trials."""
        failures = list(extra_failures)
        self.summary["failures"] = failures
        if self.violations or failures:
            self.verdict = FAIL
        elif self.trials and len(self.skipped) > DEGENERACY_LIMIT * len(self.trials):
            self.verdict = INDETERMINATE
        else:
            self.verdict = PASS
        return self.verdict

    def to_dict(self) -> dict[str, Any]:
        return _jsonable({"experiment": self.experiment, "config": self.config,
                          "trials": self.trials, "summary": self.summary,
                          "verdict": self.verdict, "wall_clock": round(self.wall_clock, 3)})

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def write(self, out_dir: str | Path, fmt: str = "json") -> Path:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        if fmt == "json":
            path = out / f"{self.experiment}.json"
            path.write_text(self.to_json())
        elif fmt == "csv":
            path = out / f"{self.experiment}.csv"
            path.write_text(trials_csv(self.trials))
        else:
            raise ValueError(f"unknown format {fmt!r}")
        return path


def trials_csv(trials: Sequence[dict[str, Any]]) -> str:
    keys: list[str] = []
    for t in trials:
        keys.extend(k for k in t if k not in keys)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=keys)
    w.writeheader()
    for t in trials:
        w.writerow({k: json.dumps(_jsonable(v)) if isinstance(v, (list, dict, tuple)) else v
                    for k, v in t.items()})
    return buf.getvalue()


@dataclass(frozen=True)
class LogLogFit:
    slope: float
    intercept: float
    stderr: float
    r2: float
    n: int


def fit_loglog(x: Sequence[float], y: Sequence[float], min_points: int = 5,
               min_decades: float = 1.0) -> LogLogFit:
    """Least-squares line through (log x, log y); needs enough points over a decade of x."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < min_points:
        raise ValueError(f"need at least {min_points} points, got {len(x)}")
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("log-log fit needs positive data")
    span = math.log10(x.max() / x.min())
    if span < min_decades:
        raise ValueError(f"x spans {span:.2f} decades, need {min_decades}")
    res = linregress(np.log(x), np.log(y))
    return LogLogFit(float(res.slope), float(res.intercept), float(res.stderr),
                     float(res.rvalue ** 2), len(x))


SCALING_COLUMNS = ("spacing", "delta_h", "f0", "g_k", "witnesses")


@dataclass
class ScalingSeries:
    """(spacing, delta_h, f0, g_k, witnesses) rows of a net-hull family."""

    d: int
    k: int
    rows: list[dict[str, Any]] = field(default_factory=list)

    def fit(self) -> LogLogFit:
        return fit_loglog([r["delta_h"] for r in self.rows], [r["g_k"] for r in self.rows])

    def normalized(self, key: str = "g_k") -> list[float]:
        """key * delta_h^((d-1)/2) per row."""
        e = (self.d - 1) / 2
        return [r[key] * r["delta_h"] ** e for r in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(SCALING_COLUMNS)
        for r in self.rows:
            w.writerow(["" if r.get(c) is None else r[c] for c in SCALING_COLUMNS])
        return buf.getvalue()

    def to_dict(self) -> dict[str, Any]:
        return {"d": self.d, "k": self.k, "rows": self.rows}


def dump_instance(out_dir: str | Path, name: str, polytope, extra: dict[str, Any]) -> Path:
    """Write a polytope file plus a JSON side-car for a violating trial."""
    from ..geometry import write_polytope

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{name}.poly").write_text(write_polytope(polytope))
    path = out / f"{name}.json"
    path.write_text(json.dumps(_jsonable(extra), indent=2))
    return path


def as_plain(obj) -> Any:
    if hasattr(obj, "__dataclass_fields__"):
        return _jsonable(asdict(obj))
    return _jsonable(obj)
