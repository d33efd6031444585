"""Seeded Monte Carlo sweeps over (n, r) cells and constants estimation.

Every trial derives its own seed as derive_seed(master, n, r, trial), so
any cell can be reproduced in isolation and execution order is irrelevant.
Records are sorted by (n, r, trial) before emission and all emitted
numbers use a fixed 12-significant-digit rendering, which makes a re-run
with the same master seed and config byte-identical.  Per-stage wall
times are collected for diagnostics only and are never part of the
emitted data (they would break reproducibility).
"""

from __future__ import annotations

import dataclasses
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import metrics, stationary
from .branching import gw_generation_sizes_bulk, solve_constants
from .flags import FlagParams, find_flags
from .graph import generate, generate_simple
from .rng import check_seed, derive_seed
from .structure import scc_decompose

MEASUREMENTS = ("scc", "diam", "stationary", "flags", "gw")
FORMATS = ("csv", "json")

CSV_COLUMNS = (
    "n",
    "r",
    "seed",
    "trial",
    "scc_frac",
    "attractive",
    "period",
    "diam",
    "diam_d0",
    "norm_diam",
    "pi_max",
    "pi_min",
    "exp_max",
    "exp_min",
    "flag_count",
    "gw_extinct",
    "error",
)


class ConfigError(ValueError):
    """Invalid sweep configuration; the message names the offending field."""


@dataclass
class SweepConfig:
    r_values: list[int]
    n_values: list[int]
    trials: int
    master_seed: int
    measurements: list[str] = field(default_factory=lambda: ["scc"])
    fmt: str = "csv"
    out: str | None = None
    workers: int = 1
    simple: bool = False
    eps: float = 0.2
    tol: float = stationary.DEFAULT_POWER_TOL
    max_iter: int = stationary.DEFAULT_POWER_MAX_ITER
    flag_threshold: int | None = None
    flag_size_cap: int | None = None
    gw_depth: int = 30
    gw_trees: int = 256

    def validate(self) -> "SweepConfig":
        if not self.r_values:
            raise ConfigError("r_values must be nonempty")
        if not self.n_values:
            raise ConfigError("n_values must be nonempty")
        if any(r < 1 for r in self.r_values):
            raise ConfigError("r_values must all be >= 1")
        if any(n < 1 for n in self.n_values):
            raise ConfigError("n_values must all be >= 1")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        check_seed(self.master_seed)
        bad = [m for m in self.measurements if m not in MEASUREMENTS]
        if bad:
            raise ConfigError(f"unknown measurements {bad}; valid: {MEASUREMENTS}")
        if self.fmt not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.fmt!r}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        return self


@dataclass
class TrialRecord:
    n: int
    r: int
    seed: int
    trial: int
    scc_frac: float | None = None
    attractive: bool | None = None
    period: int | None = None
    diam: int | None = None
    diam_d0: int | None = None
    norm_diam: float | None = None
    pi_max: float | None = None
    pi_min: float | None = None
    exp_max: float | None = None
    exp_min: float | None = None
    flag_count: int | None = None
    gw_extinct: float | None = None
    error: str | None = None
    runtimes_ms: dict = field(default_factory=dict, compare=False)


def _fmt_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _round12(value):
    if isinstance(value, float):
        return float(f"{value:.12g}")
    return value


def _run_trial(cfg: SweepConfig, n: int, r: int, trial: int) -> TrialRecord:
    seed = derive_seed(cfg.master_seed, n, r, trial)
    rec = TrialRecord(n=n, r=r, seed=seed, trial=trial)
    stage = "generate"
    try:
        t0 = time.perf_counter()
        if cfg.simple:
            g = generate_simple(n, r, seed)
        else:
            g = generate(n, r, seed)
        rec.runtimes_ms[stage] = 1e3 * (time.perf_counter() - t0)

        dec = None
        needs_dec = {"scc", "diam", "stationary"} & set(cfg.measurements)
        if needs_dec:
            stage = "scc"
            t0 = time.perf_counter()
            dec = scc_decompose(g)
            rec.runtimes_ms[stage] = 1e3 * (time.perf_counter() - t0)
        if "scc" in cfg.measurements:
            rec.scc_frac = dec.d0_size / n
            rec.attractive = dec.attractive
            rec.period = dec.period
        if "diam" in cfg.measurements:
            stage = "diam"
            t0 = time.perf_counter()
            rep = metrics.diameter(g)
            rep_d0 = metrics.diameter_restricted(g, dec.d0_members())
            rec.diam = rep.value
            rec.diam_d0 = rep_d0.value
            rec.norm_diam = rep.normalized
            rec.runtimes_ms[stage] = 1e3 * (time.perf_counter() - t0)
        if "stationary" in cfg.measurements:
            stage = "stationary"
            t0 = time.perf_counter()
            profile = stationary.stationary_power(
                g, dec, tol=cfg.tol, max_iter=cfg.max_iter
            )
            rec.pi_max = profile.pi_max
            rec.pi_min = profile.pi_min
            rec.exp_max = profile.exp_max
            rec.exp_min = profile.exp_min
            rec.runtimes_ms[stage] = 1e3 * (time.perf_counter() - t0)
        if "flags" in cfg.measurements:
            stage = "flags"
            t0 = time.perf_counter()
            params = FlagParams.for_graph(
                n,
                r,
                epsilon=cfg.eps,
                threshold=cfg.flag_threshold,
                size_cap=cfg.flag_size_cap,
            )
            rec.flag_count = len(find_flags(g, params, dec))
            rec.runtimes_ms[stage] = 1e3 * (time.perf_counter() - t0)
        if "gw" in cfg.measurements:
            stage = "gw"
            t0 = time.perf_counter()
            sizes = gw_generation_sizes_bulk(
                r, cfg.gw_depth, cfg.gw_trees, derive_seed(seed, 0)
            )
            rec.gw_extinct = float(np.mean(sizes[:, -1] == 0))
            rec.runtimes_ms[stage] = 1e3 * (time.perf_counter() - t0)
    except Exception as exc:  # crash isolation: the sweep must go on
        rec.error = f"{stage}: {type(exc).__name__}: {exc}"
    return rec


def run_sweep(cfg: SweepConfig) -> list[TrialRecord]:
    """Run all (n, r, trial) cells; failures yield records with an error field."""
    cfg.validate()
    cells = [
        (n, r, t)
        for n in sorted(cfg.n_values)
        for r in sorted(cfg.r_values)
        for t in range(cfg.trials)
    ]
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            records = list(pool.map(lambda c: _run_trial(cfg, *c), cells))
    else:
        records = [_run_trial(cfg, *cell) for cell in cells]
    records.sort(key=lambda rec: (rec.n, rec.r, rec.trial))
    return records


# -- constants estimation ------------------------------------------------------

_METRIC_REFERENCES = {
    "scc_frac": lambda c: c.lambda_r,
    "norm_diam": lambda c: 1.0 + c.eta_r,
    "exp_max": lambda c: 1.0,
    "exp_min": lambda c: 1.0 + c.eta_r,
}


def estimate_constants(records: list[TrialRecord]) -> dict:
    """Per-r, per-n summary statistics with reference constants.

    For every r value: the mean/median/stderr of the giant fraction, the
    normalized diameter and the stationary exponents at each n, the
    limiting constants they approach, and the gap at the largest n.
    """
    if not records:
        raise ConfigError("estimate_constants needs a nonempty record set")
    summary: dict = {}
    r_values = sorted({rec.r for rec in records})
    for r in r_values:
        recs_r = [rec for rec in records if rec.r == r and rec.error is None]
        n_values = sorted({rec.n for rec in recs_r})
        if len(n_values) < 2:
            raise ConfigError(
                f"estimate_constants needs >= 2 distinct n for r={r}, "
                f"got {n_values}"
            )
        consts = solve_constants(r) if r >= 2 else None
        per_metric: dict = {}
        for name, ref_fn in _METRIC_REFERENCES.items():
            cells = []
            for n in n_values:
                vals = [
                    getattr(rec, name)
                    for rec in recs_r
                    if rec.n == n and getattr(rec, name) is not None
                ]
                if not vals:
                    continue
                arr = np.asarray(vals, dtype=float)
                cells.append(
                    {
                        "n": n,
                        "count": len(vals),
                        "mean": _round12(float(arr.mean())),
                        "median": _round12(float(np.median(arr))),
                        "stderr": _round12(
                            float(arr.std(ddof=1) / math.sqrt(len(vals)))
                            if len(vals) > 1
                            else 0.0
                        ),
                    }
                )
            if not cells:
                continue
            reference = ref_fn(consts) if consts is not None else None
            entry = {"cells": cells, "reference": _round12(reference)}
            if reference is not None:
                entry["gap_at_largest_n"] = _round12(
                    abs(cells[-1]["mean"] - reference)
                )
            per_metric[name] = entry
        if not per_metric:
            raise ConfigError(
                f"estimate_constants: no usable statistics for r={r} "
                "(every requested metric is empty)"
            )
        summary[r] = per_metric
    return summary


# -- emission -------------------------------------------------------------------


def records_to_csv(records: list[TrialRecord]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for rec in records:
        fields = [_fmt_value(getattr(rec, col)) for col in CSV_COLUMNS]
        lines.append(",".join(fields))
    return "\n".join(lines) + "\n"


def records_to_json(records: list[TrialRecord]) -> str:
    rows = []
    for rec in records:
        row = {}
        for col in CSV_COLUMNS:
            value = getattr(rec, col)
            if isinstance(value, bool):
                value = int(value)
            row[col] = _round12(value)
        rows.append(row)
    return json.dumps(rows, indent=1)


def emit(records: list[TrialRecord], fmt: str, path: str | None) -> None:
    """Write records to ``path`` (or stdout for None/"-") in csv or json."""
    if not records:
        raise ConfigError("emit needs a nonempty record list")
    if fmt not in FORMATS:
        raise ConfigError(f"format must be one of {FORMATS}, got {fmt!r}")
    text = records_to_csv(records) if fmt == "csv" else records_to_json(records)
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write records to {path!r}: {exc}") from exc


def _parse_cell(col: str, raw):
    if raw in ("", None):
        return None
    if col in ("n", "r", "trial", "period", "diam", "diam_d0", "flag_count", "seed"):
        return int(raw)
    if col == "attractive":
        return bool(int(raw))
    if col == "error":
        return str(raw) if raw else None
    return float(raw)


def parse_records(text: str, fmt: str) -> list[TrialRecord]:
    """Inverse of emit (modulo the 12-digit rounding applied on output)."""
    records = []
    if fmt == "csv":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        header = lines[0].split(",")
        if tuple(header) != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV header: {header}")
        for ln in lines[1:]:
            parts = ln.split(",")
            kwargs = {
                col: _parse_cell(col, parts[i]) for i, col in enumerate(CSV_COLUMNS)
            }
            records.append(TrialRecord(**kwargs))
    elif fmt == "json":
        for row in json.loads(text):
            kwargs = {col: _parse_cell(col, row.get(col)) for col in CSV_COLUMNS}
            records.append(TrialRecord(**kwargs))
    else:
        raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")
    return records


def records_equal(a: list[TrialRecord], b: list[TrialRecord]) -> bool:
    """Value equality ignoring the diagnostic runtime field."""
    if len(a) != len(b):
        return False
    skip = {"runtimes_ms"}
    for ra, rb in zip(a, b):
        for f in dataclasses.fields(TrialRecord):
            if f.name in skip:
                continue
            va, vb = getattr(ra, f.name), getattr(rb, f.name)
            if isinstance(va, float) and isinstance(vb, float):
                if not math.isclose(va, vb, rel_tol=1e-11, abs_tol=1e-300):
                    return False
            elif va != vb:
                return False
    return True


# -- flat key=value config files ------------------------------------------------

_LIST_KEYS = {"n", "r", "measurements"}
_INT_KEYS = {"trials", "seed", "workers", "max_iter", "flag_threshold",
             "flag_size_cap", "gw_depth", "gw_trees"}
_FLOAT_KEYS = {"eps", "tol"}
_BOOL_KEYS = {"simple"}
_STR_KEYS = {"format", "out"}


def parse_config_text(text: str) -> dict:
    """Flat ``key = value`` lines; lists comma-separated; # comments allowed."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected key = value: {raw!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key in _LIST_KEYS:
            items = [tok.strip() for tok in val.split(",") if tok.strip()]
            values[key] = (
                items if key == "measurements" else [int(tok) for tok in items]
            )
        elif key in _INT_KEYS:
            values[key] = int(val)
        elif key in _FLOAT_KEYS:
            values[key] = float(val)
        elif key in _BOOL_KEYS:
            values[key] = val.lower() in ("1", "true", "yes", "on")
        elif key in _STR_KEYS:
            values[key] = val
        else:
            raise ConfigError(f"config line {lineno}: unknown key {key!r}")
    return values


def build_config(values: dict) -> SweepConfig:
    """SweepConfig from merged config-file + CLI values (CLI wins upstream)."""
    try:
        cfg = SweepConfig(
            r_values=list(values.get("r", [])),
            n_values=list(values.get("n", [])),
            trials=values.get("trials", 1),
            master_seed=values.get("seed", 0),
            measurements=list(values.get("measurements", ["scc"])),
            fmt=values.get("format", "csv"),
            out=values.get("out"),
            workers=values.get("workers", 1),
            simple=values.get("simple", False),
            eps=values.get("eps", 0.2),
            tol=values.get("tol", stationary.DEFAULT_POWER_TOL),
            max_iter=values.get("max_iter", stationary.DEFAULT_POWER_MAX_ITER),
            flag_threshold=values.get("flag_threshold"),
            flag_size_cap=values.get("flag_size_cap"),
            gw_depth=values.get("gw_depth", 30),
            gw_trees=values.get("gw_trees", 256),
        )
    except TypeError as exc:
        raise ConfigError(f"invalid config field: {exc}") from exc
    return cfg.validate()
