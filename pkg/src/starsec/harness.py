"""Batch experiment runner: sweeps, paired Monte-Carlo trials, CSV records,
and bootstrap summaries.

Within one (sweep value, trial) cell every scheme consumes the identical
channel realization, so cross-scheme differences carry no channel noise.
Records are sorted by (scheme, sweep value, trial) and written atomically;
re-running a spec reproduces every column except the wall-clock one.
"""

from __future__ import annotations

import csv
import dataclasses
import logging
import math
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

from .ao import SCHEMES, run_ao
from .scenario import SystemConfig, generate_channels, load_scenario

log = logging.getLogger(__name__)

SWEEP_AXES = ("power_dbm", "ris_elements", "none")

RECORD_COLUMNS = ("scheme", "sweep_axis", "sweep_value", "trial", "seed",
                  "sum_secrecy_bits", "secrecy_r_bits", "secrecy_t_bits",
                  "iterations", "wall_ms", "status")

SUMMARY_COLUMNS = ("scheme", "sweep_axis", "sweep_value", "n_trials",
                   "mean_sum_secrecy_bits", "stderr", "ci95_lo", "ci95_hi")

DEFAULT_BOOTSTRAP = 2000


def grid_for_elements(count: int) -> tuple[int, int]:
    """Factor an element count into (L_x, L_y): L_x is ceil(sqrt(L))
    stepped down to the nearest divisor. Counts with no divisor besides 1
    in that range (primes past 2) are rejected."""
    if count < 1:
        raise ValueError("element count must be positive")
    if count == 1:
        return (1, 1)
    lx = math.isqrt(count - 1) + 1  # ceil(sqrt(count))
    while lx > 1 and count % lx:
        lx -= 1
    if lx == 1:
        raise ValueError(f"element count {count} does not factor into a grid")
    return (lx, count // lx)


@dataclass(frozen=True)
class ExperimentSpec:
    """One batch experiment: a base scenario, schemes, a sweep, trials."""

    scenario: str
    schemes: tuple = ("proposed",)
    sweep_axis: str = "none"
    sweep_values: tuple = ()
    n_trials: int = 1
    seed_base: int = 0
    output: str | None = None

    def __post_init__(self):
        if self.sweep_axis not in SWEEP_AXES:
            raise ValueError(f"sweep_axis must be one of {SWEEP_AXES}")
        object.__setattr__(self, "schemes", tuple(self.schemes))
        unknown = set(self.schemes) - set(SCHEMES)
        if unknown:
            raise ValueError(f"unknown schemes {sorted(unknown)}")
        if not self.schemes:
            raise ValueError("at least one scheme is required")
        values = tuple(self.sweep_values)
        if self.sweep_axis == "none":
            values = (None,)
        elif not values:
            raise ValueError(f"sweep over {self.sweep_axis} needs values")
        if self.sweep_axis == "ris_elements":
            for v in values:
                grid_for_elements(int(v))
        object.__setattr__(self, "sweep_values", values)
        if self.n_trials < 1:
            raise ValueError("n_trials must be >= 1")


@dataclass(frozen=True)
class ResultRecord:
    scheme: str
    sweep_axis: str
    sweep_value: object
    trial: int
    seed: int
    sum_secrecy_bits: float
    secrecy_r_bits: float
    secrecy_t_bits: float
    iterations: int
    wall_ms: float
    status: str


def load_experiment(path) -> ExperimentSpec:
    """Read a YAML experiment file; the scenario path is resolved relative
    to the experiment file. Unknown keys fail fast."""
    path = Path(path)
    with open(path, "r", encoding="utf-8") as fh:
        raw = yaml.safe_load(fh) or {}
    known = {f.name for f in dataclasses.fields(ExperimentSpec)}
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"{path}: unknown keys {sorted(unknown)}")
    if "scenario" not in raw:
        raise ValueError(f"{path}: a scenario file is required")
    raw["scenario"] = str((path.parent / raw["scenario"]).resolve())
    return ExperimentSpec(**raw)


def config_for_sweep(base: SystemConfig, axis: str, value) -> SystemConfig:
    if axis == "none" or value is None:
        return base
    if axis == "power_dbm":
        return base.replace(tx_power_dbm=float(value))
    return base.replace(ris_grid=grid_for_elements(int(value)))


def _run_cell(base: SystemConfig, spec: ExperimentSpec, value, trial: int):
    """All schemes of one (sweep value, trial) cell on one channel draw."""
    config = config_for_sweep(base, spec.sweep_axis, value)
    seed = spec.seed_base + trial
    channels = generate_channels(config, seed)
    records = []
    for scheme in spec.schemes:
        tic = time.perf_counter()
        try:
            beams, profile, trace = run_ao(channels, config, scheme=scheme, seed=seed)
            from .rates import secrecy_report
            report = secrecy_report(channels, beams, profile, config)
            status = "ok" if trace.abort_reason is None else f"failed:{trace.abort_reason}"
            record = ResultRecord(
                scheme=scheme, sweep_axis=spec.sweep_axis, sweep_value=value,
                trial=trial, seed=seed,
                sum_secrecy_bits=report.sum_secrecy_bits,
                secrecy_r_bits=report.secrecy_bits("r"),
                secrecy_t_bits=report.secrecy_bits("t"),
                iterations=trace.n_iterations,
                wall_ms=(time.perf_counter() - tic) * 1e3, status=status)
        except Exception as exc:  # noqa: BLE001 - a failed cell must not kill the run
            log.warning("scheme %s failed on trial %d: %s", scheme, trial, exc)
            record = ResultRecord(
                scheme=scheme, sweep_axis=spec.sweep_axis, sweep_value=value,
                trial=trial, seed=seed, sum_secrecy_bits=float("nan"),
                secrecy_r_bits=float("nan"), secrecy_t_bits=float("nan"),
                iterations=0, wall_ms=(time.perf_counter() - tic) * 1e3,
                status=f"failed:{type(exc).__name__}")
        records.append(record)
    return records


def run_experiment(spec: ExperimentSpec, jobs: int = 1) -> list:
    """Execute the experiment and return records sorted by
    (scheme, sweep value, trial). Writes nothing; see write_records_csv."""
    base = load_scenario(spec.scenario)
    cells = [(value, trial) for value in spec.sweep_values
             for trial in range(spec.n_trials)]
    records = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_run_cell, base, spec, value, trial)
                       for value, trial in cells]
            for fut in futures:
                records.extend(fut.result())
    else:
        for value, trial in cells:
            records.extend(_run_cell(base, spec, value, trial))
    records.sort(key=lambda r: (r.scheme, _sort_key(r.sweep_value), r.trial))
    return records


def _sort_key(value):
    return (0, float(value)) if value is not None else (1, 0.0)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_records_csv(records, path) -> None:
    """Atomic CSV write (temp file + rename) with the fixed column order."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".csv.part")
    try:
        with os.fdopen(fd, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(RECORD_COLUMNS)
            for rec in records:
                writer.writerow([_fmt(getattr(rec, col)) for col in RECORD_COLUMNS])
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_records_csv(path) -> list:
    records = []
    with open(path, "r", newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != list(RECORD_COLUMNS):
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        for row in reader:
            records.append(ResultRecord(
                scheme=row["scheme"], sweep_axis=row["sweep_axis"],
                sweep_value=(None if row["sweep_value"] == "" else float(row["sweep_value"])),
                trial=int(row["trial"]), seed=int(row["seed"]),
                sum_secrecy_bits=float(row["sum_secrecy_bits"]),
                secrecy_r_bits=float(row["secrecy_r_bits"]),
                secrecy_t_bits=float(row["secrecy_t_bits"]),
                iterations=int(row["iterations"]), wall_ms=float(row["wall_ms"]),
                status=row["status"]))
    return records


def bootstrap_interval(values: np.ndarray, seed: int = 0,
                       n_boot: int = DEFAULT_BOOTSTRAP) -> tuple[float, float]:
    """Percentile 95% bootstrap interval of the mean, deterministic in the
    seed."""
    values = np.asarray(values, dtype=float)
    if len(values) == 1:
        return float(values[0]), float(values[0])
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, len(values), size=(n_boot, len(values)))
    means = values[idx].mean(axis=1)
    lo, hi = np.percentile(means, [2.5, 97.5])
    return float(lo), float(hi)


def summarize(records, seed: int = 0, n_boot: int = DEFAULT_BOOTSTRAP) -> list:
    """Per (scheme, sweep value): mean, standard error, and 95% bootstrap
    interval of the summed secrecy rate over successful trials. Empty
    cells are omitted with a warning."""
    cells = {}
    for rec in records:
        cells.setdefault((rec.scheme, rec.sweep_axis, rec.sweep_value), []).append(rec)
    rows = []
    for (scheme, axis, value), cell in sorted(
            cells.items(), key=lambda kv: (kv[0][0], _sort_key(kv[0][2]))):
        good = [r.sum_secrecy_bits for r in cell if r.status == "ok"]
        if not good:
            log.warning("cell (%s, %s=%s) has no successful trials; omitted",
                        scheme, axis, value)
            continue
        arr = np.asarray(good)
        se = float(arr.std(ddof=1) / np.sqrt(len(arr))) if len(arr) > 1 else 0.0
        lo, hi = bootstrap_interval(arr, seed=seed, n_boot=n_boot)
        rows.append({"scheme": scheme, "sweep_axis": axis, "sweep_value": value,
                     "n_trials": len(arr), "mean_sum_secrecy_bits": float(arr.mean()),
                     "stderr": se, "ci95_lo": lo, "ci95_hi": hi})
    return rows


def write_summary_csv(rows, path) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".csv.part")
    try:
        with os.fdopen(fd, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(SUMMARY_COLUMNS)
            for row in rows:
                writer.writerow([_fmt(row[col]) for col in SUMMARY_COLUMNS])
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def paired_difference(records, scheme_a: str, scheme_b: str, sweep_value=None,
                      seed: int = 0, n_boot: int = DEFAULT_BOOTSTRAP):
    """Mean and 95% bootstrap interval of per-trial differences
    (scheme_a - scheme_b) at one sweep value, pairing trials by index."""
    def cell(scheme):
        return {r.trial: r.sum_secrecy_bits for r in records
                if r.scheme == scheme and r.sweep_value == sweep_value
                and r.status == "ok"}

    a, b = cell(scheme_a), cell(scheme_b)
    shared = sorted(set(a) & set(b))
    if not shared:
        raise ValueError(f"no paired trials for {scheme_a} vs {scheme_b}")
    diffs = np.array([a[t] - b[t] for t in shared])
    lo, hi = bootstrap_interval(diffs, seed=seed, n_boot=n_boot)
    return float(diffs.mean()), lo, hi
