"""Alternating optimization driver.

One outer iteration runs: auxiliary refresh, beam solve, another auxiliary
refresh, then the scheme's surface update. Every block maximizes the same
tight minorant, so the model value cannot decrease across any subproblem
boundary; convergence is declared on the true (clamped) objective.

Benchmark schemes reuse the same loop with the surface step (and, for MRT,
the beam step) swapped out, so traces share one schema.
"""

from __future__ import annotations

import csv
import logging
import time
from dataclasses import dataclass, field

import numpy as np

from .beamforming import solve_beams
from .benchmarks import mrt_beams, relaxed_phase_step, sdr_phase_step
from .errors import ConvergenceError, NumericDegeneracyError
from .passive import mm_phase_step, solve_amplitudes
from .rates import LN2, BeamPair, StarProfile, secrecy_report
from .scenario import ChannelSet, SystemConfig
from .surrogate import beam_quadratics, ris_quadratics, surrogate_value, update_aux

log = logging.getLogger(__name__)

SCHEMES = ("proposed", "mmse-sdr", "mmse-qcqp", "mrt")

TRACE_COLUMNS = ("iter", "sum_secrecy_bits", "surrogate", "power",
                 "slack_c1", "slack_c2")


@dataclass
class IterationTrace:
    """Per-iteration record of one run: true objective (bits), model value
    (bits), beam power, and the worst power/element-budget slacks."""

    sum_secrecy_bits: list = field(default_factory=list)
    surrogate_bits: list = field(default_factory=list)
    power: list = field(default_factory=list)
    slack_c1: list = field(default_factory=list)
    slack_c2: list = field(default_factory=list)
    step_ms: list = field(default_factory=list)
    subproblem_surrogates: list = field(default_factory=list)
    converged: bool = False
    n_iterations: int = 0
    abort_reason: str | None = None

    def rows(self):
        for i in range(len(self.sum_secrecy_bits)):
            yield (i + 1, self.sum_secrecy_bits[i], self.surrogate_bits[i],
                   self.power[i], self.slack_c1[i], self.slack_c2[i])

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(TRACE_COLUMNS)
            for row in self.rows():
                writer.writerow([repr(v) if isinstance(v, float) else v for v in row])


def default_init(channels: ChannelSet, config: SystemConfig,
                 seed: int | None = None) -> tuple[BeamPair, StarProfile]:
    """Feasible, nondegenerate, reproducible starting point: both beams
    along the BS-to-surface channel's principal right singular vector at
    half power each; even energy splits; seeded uniform phases."""
    rng = np.random.default_rng(config.rng_seed if seed is None else seed)
    _, _, vh = np.linalg.svd(channels.h_bs_ris)
    v = vh[0].conj()
    w = np.sqrt(config.tx_power_w / 2.0) * v
    beams = BeamPair(w_r=w.copy(), w_t=w.copy())
    profile = StarProfile.random_phases(config.n_elements, rng)
    return beams, profile


def run_ao(channels: ChannelSet, config: SystemConfig,
           init: tuple[BeamPair, StarProfile] | None = None,
           scheme: str = "proposed", seed: int | None = None,
           n_randomizations: int = 200,
           record_surrogates: bool = False):
    """Run one alternating optimization to convergence.

    Stops when the true objective moves by at most ``ao_tolerance``
    relative (floored at 1) between consecutive iterations, or at
    ``ao_max_iters``. On a subproblem failure the last feasible iterate is
    returned with the reason recorded on the trace.

    Returns (beams, profile, trace).
    """
    if scheme not in SCHEMES:
        raise ValueError(f"scheme must be one of {SCHEMES}, got {scheme!r}")
    p = config.tx_power_w
    run_seed = config.rng_seed if seed is None else seed
    if init is None:
        beams, profile = default_init(channels, config, run_seed)
    else:
        beams, profile = init
        beams.validate(p)
        profile.validate()
    rng = np.random.default_rng((run_seed, 0x5d2))
    trace = IterationTrace()
    warm_state: dict = {}
    prev_obj = None

    def note(stage, aux):
        if record_surrogates:
            trace.subproblem_surrogates.append(
                (stage, surrogate_value(aux, channels, beams, profile, config)))

    for _ in range(config.ao_max_iters):
        times = {}
        try:
            tic = time.perf_counter()
            if scheme == "mrt":
                beams = mrt_beams(channels, profile, p)
                aux = update_aux(channels, beams, profile, config)
                note("beams", aux)
            else:
                aux = update_aux(channels, beams, profile, config)
                note("aux", aux)
                quads = beam_quadratics(aux, channels, profile, config)
                beams = solve_beams(quads, aux, channels, profile, p)
                note("beams", aux)
            times["beams"] = (time.perf_counter() - tic) * 1e3

            tic = time.perf_counter()
            aux = update_aux(channels, beams, profile, config)
            note("aux", aux)
            rq = ris_quadratics(aux, channels, beams, config)
            times["aux"] = (time.perf_counter() - tic) * 1e3

            tic = time.perf_counter()
            if scheme in ("proposed", "mrt"):
                profile = mm_phase_step(rq, profile)
                note("phase", aux)
                profile = solve_amplitudes(rq, profile)
            elif scheme == "mmse-qcqp":
                profile = relaxed_phase_step(rq, profile)
            else:
                profile = sdr_phase_step(rq, profile, n_randomizations,
                                         rng=rng, warm_state=warm_state)
            note("surface", aux)
            times["surface"] = (time.perf_counter() - tic) * 1e3
        except (NumericDegeneracyError, ConvergenceError) as exc:
            trace.abort_reason = f"{type(exc).__name__}: {exc}"
            log.warning("aborting at iteration %d: %s", trace.n_iterations + 1,
                        trace.abort_reason)
            break

        report = secrecy_report(channels, beams, profile, config)
        obj = report.sum_secrecy_bits
        trace.sum_secrecy_bits.append(obj)
        trace.surrogate_bits.append(
            surrogate_value(aux, channels, beams, profile, config) / LN2)
        trace.power.append(beams.power())
        trace.slack_c1.append(p - beams.power())
        trace.slack_c2.append(profile.min_budget_slack())
        trace.step_ms.append(times)
        trace.n_iterations += 1

        if prev_obj is not None and abs(obj - prev_obj) <= config.ao_tolerance * max(1.0, abs(prev_obj)):
            trace.converged = True
            break
        prev_obj = obj

    return beams, profile, trace
