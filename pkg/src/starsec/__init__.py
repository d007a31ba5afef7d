"""starsec: secrecy-rate optimization for a STAR-RIS aided MIMO downlink.

An energy-splitting surface serves one user/eavesdropper pair per
half-space. The solver alternates a convex beam update, a closed-form
phase update, and a convex per-element energy-split update over a shared
tight quadratic model of the sum secrecy rate; three benchmark schemes and
a seeded Monte-Carlo harness ride the same driver.
"""

from ._core import BACKEND as KERNEL_BACKEND
from .ao import SCHEMES, IterationTrace, default_init, run_ao
from .beamforming import solve_beams
from .benchmarks import mrt_beams, relaxed_phase_step, sdr_phase_step
from .errors import ConvergenceError, NumericDegeneracyError
from .harness import (ExperimentSpec, ResultRecord, load_experiment,
                      paired_difference, run_experiment, summarize,
                      write_records_csv, write_summary_csv)
from .passive import max_eigenvalue, mm_phase_step, solve_amplitudes
from .rates import (BeamPair, RateReport, StarProfile, coefficient_matrix,
                    eve_rate, secrecy_report, user_rate)
from .scenario import (REGIONS, ChannelSet, SystemConfig, generate_channels,
                       load_scenario, path_loss_linear)
from .surrogate import (AuxState, BeamQuadratics, RisQuadratics,
                        beam_quadratics, effective_channels, ris_quadratics,
                        surrogate_value, update_aux)

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND", "SCHEMES", "REGIONS", "__version__",
    "SystemConfig", "ChannelSet", "generate_channels", "load_scenario",
    "path_loss_linear",
    "BeamPair", "StarProfile", "RateReport", "coefficient_matrix",
    "user_rate", "eve_rate", "secrecy_report",
    "AuxState", "BeamQuadratics", "RisQuadratics", "effective_channels",
    "update_aux", "surrogate_value", "beam_quadratics", "ris_quadratics",
    "solve_beams", "max_eigenvalue", "mm_phase_step", "solve_amplitudes",
    "sdr_phase_step", "relaxed_phase_step", "mrt_beams",
    "IterationTrace", "run_ao", "default_init",
    "ExperimentSpec", "ResultRecord", "load_experiment", "run_experiment",
    "summarize", "paired_difference", "write_records_csv", "write_summary_csv",
    "ConvergenceError", "NumericDegeneracyError",
]
