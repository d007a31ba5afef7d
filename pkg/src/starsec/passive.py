"""Surface optimization: closed-form phase update by majorization, then the
per-element amplitude split as a disk-constrained convex QP.

The phase step majorizes theta^H Gamma theta by its largest-eigenvalue
tangent bound; with the energy splits held fixed the bound is linear in
theta, so each element's phase snaps to arg(-q_l). The amplitude step then
optimizes the square-root splits x = sqrt(a) jointly over both regions,
warm-started from the current (feasible) profile, so neither step can
increase the model objective.
"""

from __future__ import annotations

import logging

import numpy as np

from ._core import solve_pair_disk_qp
from ._num import require_hermitian
from .rates import REGION_COL, StarProfile, wrap_phase
from .scenario import REGIONS

log = logging.getLogger(__name__)

#: Above this size the largest eigenvalue comes from power iteration.
_DENSE_EIG_MAX = 256
_POWER_TOL = 1e-10
_POWER_MAX_ITER = 10_000

#: Gradient-mapping tolerance and iteration cap of the amplitude solve.
AMP_TOL = 1e-7
AMP_MAX_ITER = 5000


def max_eigenvalue(gamma: np.ndarray) -> float:
    """Largest eigenvalue of a Hermitian PSD matrix."""
    try:
        gamma = require_hermitian(gamma, what="quadratic coefficient matrix")
    except Exception as exc:
        raise ValueError(str(exc)) from exc
    n = gamma.shape[0]
    if n <= _DENSE_EIG_MAX:
        return float(np.linalg.eigvalsh(gamma)[-1])
    rng = np.random.default_rng(0)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(_POWER_MAX_ITER):
        w = gamma @ v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        v = w / norm
        lam_new = float(np.vdot(v, gamma @ v).real)
        if abs(lam_new - lam) <= _POWER_TOL * max(1.0, abs(lam_new)):
            return lam_new
        lam = lam_new
    return lam


def mm_phase_step(ris_quads, profile: StarProfile) -> StarProfile:
    """One majorization step on the phases, energy splits unchanged.

    Per region: q = (Gamma - lambda_max I) theta~ - (z1 + z2); the new
    phase of element l is arg(-q_l), keeping the old phase where q_l is
    exactly zero.
    """
    out = profile.copy()
    for k in REGIONS:
        quads = ris_quads[k]
        theta = profile.coefficient_vector(k)
        lam = max_eigenvalue(quads.gamma)
        q = (quads.gamma - lam * np.eye(len(theta))) @ theta - quads.z_sum
        col = REGION_COL[k]
        nonzero = q != 0
        out.phase[nonzero, col] = wrap_phase(np.angle(-q[nonzero]))
    return out


def _amplitude_problem(ris_quads, profile: StarProfile):
    """Real symmetric blocks of the joint split problem at fixed phases.

    With theta_k = Phi_k x_k (x real, nonnegative), the model per region is
    x^T Re(Phi^H Gamma Phi) x - 2 Re(Phi^H z)^T x.
    """
    blocks = {}
    for k in REGIONS:
        quads = ris_quads[k]
        phi = np.exp(1j * profile.phase[:, REGION_COL[k]])
        scaled = quads.gamma * np.outer(phi.conj(), phi)
        q = 0.5 * (scaled.real + scaled.real.T)
        c = (phi.conj() * quads.z_sum).real
        blocks[k] = (q, c)
    return blocks


def solve_amplitudes(ris_quads, profile: StarProfile) -> StarProfile:
    """Optimal energy splits at the profile's phases.

    Solves the joint 2L-variable disk QP in x = sqrt(a) by projected
    gradient (projection: clamp negatives, then radially rescale any
    element pair outside the unit disk), warm-started from the current
    splits. A dark system (all coefficients zero) returns the input
    unchanged.
    """
    scale = max(max(np.linalg.norm(ris_quads[k].gamma) for k in REGIONS),
                max(np.linalg.norm(ris_quads[k].z_sum) for k in REGIONS))
    if scale == 0.0:
        return profile
    blocks = _amplitude_problem(ris_quads, profile)
    x0 = {k: np.sqrt(np.clip(profile.amp[:, REGION_COL[k]], 0.0, None)) for k in REGIONS}
    x_r, x_t, iters, converged = solve_pair_disk_qp(
        blocks["r"][0], blocks["t"][0], blocks["r"][1], blocks["t"][1],
        x0["r"], x0["t"], nonneg=True, tol=AMP_TOL, max_iter=AMP_MAX_ITER)
    if not converged:
        log.warning("amplitude solve hit the %d-iteration cap "
                    "(descent is still monotone)", iters)
    out = profile.copy()
    out.amp[:, 0] = np.clip(x_r, 0.0, 1.0) ** 2
    out.amp[:, 1] = np.clip(x_t, 0.0, 1.0) ** 2
    return out
