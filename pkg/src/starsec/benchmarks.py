"""The three comparison schemes for the surface/beam subproblems.

* lifted SDP + Gaussian randomization for the phases (rank-one dropped,
  recovered by sampling), amplitudes re-fit afterwards;
* a jointly convex solve of the surface subproblem over per-element disks
  (the "loosened constant-modulus" formulation), used directly;
* maximum ratio transmission along each effective channel's principal
  right singular vector with an even power split.
"""

from __future__ import annotations

import logging

import numpy as np

from ._core import solve_pair_disk_qp_complex
from ._num import hermitize
from .errors import ConvergenceError
from .passive import AMP_MAX_ITER, AMP_TOL, solve_amplitudes
from .rates import REGION_COL, BeamPair, StarProfile, wrap_phase
from .scenario import REGIONS, ChannelSet
from .surrogate import effective_channels

log = logging.getLogger(__name__)

#: ADMM stopping tolerance on the Frobenius primal/dual residuals. The
#: primal side carries a safety factor so the returned PSD iterate meets
#: the 1e-6 diagonal feasibility bound.
SDP_TOL = 1e-6
SDP_MAX_ITER = 50_000

DEFAULT_RANDOMIZATIONS = 200


def _project_affine(mat_r, mat_t):
    """Project a Hermitian pair onto the lifted diagonal constraints:
    element diagonals sum to one, homogenization corner equals one."""
    mat_r, mat_t = hermitize(mat_r), hermitize(mat_t)
    n = mat_r.shape[0]
    d_r, d_t = np.diag(mat_r).real.copy(), np.diag(mat_t).real.copy()
    corr = 0.5 * (1.0 - d_r[:n - 1] - d_t[:n - 1])
    d_r[:n - 1] += corr
    d_t[:n - 1] += corr
    d_r[n - 1] = 1.0
    d_t[n - 1] = 1.0
    np.fill_diagonal(mat_r, d_r)
    np.fill_diagonal(mat_t, d_t)
    return mat_r, mat_t


def _project_psd(mat):
    lam, vec = np.linalg.eigh(hermitize(mat))
    lam = np.clip(lam, 0.0, None)
    return hermitize((vec * lam) @ vec.conj().T)


def solve_lifted_sdp(pi, tol: float = SDP_TOL, max_iter: int = SDP_MAX_ITER,
                     warm: dict | None = None):
    """ADMM for  min sum_k <Pi_k, X_k>  over PSD X_k with the lifted
    diagonal constraints; splits the affine and PSD cones, eigendecomposing
    per iteration.

    Returns (psi, warm): the PSD iterates per region and the warm-start
    state (psi, duals, rho) for the next call. Raises ConvergenceError
    with the residuals if the budget runs out.
    """
    n = pi["r"].shape[0]
    if warm:
        psi = {k: warm["psi"][k].copy() for k in REGIONS}
        u = {k: warm["u"][k].copy() for k in REGIONS}
        rho = warm["rho"]
    else:
        psi = {k: np.eye(n, dtype=complex) / 2 for k in REGIONS}
        u = {k: np.zeros((n, n), dtype=complex) for k in REGIONS}
        rho = 1.0
    primal = dual = np.inf
    for it in range(1, max_iter + 1):
        x_r, x_t = _project_affine(psi["r"] - u["r"] - pi["r"] / rho,
                                   psi["t"] - u["t"] - pi["t"] / rho)
        x = {"r": x_r, "t": x_t}
        psi_prev = psi
        psi = {k: _project_psd(x[k] + u[k]) for k in REGIONS}
        u = {k: u[k] + x[k] - psi[k] for k in REGIONS}
        primal = max(np.linalg.norm(x[k] - psi[k]) for k in REGIONS)
        dual = rho * max(np.linalg.norm(psi[k] - psi_prev[k]) for k in REGIONS)
        if primal <= 0.25 * tol and dual <= tol:
            return psi, {"psi": psi, "u": u, "rho": rho}
        if it % 50 == 0:
            if primal > 10.0 * dual:
                rho *= 2.0
                u = {k: u[k] / 2.0 for k in REGIONS}
            elif dual > 10.0 * primal:
                rho /= 2.0
                u = {k: u[k] * 2.0 for k in REGIONS}
    raise ConvergenceError("lifted SDP did not converge",
                           primal_residual=primal, dual_residual=dual,
                           iterations=max_iter)


def lifted_objective_matrix(quads_k) -> np.ndarray:
    """Pi_k of the lifted surface objective: quadratic block Gamma, linear
    block -z in the border, zero corner."""
    n = quads_k.gamma.shape[0]
    pi = np.zeros((n + 1, n + 1), dtype=complex)
    pi[:n, :n] = quads_k.gamma
    pi[:n, n] = -quads_k.z_sum
    pi[n, :n] = -quads_k.z_sum.conj()
    return pi


def sdr_phase_step(ris_quads, profile: StarProfile,
                   n_randomizations: int = DEFAULT_RANDOMIZATIONS,
                   rng: np.random.Generator | None = None,
                   warm_state: dict | None = None) -> StarProfile:
    """Surface update of the lifted-SDP benchmark.

    Solves the relaxation, draws candidate vectors from the solution's
    square-root factor, keeps the draw whose extracted phases score best
    on the model (with the current splits), and re-fits the amplitudes.
    ``warm_state`` is an optional mutable dict reused across calls.
    """
    if n_randomizations < 1:
        raise ValueError("n_randomizations must be positive")
    rng = rng if rng is not None else np.random.default_rng(0)
    pi = {k: lifted_objective_matrix(ris_quads[k]) for k in REGIONS}
    warm = warm_state.get("sdp") if warm_state else None
    psi, warm = solve_lifted_sdp(pi, warm=warm)
    if warm_state is not None:
        warm_state["sdp"] = warm

    factors = {}
    for k in REGIONS:
        lam, vec = np.linalg.eigh(psi[k])
        factors[k] = vec * np.sqrt(np.clip(lam, 0.0, None))

    out = profile.copy()
    for k in REGIONS:
        best, _ = select_randomized_candidate(pi[k], factors[k],
                                              n_randomizations, rng)
        ratio = best[:-1] / best[-1] if abs(best[-1]) > 1e-12 else best[:-1]
        out.phase[:, REGION_COL[k]] = wrap_phase(np.angle(ratio))
    return solve_amplitudes(ris_quads, out)


def select_randomized_candidate(pi_k: np.ndarray, factor: np.ndarray,
                                n_randomizations: int, rng: np.random.Generator):
    """Draw lifted candidates v = F r (r standard complex Gaussian) and keep
    the one scoring best on the lifted quadratic v^H Pi v, i.e. the draw
    maximizing the model objective before the modulus recovery.

    Returns (candidate, score); with a fixed generator the first draw of a
    larger budget equals the draw of a smaller one, so the best score is
    monotone in the budget.
    """
    n = pi_k.shape[0]
    best_v, best_score = None, np.inf
    for _ in range(n_randomizations):
        r = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)
        v = factor @ r
        score = float(np.vdot(v, pi_k @ v).real)
        if score < best_score:
            best_score, best_v = score, v
    return best_v, best_score


def relaxed_phase_step(ris_quads, profile: StarProfile) -> StarProfile:
    """Jointly convex surface update over per-element disks.

    Optimizes the complex coefficient pairs directly (projected gradient,
    per-element complex disk projection) and maps the solution back to
    splits/phases; the relaxed moduli already satisfy the element budget.
    """
    theta0 = {k: profile.coefficient_vector(k) for k in REGIONS}
    th_r, th_t, iters, converged = solve_pair_disk_qp_complex(
        hermitize(ris_quads["r"].gamma), hermitize(ris_quads["t"].gamma),
        ris_quads["r"].z_sum, ris_quads["t"].z_sum,
        theta0["r"], theta0["t"], tol=AMP_TOL, max_iter=AMP_MAX_ITER)
    if not converged:
        log.warning("relaxed surface solve hit the %d-iteration cap "
                    "(descent is still monotone)", iters)
    out = profile.copy()
    for k, theta in (("r", th_r), ("t", th_t)):
        col = REGION_COL[k]
        mod = np.abs(theta)
        keep = mod < 1e-15
        out.amp[:, col] = np.clip(mod, 0.0, 1.0) ** 2
        phases = wrap_phase(np.angle(theta))
        phases[keep] = profile.phase[keep, col]
        out.phase[:, col] = phases
    return out


def mrt_beams(channels: ChannelSet, profile: StarProfile, p_watts: float) -> BeamPair:
    """Maximum ratio transmission: each beam rides the principal right
    singular vector of its user's effective channel, power split evenly."""
    if p_watts <= 0:
        raise ValueError("power budget must be positive")
    eff = effective_channels(channels, profile)
    beams = {}
    for k in REGIONS:
        ht, _ = eff[k]
        if np.linalg.norm(ht) == 0.0:
            beams[k] = np.zeros(ht.shape[1], dtype=complex)
            continue
        _, _, vh = np.linalg.svd(ht)
        beams[k] = np.sqrt(p_watts / 2.0) * vh[0].conj()
    return BeamPair(w_r=beams["r"], w_t=beams["t"])
