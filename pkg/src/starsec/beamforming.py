"""Beam subproblem: minimize the convex quadratic model over the transmit
power ball.

Stacking w = [w_r; w_t], the objective is w^H M w - 2 Re(b^H w) with M
block-diagonal (M_r = A_r + B_t, M_t = A_t + B_r). With a single ball
constraint the KKT system reduces to a one-dimensional search over the
multiplier mu: w(mu) = (M + mu I)^{-1} b, whose power is strictly
decreasing in mu, so bisection on ||w(mu)||^2 = P is exact.
"""

from __future__ import annotations

import numpy as np

from ._num import hermitize
from .errors import ConvergenceError
from .rates import BeamPair
from .scenario import REGIONS, other_region

#: Relative eigenvalue threshold for the pseudo-inverse candidate.
_PINV_REL_TOL = 1e-12
#: Relative accuracy of the bisection on the power equation.
_POWER_REL_TOL = 1e-8
_MAX_BISECT = 200


def solve_ball_quadratic(m_blocks, b_blocks, p_watts: float):
    """Global minimizer of sum_i (x_i^H M_i x_i - 2 Re(b_i^H x_i)) subject
    to sum_i ||x_i||^2 <= p_watts, for Hermitian PSD blocks M_i.

    Returns (blocks, mu): the per-block solution and the multiplier of the
    power constraint (0 when it is slack).
    """
    if p_watts <= 0:
        raise ValueError("power budget must be positive")
    eigs = []
    for m, b in zip(m_blocks, b_blocks):
        lam, vec = np.linalg.eigh(hermitize(m))
        eigs.append((np.clip(lam, 0.0, None), vec, vec.conj().T @ b))

    # Unconstrained candidate via the eigen-thresholded pseudo-inverse;
    # valid only when b lies in range(M), i.e. the residual vanishes.
    lam_max = max((lam[-1] for lam, _, _ in eigs if lam.size), default=0.0)
    cut = _PINV_REL_TOL * max(lam_max, 1.0)
    cand, power0, in_range = [], 0.0, True
    for lam, vec, beta in eigs:
        coef = np.where(lam > cut, beta / np.where(lam > cut, lam, 1.0), 0.0)
        if np.linalg.norm(beta[lam <= cut]) > 1e-10 * max(1.0, np.linalg.norm(beta)):
            in_range = False
        cand.append(vec @ coef)
        power0 += float(np.vdot(coef, coef).real)
    if in_range and power0 <= p_watts * (1.0 + _POWER_REL_TOL):
        return cand, 0.0

    def power(mu):
        return sum(float(np.sum(np.abs(beta) ** 2 / (lam + mu) ** 2))
                   for lam, _, beta in eigs)

    lo, hi = 0.0, 1.0
    grow = 0
    while power(hi) > p_watts:
        hi *= 2.0
        grow += 1
        if grow > _MAX_BISECT:
            raise ConvergenceError("power bracket failed to close", power=power(hi))
    for _ in range(_MAX_BISECT):
        mid = 0.5 * (lo + hi)
        if power(mid) > p_watts:
            lo = mid
        else:
            hi = mid
        if abs(power(hi) - p_watts) <= _POWER_REL_TOL * p_watts:
            break
    else:
        raise ConvergenceError("power bisection did not converge",
                               residual=abs(power(hi) - p_watts))
    mu = hi
    blocks = [vec @ (beta / (lam + mu)) for lam, vec, beta in eigs]
    return blocks, mu


def solve_beams(quads, aux, channels, profile, p_watts: float) -> BeamPair:
    """Solve the beam subproblem at the given auxiliaries.

    The linear coefficient of each region collects the direct user term of
    its own region and the eavesdropper term of the other (where that
    region's beam appears as the estimated stream).
    """
    from .surrogate import effective_channels

    eff = effective_channels(channels, profile)
    m_blocks, b_blocks = [], []
    for k in REGIONS:
        kp = other_region(k)
        ht_k, _ = eff[k]
        _, gt_kp = eff[kp]
        m_blocks.append(hermitize(quads[k].a_mat + quads[kp].b_mat))
        b_blocks.append(aux[k].w1 * (ht_k.conj().T @ aux[k].u1)
                        + aux[kp].w2 * (gt_kp.conj().T @ aux[kp].u2))
    (w_r, w_t), _ = solve_ball_quadratic(m_blocks, b_blocks, p_watts)
    return BeamPair(w_r=w_r, w_t=w_t)
