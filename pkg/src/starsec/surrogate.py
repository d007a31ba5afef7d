"""Quadratic minorant of the (unclamped) sum secrecy rate.

The log-det objective per user decomposes into three terms; introducing a
receive estimator/weight pair for each log term turns the sum into a
quadratic in the beams and in the surface coefficient vectors, tight when
the auxiliaries are at their closed-form optimum. ``update_aux`` computes
that optimum, ``surrogate_value`` evaluates the model, and
``beam_quadratics`` / ``ris_quadratics`` repackage it as explicit quadratic
forms for the two block solvers.

Sign conventions: the model per user is

    -w_k^H A_k w_k - w_k'^H B_k w_k' + 2 Re(W1 u1^H Ht w_k)
        + 2 Re(W2 u2^H Gt w_k') + d_k

in the beams, and  -(theta^H Gamma theta - 2 Re(theta^H z) - d)  in the
coefficient vector theta_k, with z = conj(diag(Z1)) + conj(diag(Z2)).
Both equal the same number at the same point; tests pin this.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._num import hermitize, logdet_hpd
from .errors import NumericDegeneracyError
from .rates import BeamPair, StarProfile
from .scenario import REGIONS, ChannelSet, SystemConfig, other_region


@dataclass(frozen=True)
class AuxState:
    """Per-region auxiliaries: user estimator/weight (u1, w1), eavesdropper
    estimator/weight (u2, w2), and the matrix weight w3 (M x M, HPD)."""

    u1: np.ndarray
    w1: float
    u2: np.ndarray
    w2: float
    w3: np.ndarray


@dataclass(frozen=True)
class BeamQuadratics:
    """Hermitian PSD quadratic blocks of the beam subproblem plus the
    aux-only constant d."""

    a_mat: np.ndarray
    b_mat: np.ndarray
    d: float


@dataclass(frozen=True)
class RisQuadratics:
    """Quadratic model of one region's surface subproblem.

    gamma = gamma1 + gamma2 + gamma3 (each a Hadamard product of PSD
    factors, hence PSD); z1/z2 are the conjugated diagonals of the linear
    coupling matrices, so the model reads
    theta^H gamma theta - 2 Re(theta^H (z1 + z2)) - d.
    """

    gamma1: np.ndarray
    gamma2: np.ndarray
    gamma3: np.ndarray
    gamma: np.ndarray
    z1: np.ndarray
    z2: np.ndarray
    d: float

    @property
    def z_sum(self) -> np.ndarray:
        return self.z1 + self.z2


def effective_channels(channels: ChannelSet, profile: StarProfile):
    """Cascaded channels per region: (T_k Theta_k H, G_k Theta_k H)."""
    h = channels.h_bs_ris
    out = {}
    for k in REGIONS:
        theta = profile.coefficient_vector(k)
        out[k] = ((channels.user(k) * theta) @ h, (channels.eve(k) * theta) @ h)
    return out


def _solve_hpd(mat: np.ndarray, rhs: np.ndarray, what: str) -> np.ndarray:
    try:
        return np.linalg.solve(mat, rhs)
    except np.linalg.LinAlgError as exc:
        raise NumericDegeneracyError(f"{what} is singular") from exc


def update_aux(channels: ChannelSet, beams: BeamPair, profile: StarProfile,
               config: SystemConfig):
    """Closed-form optimal auxiliaries at the current (beams, profile).

    u1 is the MMSE receiver of the desired stream at the user, w1 the
    inverse of its residual MSE; u2/w2 likewise for the other stream at
    the eavesdropper; w3 inverts the eavesdropper's total covariance
    normalized by its noise.
    """
    if config.noise_user_w <= 0 or config.noise_eve_w <= 0:
        raise ValueError("noise powers must be positive")
    eff = effective_channels(channels, profile)
    out = {}
    for k in REGIONS:
        kp = other_region(k)
        ht, gt = eff[k]
        w_k, w_kp = beams.beam(k), beams.beam(kp)
        sb, se = config.noise_user_w, config.noise_eve_w
        m = gt.shape[0]

        hk, hkp = ht @ w_k, ht @ w_kp
        cov_u = sb * np.eye(ht.shape[0]) + np.outer(hk, hk.conj()) + np.outer(hkp, hkp.conj())
        u1 = _solve_hpd(hermitize(cov_u), hk, "user receive covariance")
        e1 = float((np.abs(np.vdot(u1, hk) - 1.0) ** 2
                    + np.abs(np.vdot(u1, hkp)) ** 2
                    + sb * np.vdot(u1, u1)).real)

        gkp = gt @ w_kp
        cov_e = se * np.eye(m) + np.outer(gkp, gkp.conj())
        u2 = _solve_hpd(hermitize(cov_e), gkp, "eavesdropper receive covariance")
        e2 = float((np.abs(np.vdot(u2, gkp) - 1.0) ** 2 + se * np.vdot(u2, u2)).real)

        gk = gt @ w_k
        e3 = np.eye(m) + (np.outer(gk, gk.conj()) + np.outer(gkp, gkp.conj())) / se
        w3 = hermitize(_solve_hpd(hermitize(e3), np.eye(m), "eavesdropper covariance"))

        out[k] = AuxState(u1=u1, w1=1.0 / e1, u2=u2, w2=1.0 / e2, w3=w3)
    return out


def aux_constant(aux_k: AuxState, config: SystemConfig) -> float:
    """The beam- and surface-independent constant d_k of the model."""
    m = aux_k.w3.shape[0]
    sb, se = config.noise_user_w, config.noise_eve_w
    return (np.log(aux_k.w1) + np.log(aux_k.w2) + logdet_hpd(aux_k.w3, "aux weight matrix")
            + 2.0 + m
            - aux_k.w1 * (1.0 + sb * float(np.vdot(aux_k.u1, aux_k.u1).real))
            - aux_k.w2 * (1.0 + se * float(np.vdot(aux_k.u2, aux_k.u2).real))
            - float(np.trace(aux_k.w3).real))


def surrogate_value(aux, channels: ChannelSet, beams: BeamPair,
                    profile: StarProfile, config: SystemConfig) -> float:
    """Model value (nats) at the given point, for the given auxiliaries.

    Evaluated straight from the estimator MSE forms, independently of the
    quadratic assemblies, so the two can be cross-checked. At freshly
    updated auxiliaries this equals the unclamped sum of per-user log-det
    differences.
    """
    eff = effective_channels(channels, profile)
    sb, se = config.noise_user_w, config.noise_eve_w
    total = 0.0
    for k in REGIONS:
        kp = other_region(k)
        ht, gt = eff[k]
        a = aux[k]
        w_k, w_kp = beams.beam(k), beams.beam(kp)
        m = gt.shape[0]

        hk, hkp = ht @ w_k, ht @ w_kp
        e1 = float((np.abs(np.vdot(a.u1, hk) - 1.0) ** 2
                    + np.abs(np.vdot(a.u1, hkp)) ** 2
                    + sb * np.vdot(a.u1, a.u1)).real)
        g1 = np.log(a.w1) - a.w1 * e1 + 1.0

        gkp = gt @ w_kp
        e2 = float((np.abs(np.vdot(a.u2, gkp) - 1.0) ** 2 + se * np.vdot(a.u2, a.u2)).real)
        g2 = np.log(a.w2) - a.w2 * e2 + 1.0

        gk = gt @ w_k
        e3 = np.eye(m) + (np.outer(gk, gk.conj()) + np.outer(gkp, gkp.conj())) / se
        g3 = logdet_hpd(a.w3, "aux weight matrix") - float(np.trace(a.w3 @ e3).real) + m

        total += g1 + g2 + g3
    return total


def beam_quadratics(aux, channels: ChannelSet, profile: StarProfile,
                    config: SystemConfig):
    """Assemble the Hermitian PSD blocks A_k, B_k and the constant d_k."""
    eff = effective_channels(channels, profile)
    out = {}
    for k in REGIONS:
        ht, gt = eff[k]
        a = aux[k]
        hu = ht.conj().T @ a.u1
        gu = gt.conj().T @ a.u2
        common = gt.conj().T @ a.w3 @ gt / config.noise_eve_w
        a_mat = hermitize(a.w1 * np.outer(hu, hu.conj()) + common)
        b_mat = hermitize(a.w1 * np.outer(hu, hu.conj())
                          + a.w2 * np.outer(gu, gu.conj()) + common)
        out[k] = BeamQuadratics(a_mat=a_mat, b_mat=b_mat, d=aux_constant(a, config))
    return out


def ris_quadratics(aux, channels: ChannelSet, beams: BeamPair,
                   config: SystemConfig):
    """Assemble Gamma_{k,1..3} (Hadamard products of PSD factors) and the
    linear coupling vectors of each region's surface subproblem.

    The first quadratic couples the user estimator to the full transmit
    covariance w_k w_k^H + w_k' w_k'^H: both the desired and the
    interfering stream pass through Theta_k on the way to user k, and
    dropping the interference half would break the exact match with the
    beam-domain model.
    """
    h = channels.h_bs_ris
    out = {}
    cov = {k: np.outer(beams.beam(k), beams.beam(k).conj()) for k in REGIONS}
    cov_sum = cov["r"] + cov["t"]
    y_sum = hermitize(h @ cov_sum @ h.conj().T)
    for k in REGIONS:
        kp = other_region(k)
        t_k, g_k = channels.user(k), channels.eve(k)
        a = aux[k]
        w_k, w_kp = beams.beam(k), beams.beam(kp)

        tu = t_k.conj().T @ a.u1
        x1 = a.w1 * np.outer(tu, tu.conj())
        gamma1 = hermitize(x1 * y_sum.T)

        gu = g_k.conj().T @ a.u2
        x2 = a.w2 * np.outer(gu, gu.conj())
        y2 = hermitize(h @ cov[kp] @ h.conj().T)
        gamma2 = hermitize(x2 * y2.T)

        x3 = g_k.conj().T @ a.w3 @ g_k / config.noise_eve_w
        gamma3 = hermitize(x3 * y_sum.T)

        # conj(diag(Z)) of Z1 = (H w_k) W1 (u1^H T_k) and
        # Z2 = (H w_k') W2 (u2^H G_k), so the model's linear term reads
        # 2 Re(theta^H z) with theta the coefficient vector.
        z1 = a.w1 * np.conj(h @ w_k) * tu
        z2 = a.w2 * np.conj(h @ w_kp) * gu

        out[k] = RisQuadratics(gamma1=gamma1, gamma2=gamma2, gamma3=gamma3,
                               gamma=hermitize(gamma1 + gamma2 + gamma3),
                               z1=z1, z2=z2, d=aux_constant(a, config))
    return out


def ris_objective_vec(quads_k: RisQuadratics, theta: np.ndarray) -> float:
    """g(theta_k) = theta^H Gamma theta - 2 Re(theta^H z) - d."""
    quad = float(np.vdot(theta, quads_k.gamma @ theta).real)
    lin = 2.0 * float(np.vdot(theta, quads_k.z_sum).real)
    return quad - lin - quads_k.d


def ris_objective(quads, profile: StarProfile) -> float:
    """Sum over regions of g(theta_k) at the profile's coefficient vectors.

    Equals minus the surrogate value at the auxiliaries the quadratics
    were assembled from.
    """
    return sum(ris_objective_vec(quads[k], profile.coefficient_vector(k))
               for k in REGIONS)
