"""Achievable and secrecy rates evaluated directly from channels, beams, and
surface coefficients - the ground truth every solver is checked against.

Rates are natural-log (nats) internally; anything CSV-facing converts to
bits. The per-user secrecy clamp ``max(0, R_user - R_eve)`` is applied
before summation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._num import logdet_hpd, require_hermitian
from .scenario import REGIONS, ChannelSet, SystemConfig, other_region

LN2 = float(np.log(2.0))

#: Column index of each region in StarProfile arrays.
REGION_COL = {"r": 0, "t": 1}

#: Feasibility slack allowed on the power and element-budget constraints.
FEAS_TOL = 1e-9


@dataclass
class BeamPair:
    """Transmit beamformers w_r, w_t (length N each)."""

    w_r: np.ndarray
    w_t: np.ndarray

    def beam(self, region: str) -> np.ndarray:
        return self.w_r if region == "r" else self.w_t

    def power(self) -> float:
        return float(np.vdot(self.w_r, self.w_r).real + np.vdot(self.w_t, self.w_t).real)

    def validate(self, p_watts: float, tol: float = FEAS_TOL) -> None:
        if self.w_r.shape != self.w_t.shape or self.w_r.ndim != 1:
            raise ValueError("w_r and w_t must be 1-D vectors of equal length")
        if self.power() > p_watts + tol:
            raise ValueError(f"beam power {self.power():.6e} exceeds budget {p_watts:.6e}")

    @classmethod
    def zeros(cls, n: int) -> "BeamPair":
        return cls(np.zeros(n, complex), np.zeros(n, complex))


@dataclass
class StarProfile:
    """Per-element energy splits and phase shifts of the surface.

    ``amp[l, col]`` is the energy fraction a_{l,k} (columns follow
    ``REGIONS`` order), ``phase[l, col]`` the phase in [0, 2*pi). The
    element budget is a_{l,r} + a_{l,t} <= 1.
    """

    amp: np.ndarray
    phase: np.ndarray

    def validate(self, tol: float = FEAS_TOL) -> None:
        if self.amp.shape != self.phase.shape or self.amp.ndim != 2 or self.amp.shape[1] != 2:
            raise ValueError("amp and phase must both have shape (L, 2)")
        if np.any(self.amp < -tol) or np.any(self.amp > 1 + tol):
            raise ValueError("amplitudes must lie in [0, 1]")
        if np.any(self.amp.sum(axis=1) > 1 + tol):
            raise ValueError("per-element amplitude budget exceeded")
        if np.any(self.phase < 0) or np.any(self.phase >= 2 * np.pi):
            raise ValueError("phases must be wrapped to [0, 2*pi)")

    @property
    def n_elements(self) -> int:
        return self.amp.shape[0]

    def coefficient_vector(self, region: str) -> np.ndarray:
        """theta_k: entries sqrt(a_{l,k}) * exp(j * phase_{l,k})."""
        col = REGION_COL[region]
        return np.sqrt(np.clip(self.amp[:, col], 0.0, None)) * np.exp(1j * self.phase[:, col])

    def copy(self) -> "StarProfile":
        return StarProfile(self.amp.copy(), self.phase.copy())

    def min_budget_slack(self) -> float:
        """Most-violated element constraint: min over l of
        min(a_r, a_t, 1 - a_r - a_t)."""
        slack_sum = 1.0 - self.amp.sum(axis=1)
        return float(min(self.amp.min(), slack_sum.min()))

    @classmethod
    def even_split(cls, n_elements: int) -> "StarProfile":
        return cls(np.full((n_elements, 2), 0.5), np.zeros((n_elements, 2)))

    @classmethod
    def random_phases(cls, n_elements: int, rng: np.random.Generator,
                      split: float = 0.5) -> "StarProfile":
        return cls(np.full((n_elements, 2), split),
                   rng.uniform(0.0, 2 * np.pi, size=(n_elements, 2)))


def wrap_phase(phase: np.ndarray) -> np.ndarray:
    out = np.mod(phase, 2 * np.pi)
    # mod of a tiny negative can round up to exactly 2*pi
    return np.where(out >= 2 * np.pi, 0.0, out)


def coefficient_matrix(profile: StarProfile, region: str) -> np.ndarray:
    """Diagonal coefficient matrix Theta_k of the requested region."""
    profile.validate()
    return np.diag(profile.coefficient_vector(region))


@dataclass(frozen=True)
class RateReport:
    """Per-user and summed secrecy rates, in nats."""

    r_user: dict
    r_eve: dict
    r_secrecy: dict
    sum_secrecy: float

    @property
    def sum_secrecy_bits(self) -> float:
        return self.sum_secrecy / LN2

    def secrecy_bits(self, region: str) -> float:
        return self.r_secrecy[region] / LN2


def _link_rate(channel_kl: np.ndarray, h: np.ndarray, theta: np.ndarray,
               w_k: np.ndarray, w_other: np.ndarray, noise_w: float) -> float:
    """log det(I + S (J + sigma^2 I)^{-1}) with rank-one S and J, computed
    as a difference of Cholesky log-dets of the two HPD matrices."""
    if noise_w <= 0:
        raise ValueError("noise power must be positive")
    eff = channel_kl * theta @ h          # (rx, N), equals channel @ diag(theta) @ h
    q = eff @ w_k
    p = eff @ w_other
    n_rx = eff.shape[0]
    base = np.outer(p, p.conj()) + noise_w * np.eye(n_rx)
    base = require_hermitian(base, what="interference-plus-noise matrix")
    full = base + np.outer(q, q.conj())
    return logdet_hpd(full, "signal-plus-interference matrix") - logdet_hpd(base, "interference matrix")


def user_rate(channels: ChannelSet, beams: BeamPair, profile: StarProfile,
              region: str, noise_w: float) -> float:
    """Legitimate-user rate R_{k,b} in nats."""
    profile.validate()
    theta = profile.coefficient_vector(region)
    return _link_rate(channels.user(region), channels.h_bs_ris, theta,
                      beams.beam(region), beams.beam(other_region(region)), noise_w)


def eve_rate(channels: ChannelSet, beams: BeamPair, profile: StarProfile,
             region: str, noise_w: float) -> float:
    """Eavesdropper rate R_{k,e} in nats."""
    profile.validate()
    theta = profile.coefficient_vector(region)
    return _link_rate(channels.eve(region), channels.h_bs_ris, theta,
                      beams.beam(region), beams.beam(other_region(region)), noise_w)


def secrecy_report(channels: ChannelSet, beams: BeamPair, profile: StarProfile,
                   config: SystemConfig) -> RateReport:
    """Clamped per-user secrecy rates and their sum."""
    r_user, r_eve, r_sec = {}, {}, {}
    for k in REGIONS:
        r_user[k] = user_rate(channels, beams, profile, k, config.noise_user_w)
        r_eve[k] = eve_rate(channels, beams, profile, k, config.noise_eve_w)
        r_sec[k] = max(0.0, r_user[k] - r_eve[k])
    return RateReport(r_user=r_user, r_eve=r_eve, r_secrecy=r_sec,
                      sum_secrecy=sum(r_sec.values()))
