"""Shared instance builders for the test suite."""

import numpy as np
import pytest

from starsec import BeamPair, StarProfile, SystemConfig, generate_channels


def tiny_config(**overrides) -> SystemConfig:
    """Desk-size setup (N=Z=M=2, L=4) that keeps oracle tests fast."""
    base = dict(n_bs_antennas=2, n_user_antennas=2, n_eve_antennas=2,
                ris_grid=(2, 2), tx_power_dbm=30.0)
    base.update(overrides)
    return SystemConfig(**base)


def random_profile(n_elements: int, rng: np.random.Generator) -> StarProfile:
    """Feasible random profile: Dirichlet-ish splits, uniform phases."""
    split = rng.uniform(0.05, 0.95, size=n_elements)
    total = rng.uniform(0.2, 1.0, size=n_elements)
    amp = np.stack([split * total, (1 - split) * total], axis=1)
    phase = rng.uniform(0, 2 * np.pi, size=(n_elements, 2))
    return StarProfile(amp=amp, phase=phase)


def random_beams(n_antennas: int, p_watts: float, rng: np.random.Generator,
                 fill: float = 0.9) -> BeamPair:
    w = rng.standard_normal((2, n_antennas)) + 1j * rng.standard_normal((2, n_antennas))
    w *= np.sqrt(fill * p_watts / np.sum(np.abs(w) ** 2))
    return BeamPair(w_r=w[0], w_t=w[1])


def random_point(config: SystemConfig, seed: int):
    """(channels, beams, profile) drawn from one seed."""
    rng = np.random.default_rng(seed)
    channels = generate_channels(config, seed)
    beams = random_beams(config.n_bs_antennas, config.tx_power_w, rng)
    profile = random_profile(config.n_elements, rng)
    return channels, beams, profile


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
