"""Scenario constants, node geometry, and Rician channel synthesis.

Conventions fixed here and relied on everywhere else:

* powers live in linear watts internally; dBm/dB appear only in the config
  fields that mirror the scenario file;
* the BS, users, and eavesdroppers are uniform linear arrays along the
  global x-axis; the surface is an ``L_x x L_y`` uniform planar array in
  the x-z plane, element ``l`` sitting at grid position
  ``(l % L_x, l // L_x)``;
* one seeded generator produces all five channel matrices in the fixed
  order ``H, T_r, T_t, G_r, G_t`` (per matrix: real part then imaginary
  part of the scattered component), so a seed pins the whole draw.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

import numpy as np
import yaml

#: Region labels: "r" (reflection half-space) and "t" (transmission half-space).
REGIONS = ("r", "t")

#: Names of the scenario nodes, as used in the ``positions`` mapping.
NODES = ("ris", "bs", "bob_r", "eve_r", "bob_t", "eve_t")

#: Default desk-scale layout in meters: BS 100 m from the surface, one
#: user/eavesdropper pair per half-space, eavesdroppers farther out.
DEFAULT_POSITIONS = {
    "ris": (0.0, 0.0, 30.0),
    "bs": (100.0, 0.0, 30.0),
    "bob_r": (120.0, 20.0, 0.0),
    "eve_r": (150.0, 150.0, 0.0),
    "bob_t": (-120.0, 0.0, 30.0),
    "eve_t": (-120.0, 50.0, 60.0),
}


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


@dataclass(frozen=True)
class SystemConfig:
    """All scenario constants for one experiment.

    Defaults reproduce the reference setup: 4 antennas everywhere, a 5x4
    surface, 30 dBm transmit power, -90 dBm noise, path-loss exponent 2.2,
    Rician factor 3, -30 dB reference path loss at 1 m.
    """

    n_bs_antennas: int = 4
    n_user_antennas: int = 4
    n_eve_antennas: int = 4
    ris_grid: tuple[int, int] = (5, 4)
    tx_power_dbm: float = 30.0
    noise_user_dbm: float = -90.0
    noise_eve_dbm: float = -90.0
    path_loss_exponent: float = 2.2
    rician_k: float = 3.0
    ref_path_loss_db: float = -30.0
    positions: dict = field(default_factory=lambda: dict(DEFAULT_POSITIONS))
    element_spacing_wavelengths: float = 0.5
    ao_tolerance: float = 1e-4
    ao_max_iters: int = 100
    rng_seed: int = 0

    def __post_init__(self):
        for name in ("n_bs_antennas", "n_user_antennas", "n_eve_antennas"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
        lx, ly = self.ris_grid
        if not (isinstance(lx, int) and isinstance(ly, int) and lx >= 1 and ly >= 1):
            raise ValueError(f"ris_grid must be a pair of positive integers, got {self.ris_grid!r}")
        object.__setattr__(self, "ris_grid", (lx, ly))
        for name in ("tx_power_dbm", "noise_user_dbm", "noise_eve_dbm"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.rician_k < 0:
            raise ValueError("rician_k must be nonnegative")
        if self.element_spacing_wavelengths <= 0:
            raise ValueError("element_spacing_wavelengths must be positive")
        if self.ao_tolerance <= 0:
            raise ValueError("ao_tolerance must be positive")
        if not isinstance(self.ao_max_iters, int) or self.ao_max_iters < 1:
            raise ValueError("ao_max_iters must be a positive integer")
        if self.rng_seed < 0 or self.rng_seed > 2**64 - 1:
            raise ValueError("rng_seed must fit an unsigned 64-bit integer")
        unknown = set(self.positions) - set(NODES)
        missing = set(NODES) - set(self.positions)
        if unknown or missing:
            raise ValueError(f"positions must name exactly {NODES}; "
                             f"unknown={sorted(unknown)} missing={sorted(missing)}")
        cleaned = {}
        for node, pos in self.positions.items():
            arr = tuple(float(c) for c in pos)
            if len(arr) != 3 or not all(math.isfinite(c) for c in arr):
                raise ValueError(f"position of {node} must have 3 finite components")
            cleaned[node] = arr
        object.__setattr__(self, "positions", cleaned)

    @property
    def n_elements(self) -> int:
        return self.ris_grid[0] * self.ris_grid[1]

    @property
    def tx_power_w(self) -> float:
        return dbm_to_watts(self.tx_power_dbm)

    @property
    def noise_user_w(self) -> float:
        return dbm_to_watts(self.noise_user_dbm)

    @property
    def noise_eve_w(self) -> float:
        return dbm_to_watts(self.noise_eve_dbm)

    def noise_w(self, kind: str) -> float:
        return self.noise_user_w if kind == "user" else self.noise_eve_w

    def position(self, node: str) -> np.ndarray:
        return np.asarray(self.positions[node], dtype=float)

    def replace(self, **changes) -> "SystemConfig":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class ChannelSet:
    """The five channel matrices of one realization.

    ``h_bs_ris`` is L x N; ``t_ris_user[k]`` is Z x L and ``g_ris_eve[k]``
    is M x L for each region ``k``. Immutable after creation, safe to share
    across parallel trials.
    """

    h_bs_ris: np.ndarray
    t_ris_user: dict
    g_ris_eve: dict

    def __post_init__(self):
        self.h_bs_ris.setflags(write=False)
        for k in REGIONS:
            self.t_ris_user[k].setflags(write=False)
            self.g_ris_eve[k].setflags(write=False)

    def user(self, region: str) -> np.ndarray:
        return self.t_ris_user[region]

    def eve(self, region: str) -> np.ndarray:
        return self.g_ris_eve[region]


def other_region(region: str) -> str:
    if region not in REGIONS:
        raise ValueError(f"region must be one of {REGIONS}, got {region!r}")
    return "t" if region == "r" else "r"


def path_loss_linear(distance_m: float, config: SystemConfig) -> float:
    """Power path loss rho0 * d^(-alpha) with rho0 referenced at 1 m."""
    if not distance_m > 0:
        raise ValueError(f"distance must be positive, got {distance_m!r}")
    rho0 = db_to_linear(config.ref_path_loss_db)
    return rho0 * distance_m ** (-config.path_loss_exponent)


def node_distance(config: SystemConfig, node_a: str, node_b: str) -> float:
    return float(np.linalg.norm(config.position(node_a) - config.position(node_b)))


def element_offsets(config: SystemConfig, node: str) -> np.ndarray:
    """Array-element offsets in wavelengths, shape (n_antennas, 3).

    BS / users / eavesdroppers: linear along x. Surface: planar grid in
    x-z, row-major over x first.
    """
    s = config.element_spacing_wavelengths
    if node == "ris":
        lx, ly = config.ris_grid
        ix, iz = np.meshgrid(np.arange(lx), np.arange(ly), indexing="xy")
        offsets = np.zeros((lx * ly, 3))
        offsets[:, 0] = s * ix.ravel()
        offsets[:, 2] = s * iz.ravel()
        return offsets
    if node == "bs":
        n = config.n_bs_antennas
    elif node in ("bob_r", "bob_t"):
        n = config.n_user_antennas
    elif node in ("eve_r", "eve_t"):
        n = config.n_eve_antennas
    else:
        raise ValueError(f"unknown node {node!r}")
    offsets = np.zeros((n, 3))
    offsets[:, 0] = s * np.arange(n)
    return offsets


def steering_vector(offsets: np.ndarray, direction: np.ndarray) -> np.ndarray:
    """Unit-modulus array response for a plane wave along ``direction``."""
    return np.exp(2j * np.pi * (offsets @ direction))


def los_matrix(config: SystemConfig, tx_node: str, rx_node: str) -> np.ndarray:
    """Deterministic line-of-sight component: outer product of the receive
    and transmit steering vectors for the exact link direction."""
    d = config.position(rx_node) - config.position(tx_node)
    dist = np.linalg.norm(d)
    if dist == 0:
        raise ValueError(f"nodes {tx_node} and {rx_node} are co-located")
    u = d / dist
    a_tx = steering_vector(element_offsets(config, tx_node), u)
    a_rx = steering_vector(element_offsets(config, rx_node), -u)
    return np.outer(a_rx, a_tx.conj())


def _draw_channel(rng: np.random.Generator, config: SystemConfig,
                  tx_node: str, rx_node: str) -> np.ndarray:
    los = los_matrix(config, tx_node, rx_node)
    shape = los.shape
    nlos = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
    k = config.rician_k
    pl = path_loss_linear(node_distance(config, tx_node, rx_node), config)
    mix = np.sqrt(k / (k + 1.0)) * los + np.sqrt(1.0 / (k + 1.0)) * nlos
    return np.sqrt(pl) * mix


def generate_channels(config: SystemConfig, seed: int) -> ChannelSet:
    """One Rician realization of all five links from one seeded stream.

    Draw order is fixed (H, T_r, T_t, G_r, G_t) so the same seed yields
    bit-identical matrices, and configs differing only in eavesdropper
    antenna count share identical H and T draws.
    """
    rng = np.random.default_rng(seed)
    h = _draw_channel(rng, config, "bs", "ris")
    t = {k: _draw_channel(rng, config, "ris", f"bob_{k}") for k in REGIONS}
    g = {k: _draw_channel(rng, config, "ris", f"eve_{k}") for k in REGIONS}
    return ChannelSet(h_bs_ris=h, t_ris_user=t, g_ris_eve=g)


# -- scenario files ---------------------------------------------------------

_POSITION_KEYS = set(NODES)
_SCALAR_FIELDS = {f.name for f in dataclasses.fields(SystemConfig)} - {"positions", "ris_grid"}


def load_scenario(path) -> SystemConfig:
    """Read a YAML scenario file whose keys mirror SystemConfig field names.

    Unknown keys fail fast; omitted keys keep their defaults.
    """
    with open(path, "r", encoding="utf-8") as fh:
        raw = yaml.safe_load(fh)
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ValueError(f"scenario file {path} must hold a mapping")
    return config_from_mapping(raw, source=str(path))


def config_from_mapping(raw: dict, source: str = "<mapping>") -> SystemConfig:
    known = _SCALAR_FIELDS | {"positions", "ris_grid"}
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"{source}: unknown keys {sorted(unknown)}")
    kwargs = {}
    for key, value in raw.items():
        if key == "positions":
            if not isinstance(value, dict):
                raise ValueError(f"{source}: positions must be a mapping")
            bad = set(value) - _POSITION_KEYS
            if bad:
                raise ValueError(f"{source}: unknown position keys {sorted(bad)}")
            positions = dict(DEFAULT_POSITIONS)
            positions.update({k: tuple(v) for k, v in value.items()})
            kwargs[key] = positions
        elif key == "ris_grid":
            kwargs[key] = tuple(int(v) for v in value)
        else:
            kwargs[key] = value
    return SystemConfig(**kwargs)


def dump_scenario(config: SystemConfig, path) -> None:
    data = dataclasses.asdict(config)
    data["ris_grid"] = list(config.ris_grid)
    data["positions"] = {k: list(v) for k, v in config.positions.items()}
    with open(path, "w", encoding="utf-8") as fh:
        yaml.safe_dump(data, fh, sort_keys=False)
