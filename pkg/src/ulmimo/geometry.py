"""Cell geometry and large-scale gain models.

Two gain models feed the rest of the package. The idealized model gives
every in-cell user unit gain and every other-cell user a constant
``beta_other``, which makes the fading law a point mass. The drop model
places users uniformly in a ring of hexagonal cells (one center cell plus
its six neighbours), applies a fixed urban path-loss law, and scales the
received power by the transmit-power-to-noise budget, so the resulting
gains are received-SNR units consumed directly by the solvers with the
scenario's configured noise variance.

Frozen propagation choices (conventional values, see the scenario files):
carrier 1900 MHz, base-station height 30 m, terminal height 1.5 m, urban
correction, 35 m exclusion disk around the serving base station,
log-normal shadowing available but off by default. The stated noise power
is ambiguous between a total and a per-Hz figure; ``noise_bandwidth_hz``
is the multiplier that re-anchors it (1.0 means "total as stated").
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .fading import FadingDistribution, UserGainProfile

log = logging.getLogger(__name__)

SQRT3 = np.sqrt(3.0)


@dataclass(frozen=True)
class CellLayout:
    """Hexagonal cells of circumradius ``radius_m`` centred at ``centers``.

    Cell 1 (index 0) is the receiving base station at the origin; hexagon
    vertices point along 0, 60, ..., 300 degrees, so neighbours sit at
    sqrt(3) * radius along 30 + 60k degrees.
    """

    centers: np.ndarray  # (B, 2) meters
    radius_m: float

    @property
    def num_cells(self) -> int:
        return self.centers.shape[0]


@dataclass(frozen=True)
class UserDrop:
    """Uniform user positions, one row of K users per cell."""

    positions: np.ndarray  # (B, K, 2) meters
    layout: CellLayout
    exclusion_m: float


@dataclass(frozen=True)
class Cost231Params:
    """Urban COST231-Hata propagation with a link budget.

    ``noise_bandwidth_hz`` multiplies the linear noise power; it is the
    single re-anchoring knob for the ambiguous noise reference.
    """

    cell_radius_m: float = 1000.0
    tx_power_dbm: float = 23.0
    noise_power_dbm: float = -174.0
    noise_bandwidth_hz: float = 1.0
    carrier_freq_mhz: float = 1900.0
    bs_height_m: float = 30.0
    ms_height_m: float = 1.5
    shadowing_sigma_db: float | None = None
    exclusion_radius_m: float = 35.0

    def __post_init__(self):
        if self.cell_radius_m <= 0.0:
            raise InvalidInputError("cell radius must be positive")
        if not 1500.0 <= self.carrier_freq_mhz <= 2000.0:
            raise InvalidInputError("carrier frequency outside model validity")
        if not 30.0 <= self.bs_height_m <= 200.0:
            raise InvalidInputError("base-station height outside model validity")
        if not 1.0 <= self.ms_height_m <= 10.0:
            raise InvalidInputError("terminal height outside model validity")
        if self.exclusion_radius_m <= 0.0:
            raise InvalidInputError("exclusion radius must be positive")
        if self.noise_bandwidth_hz <= 0.0:
            raise InvalidInputError("noise bandwidth multiplier must be positive")
        if self.shadowing_sigma_db is not None and self.shadowing_sigma_db < 0.0:
            raise InvalidInputError("shadowing sigma must be nonnegative")

    @property
    def noise_power_mw(self) -> float:
        return 10.0 ** (self.noise_power_dbm / 10.0) * self.noise_bandwidth_hz

    @property
    def tx_power_mw(self) -> float:
        return 10.0 ** (self.tx_power_dbm / 10.0)


def hex_layout(B: int = 7, radius_m: float = 1000.0) -> CellLayout:
    """Center cell alone (B=1) or with its first interfering ring (B=7)."""
    if radius_m <= 0.0:
        raise InvalidInputError("radius must be positive")
    if B == 1:
        centers = np.zeros((1, 2))
    elif B == 7:
        angles = np.deg2rad(30.0 + 60.0 * np.arange(6))
        ring = SQRT3 * radius_m * np.stack([np.cos(angles), np.sin(angles)], axis=1)
        centers = np.vstack([np.zeros((1, 2)), ring])
    else:
        raise InvalidInputError("only B=1 and B=7 layouts are supported")
    return CellLayout(centers=centers, radius_m=radius_m)


def points_in_hex(points: np.ndarray, center: np.ndarray, radius_m: float) -> np.ndarray:
    """Boolean mask of points inside the hexagon (boundary counts as inside)."""
    rel = np.atleast_2d(points) - center
    apothem = SQRT3 / 2.0 * radius_m
    ok = np.ones(rel.shape[0], dtype=bool)
    for k in range(3):
        a = np.deg2rad(30.0 + 60.0 * k)
        ok &= np.abs(rel @ np.array([np.cos(a), np.sin(a)])) <= apothem + 1e-9
    return ok


def drop_users(layout: CellLayout, K: int, rng: np.random.Generator,
               exclusion_m: float = 35.0) -> UserDrop:
    """K uniform positions per cell, outside the serving-BS exclusion disk.

    Rejection sampling from the bounding square; deterministic given the
    generator state.
    """
    if K < 1:
        raise InvalidInputError("K must be at least 1")
    R = layout.radius_m
    pos = np.empty((layout.num_cells, K, 2))
    for j, center in enumerate(layout.centers):
        got = 0
        while got < K:
            n_draw = max(2 * (K - got), 8)
            cand = center + rng.uniform(-R, R, size=(n_draw, 2))
            keep = points_in_hex(cand, center, R)
            keep &= np.hypot(cand[:, 0] - center[0], cand[:, 1] - center[1]) >= exclusion_m
            cand = cand[keep]
            take = min(K - got, cand.shape[0])
            pos[j, got:got + take] = cand[:take]
            got += take
    return UserDrop(positions=pos, layout=layout, exclusion_m=exclusion_m)


def cost231_pathloss_db(distance_m, params: Cost231Params):
    """Urban COST231-Hata path loss in dB; distance at or above the exclusion disk."""
    d = np.asarray(distance_m, dtype=float)
    if np.any(d < params.exclusion_radius_m):
        raise InvalidInputError(
            f"distance below the {params.exclusion_radius_m} m exclusion disk")
    f = params.carrier_freq_mhz
    hb = params.bs_height_m
    hm = params.ms_height_m
    # medium-city mobile antenna correction, 0 dB area correction
    a_hm = (1.1 * np.log10(f) - 0.7) * hm - (1.56 * np.log10(f) - 0.8)
    pl = (46.3 + 33.9 * np.log10(f) - 13.82 * np.log10(hb) - a_hm
          + (44.9 - 6.55 * np.log10(hb)) * np.log10(d / 1000.0))
    return pl if pl.ndim else float(pl)


def large_scale_gains(drop: UserDrop, params: Cost231Params,
                      rng: np.random.Generator) -> np.ndarray:
    """(B, K) linear gains of every user to base station 1, in SNR units.

    Path gain (with optional log-normal shadowing) is clamped at 1 so no
    link delivers more power than was transmitted, then scaled by transmit
    power over the noise reference. The generator is consumed only when
    shadowing is on, so the no-shadowing gains are a pure function of the
    positions.
    """
    bs1 = drop.layout.centers[0]
    dist = np.hypot(drop.positions[..., 0] - bs1[0],
                    drop.positions[..., 1] - bs1[1])
    pl_db = cost231_pathloss_db(np.maximum(dist, params.exclusion_radius_m), params)
    path_gain = 10.0 ** (-pl_db / 10.0)
    if params.shadowing_sigma_db is not None and params.shadowing_sigma_db > 0.0:
        shadow_db = params.shadowing_sigma_db * rng.standard_normal(pl_db.shape)
        path_gain = path_gain * 10.0 ** (shadow_db / 10.0)
    clamped = int(np.count_nonzero(path_gain > 1.0))
    if clamped:
        log.warning("clamped %d link gains at unit path gain", clamped)
        path_gain = np.minimum(path_gain, 1.0)
    return path_gain * (params.tx_power_mw / params.noise_power_mw)


def idealized_gains(B: int, beta_other: float) -> tuple[FadingDistribution, UserGainProfile]:
    """Point-mass law: unit in-cell gain, constant other-cell gain."""
    if B < 1:
        raise InvalidInputError("B must be at least 1")
    if not 0.0 < beta_other < 1.0:
        raise InvalidInputError("beta_other must lie in (0, 1)")
    gains = np.concatenate([[1.0], np.full(B - 1, beta_other)])
    dist = FadingDistribution.point_mass(gains)
    profile = UserGainProfile.from_gain_row(gains)
    return dist, profile


def cost231_gain_rows(layout: CellLayout, params: Cost231Params, n: int,
                      rng: np.random.Generator) -> np.ndarray:
    """(n, B) joint gain samples: one independent user per cell, n drops."""
    drop = drop_users(layout, n, rng, exclusion_m=params.exclusion_radius_m)
    return large_scale_gains(drop, params, rng).T
