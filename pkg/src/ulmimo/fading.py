"""Large-scale fading laws and per-user gain profiles.

All gains are linear power ratios, constant across a base station's
antennas. A fading sample is one joint draw ``(beta_1, ..., beta_B)`` of
the gains from a generic user in each of the B cells to the receiving
base station; a :class:`FadingDistribution` is a weighted collection of
such samples and is the sole expectation operator used by the
large-system solvers. Expectations are plain weighted averages, so they
are deterministic given the sample order, and numpy's pairwise summation
keeps them independent of any partitioning to well below 1e-13 relative.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError

POINT_MASS = "point-mass"
EMPIRICAL = "empirical"


@dataclass(frozen=True)
class FadingSample:
    """One joint draw of per-cell gains with a nonnegative weight."""

    gains: np.ndarray
    weight: float = 1.0

    def __post_init__(self):
        gains = np.asarray(self.gains, dtype=float)
        if gains.ndim != 1 or gains.size == 0:
            raise InvalidInputError("gains must be a non-empty 1-D vector")
        if not np.all(gains > 0.0):
            raise InvalidInputError("every per-cell gain must be positive")
        if not np.isfinite(self.weight) or self.weight < 0.0:
            raise InvalidInputError("sample weight must be nonnegative")
        object.__setattr__(self, "gains", gains)


class FadingDistribution:
    """Weighted empirical law of the per-cell gain vector.

    ``kind`` is ``"point-mass"`` for a single unit-weight sample (the
    idealized constant-gain cells) and ``"empirical"`` for a collection of
    drop samples. Weights are normalized to sum to one on construction.
    """

    def __init__(self, gains, weights=None, kind: str | None = None):
        gains = np.atleast_2d(np.asarray(gains, dtype=float))
        if gains.size == 0:
            raise InvalidInputError("distribution needs at least one sample")
        if not np.all(np.isfinite(gains)) or not np.all(gains > 0.0):
            raise InvalidInputError("all gains must be finite and positive")
        if weights is None:
            weights = np.full(gains.shape[0], 1.0 / gains.shape[0])
        else:
            weights = np.asarray(weights, dtype=float)
            if weights.shape != (gains.shape[0],):
                raise InvalidInputError("one weight per sample required")
            if np.any(weights < 0.0) or not np.all(np.isfinite(weights)):
                raise InvalidInputError("weights must be finite and nonnegative")
            total = weights.sum()
            if total <= 0.0:
                raise InvalidInputError("weights must not all be zero")
            weights = weights / total
        if kind is None:
            kind = POINT_MASS if gains.shape[0] == 1 else EMPIRICAL
        if kind == POINT_MASS and gains.shape[0] != 1:
            raise InvalidInputError("point-mass kind requires exactly one sample")
        if kind not in (POINT_MASS, EMPIRICAL):
            raise InvalidInputError(f"unknown distribution kind {kind!r}")

        self.gains = gains
        self.weights = weights
        self.kind = kind
        # Per-sample derived quantities reused by every solver:
        #   total:    B        = sum_j beta_j
        #   own:      beta_1
        #   est_gain: beta_1^2 / B, the nonzero eigenvalue contributed by a
        #             contaminated-estimate direction
        #   cross_est_gain: sum_{j>=2} beta_j^2 / B, its other-cell coupling
        self.total = gains.sum(axis=1)
        self.own = gains[:, 0]
        self.est_gain = self.own**2 / self.total
        self.cross_est_gain = (gains[:, 1:] ** 2).sum(axis=1) / self.total

    @classmethod
    def from_samples(cls, samples) -> "FadingDistribution":
        samples = list(samples)
        if not samples:
            raise InvalidInputError("distribution needs at least one sample")
        gains = np.stack([s.gains for s in samples])
        weights = np.array([s.weight for s in samples])
        return cls(gains, weights)

    @classmethod
    def point_mass(cls, gains) -> "FadingDistribution":
        return cls(np.atleast_2d(np.asarray(gains, dtype=float)), kind=POINT_MASS)

    @property
    def num_cells(self) -> int:
        return self.gains.shape[1]

    @property
    def num_samples(self) -> int:
        return self.gains.shape[0]

    def expect(self, values: np.ndarray) -> float:
        """Weighted average of a per-sample array."""
        values = np.asarray(values, dtype=float)
        if values.shape[0] != self.num_samples:
            raise InvalidInputError("per-sample values must match sample count")
        return float(self.weights @ values)

    def mean_gains(self) -> np.ndarray:
        """E[beta_j] componentwise, length B."""
        return self.weights @ self.gains

    def profiles(self) -> "np.ndarray":
        """The raw (num_samples, B) gain rows, e.g. to build user profiles."""
        return self.gains


@dataclass(frozen=True)
class UserGainProfile:
    """Gains relevant to one tagged user: its own and its contaminators'.

    ``own_gain`` is the tagged user's gain to its serving base station;
    ``contaminator_gains`` are the gains of the same-resource users of the
    other B-1 cells to that base station.
    """

    own_gain: float
    contaminator_gains: np.ndarray

    def __post_init__(self):
        contam = np.asarray(self.contaminator_gains, dtype=float)
        if contam.ndim != 1:
            raise InvalidInputError("contaminator gains must be a 1-D vector")
        if self.own_gain <= 0.0 or not np.isfinite(self.own_gain):
            raise InvalidInputError("own gain must be positive and finite")
        if contam.size and (not np.all(contam > 0.0) or not np.all(np.isfinite(contam))):
            raise InvalidInputError("contaminator gains must be positive and finite")
        object.__setattr__(self, "contaminator_gains", contam)

    @classmethod
    def from_gain_row(cls, row) -> "UserGainProfile":
        row = np.asarray(row, dtype=float)
        return cls(float(row[0]), row[1:])

    @property
    def total_gain(self) -> float:
        """Combined gain of the tagged user and its contaminators."""
        return float(self.own_gain + self.contaminator_gains.sum())

    @property
    def signal_bar(self) -> float:
        """Effective signal power through a contaminated estimate."""
        return float(self.own_gain**2 / self.total_gain)

    @property
    def pilot_bar(self) -> float:
        """Effective interference power contributed by the contaminators."""
        return float((self.contaminator_gains**2).sum() / self.total_gain)


def expect_total_gain(dist: FadingDistribution) -> tuple[float, np.ndarray]:
    """E[B] and the per-cell means E[beta_j] of a fading distribution."""
    if not isinstance(dist, FadingDistribution):
        raise InvalidInputError("expected a FadingDistribution")
    mean_components = dist.mean_gains()
    return float(mean_components.sum()), mean_components
