"""Finite-dimension Monte Carlo of the multi-cell uplink.

One realization holds the small-scale channel vectors of all B*K users to
the receiving base station (cell 1 by convention), entrywise i.i.d.
circularly symmetric complex Gaussian with variance 1/M, together with
their large-scale gains. From a realization we form channel estimates
(exact pilot-contaminated combination, its noisy counterpart, or the full
training-matrix estimator with per-cell sequences), build the matched and
MMSE receive filters, and measure the empirical SINR as a conditional
power decomposition: no data symbols are ever drawn, the four powers are
quadratic forms in the filter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import (ConditioningError, InvalidInputError, NumericalError)
from .rng import complex_gaussian

MODE_NOISELESS = "noiseless-repeated"
MODE_NOISY = "noisy-repeated"
MODE_TRAINING = "independent-training"

LINEAR_SOLVE_TOL = 1e-10
TRAINING_COND_LIMIT = 1e12


@dataclass
class ChannelRealization:
    """One finite-M draw of the whole system, seen from base station 1."""

    M: int
    K: int
    B: int
    small_scale: np.ndarray  # (B, K, M) complex, i.i.d. CN(0, 1/M) entries
    gains: np.ndarray        # (B, K) linear large-scale gains to BS 1
    noise_var: float

    def __post_init__(self):
        if self.small_scale.shape != (self.B, self.K, self.M):
            raise InvalidInputError("small_scale must be (B, K, M)")
        if self.gains.shape != (self.B, self.K):
            raise InvalidInputError("gains must be (B, K)")
        if not np.all(self.gains > 0.0):
            raise InvalidInputError("large-scale gains must be positive")
        if self.noise_var <= 0.0:
            raise InvalidInputError("noise_var must be positive")

    def total_gain_per_user(self) -> np.ndarray:
        """beta^(k) = sum_j beta_jk, length K."""
        return self.gains.sum(axis=0)


@dataclass
class PilotConfig:
    """Pilot mode and, for independent training, the per-cell sequences.

    ``sequences[j, k]`` is the length-K training sequence of user k in
    cell j; within a cell the K sequences are orthonormal. Repeated modes
    do not materialize sequences (they are implicitly identical across
    cells).
    """

    mode: str
    pilot_snr: float = np.inf
    sequences: np.ndarray | None = None

    def __post_init__(self):
        if self.mode not in (MODE_NOISELESS, MODE_NOISY, MODE_TRAINING):
            raise InvalidInputError(f"unknown pilot mode {self.mode!r}")
        if self.mode != MODE_NOISELESS and not self.pilot_snr > 0.0:
            raise InvalidInputError("pilot_snr must be positive")
        if self.mode == MODE_TRAINING:
            if self.sequences is None:
                raise InvalidInputError("independent training needs sequences")
            seq = np.asarray(self.sequences)
            if seq.ndim != 3 or seq.shape[1] != seq.shape[2]:
                raise InvalidInputError("sequences must be (B, K, K)")
            eye = np.eye(seq.shape[1])
            for j in range(seq.shape[0]):
                gram = seq[j] @ seq[j].conj().T
                if np.max(np.abs(gram - eye)) > 1e-12:
                    raise InvalidInputError(
                        f"cell {j} training sequences are not orthonormal")


@dataclass
class EstimateSet:
    """Channel estimates of the K in-cell users and their error variances.

    ``error_cov_scalars[k]`` is the scalar s such that the estimation
    error of user k has covariance (s/M) I.
    """

    estimates: np.ndarray          # (K, M) complex
    error_cov_scalars: np.ndarray  # (K,)


@dataclass
class LinearFilter:
    weights: np.ndarray  # (M,) complex
    kind: str


@dataclass
class SinrBreakdown:
    """Empirical conditional powers at the filter output, and their SINR."""

    p_signal: float
    p_noise: float
    p_contam: float
    p_inter: float

    @property
    def sinr(self) -> float:
        return self.p_signal / (self.p_noise + self.p_contam + self.p_inter)


def users_per_cell(alpha: float, M: int) -> int:
    """K = round(alpha * M); the limit treats alpha as exact, finite M rounds."""
    K = int(round(alpha * M))
    if K < 1:
        raise InvalidInputError(
            f"alpha={alpha} with M={M} rounds to zero users per cell")
    return K


def draw_channel_matrix(B: int, K: int, M: int, rng: np.random.Generator) -> np.ndarray:
    """(B, K, M) i.i.d. CN(0, 1/M) small-scale vectors."""
    return complex_gaussian(rng, (B, K, M), 1.0 / M)


def draw_channels(scenario, M: int, rng: np.random.Generator) -> ChannelRealization:
    """Draw one realization for a scenario: gains first, then channels.

    Both consume the same stream in a fixed order, so two estimate modes
    run from identical substreams see identical channels (paired
    comparisons); pilot-noise draws live on a separate stream.
    """
    if M < 1:
        raise InvalidInputError("M must be at least 1")
    K = users_per_cell(scenario.alpha, M)
    gains = scenario.gain_matrix(K, rng)
    h = draw_channel_matrix(scenario.cells, K, M, rng)
    return ChannelRealization(M=M, K=K, B=scenario.cells, small_scale=h,
                              gains=gains, noise_var=scenario.noise_var)


# ---------------------------------------------------------------------------
# channel estimation
# ---------------------------------------------------------------------------

def pilot_estimate_noiseless(real: ChannelRealization) -> EstimateSet:
    """Exact pilot-contaminated estimate (infinite pilot power limit).

    hhat_1k = sqrt(beta_1k)/beta^(k) * sum_j sqrt(beta_jk) h_jk.
    """
    total = real.total_gain_per_user()
    combo = np.einsum("jk,jkm->km", np.sqrt(real.gains), real.small_scale)
    est = (np.sqrt(real.gains[0]) / total)[:, None] * combo
    err = real.gains[1:].sum(axis=0) / total
    return EstimateSet(estimates=est, error_cov_scalars=err)


def pilot_estimate_noisy(real: ChannelRealization, rho_p: float,
                         rng: np.random.Generator) -> EstimateSet:
    """Pilot-contaminated estimate at finite pilot SNR rho_p.

    The pilot-noise projections onto the K orthonormal in-cell sequences
    are i.i.d. CN(0, I/M) vectors; they are drawn as the columns of an
    (M, K) matrix in the same order the training estimator draws its noise
    matrix, so identical substreams give algebraically comparable results.
    """
    if not rho_p > 0.0:
        raise InvalidInputError("rho_p must be positive")
    total = real.total_gain_per_user()
    combo = np.einsum("jk,jkm->km", np.sqrt(real.gains), real.small_scale)
    noise = complex_gaussian(rng, (real.M, real.K), 1.0 / real.M)
    mixed = combo + noise.T / np.sqrt(rho_p)
    est = (np.sqrt(real.gains[0]) / (total + 1.0 / rho_p))[:, None] * mixed
    err = (real.gains[1:].sum(axis=0) + 1.0 / rho_p) / (total + 1.0 / rho_p)
    return EstimateSet(estimates=est, error_cov_scalars=err)


def generate_pilot_sequences(K: int, B: int, rng: np.random.Generator,
                             pilot_snr: float = 10.0 ** 2.8) -> PilotConfig:
    """Independent per-cell training: a Haar-random unitary basis per cell."""
    if K < 1 or B < 1:
        raise InvalidInputError("K and B must be at least 1")
    seqs = np.empty((B, K, K), dtype=complex)
    for j in range(B):
        z = complex_gaussian(rng, (K, K), 1.0)
        q, r = np.linalg.qr(z)
        # fix the phase ambiguity so the law is exactly Haar
        phases = np.diagonal(r) / np.abs(np.diagonal(r))
        seqs[j] = (q * phases).T  # row k = sequence of user k
    return PilotConfig(mode=MODE_TRAINING, pilot_snr=pilot_snr, sequences=seqs)


def training_based_estimate(real: ChannelRealization, pilots: PilotConfig,
                            rng: np.random.Generator) -> EstimateSet:
    """Full linear MMSE estimate from the K-symbol training observation.

    Forms the (M, K) pilot observation with fresh noise, then applies the
    regularized K x K inverse. Error variances are reported with the
    repeated-pilot formula, which the filter uses as its regularizer; the
    exact covariance under non-orthogonal cross-cell sequences depends on
    the realized sequence crosstalk and is not worth tracking for that
    purpose.
    """
    if pilots.mode != MODE_TRAINING:
        raise InvalidInputError("pilots must be in independent-training mode")
    seq = pilots.sequences
    if seq.shape[0] != real.B or seq.shape[1] != real.K:
        raise InvalidInputError("sequence shape does not match realization")
    rho_p = pilots.pilot_snr

    noise = complex_gaussian(rng, (real.M, real.K), 1.0 / real.M)
    Y = noise / np.sqrt(rho_p)
    A = np.eye(real.K, dtype=complex) / rho_p
    for j in range(real.B):
        weighted = real.small_scale[j].T * np.sqrt(real.gains[j])  # (M, K)
        Y = Y + weighted @ seq[j].conj()
        A = A + seq[j].T @ (real.gains[j][:, None] * seq[j].conj())

    cond = np.linalg.cond(A)
    if cond > TRAINING_COND_LIMIT:
        raise ConditioningError(
            f"training matrix condition number {cond:.3e} exceeds "
            f"{TRAINING_COND_LIMIT:.0e}")
    X = np.linalg.solve(A, seq[0].T)  # columns A^-1 Psi_1k
    est = (Y @ X).T * np.sqrt(real.gains[0])[:, None]

    total = real.total_gain_per_user()
    err = (real.gains[1:].sum(axis=0) + 1.0 / rho_p) / (total + 1.0 / rho_p)
    return EstimateSet(estimates=est, error_cov_scalars=err)


# ---------------------------------------------------------------------------
# effective noise constants and receive filters
# ---------------------------------------------------------------------------

def theta_effective(real: ChannelRealization) -> tuple[float, float]:
    """Effective-noise constants of the contaminated-estimate MMSE filter.

    theta1 absorbs the unestimated other-cell interference, theta2 the
    in-cell estimation error in the infinite-pilot-power limit.
    """
    other = real.gains[1:]
    theta1 = other.sum() / real.M
    theta2 = (other * (real.gains[0] / real.total_gain_per_user())).sum() / real.M
    return float(theta1), float(theta2)


def theta2_from_estimates(real: ChannelRealization, est: EstimateSet) -> float:
    """theta2 consistent with a given estimate's error variances."""
    return float((real.gains[0] * est.error_cov_scalars).sum() / real.M)


def _structured_matvec(V, d, reg, x):
    if V.shape[1] == 0:
        return reg * x
    return reg * x + V @ (d * (V.conj().T @ x))


def _solve_regularized_gram(V: np.ndarray, d: np.ndarray, reg: float,
                            b: np.ndarray, method: str | None = None) -> np.ndarray:
    """Solve (V diag(d) V^H + reg I) c = b for tall V.

    ``method`` None picks the rank-n subspace path when the column count
    stays below M/2, the dense Cholesky otherwise; both must agree to
    1e-10 and a single refinement step enforces the residual contract.
    """
    M, n = V.shape
    if method is None:
        method = "lowrank" if n < M / 2 else "dense"

    def solve_once(rhs):
        if n == 0:
            return rhs / reg
        if method == "lowrank":
            inner = V.conj().T @ V
            inner[np.diag_indices(n)] += reg / d
            y = np.linalg.solve(inner, V.conj().T @ rhs)
            return (rhs - V @ y) / reg
        S = (V * d) @ V.conj().T
        S[np.diag_indices(M)] += reg
        return cho_solve(cho_factor(S, lower=True), rhs)

    c = solve_once(b)
    bnorm = np.linalg.norm(b)
    residual = np.linalg.norm(b - _structured_matvec(V, d, reg, c)) / bnorm
    if residual > LINEAR_SOLVE_TOL:
        c = c + solve_once(b - _structured_matvec(V, d, reg, c))
        residual = np.linalg.norm(b - _structured_matvec(V, d, reg, c)) / bnorm
        if residual > LINEAR_SOLVE_TOL:
            raise NumericalError(
                f"filter solve residual {residual:.3e} above {LINEAR_SOLVE_TOL}")
    return c


def mmse_filter_pilot(est: EstimateSet, gains: np.ndarray, theta1: float,
                      theta2: float, noise_var: float,
                      method: str | None = None) -> LinearFilter:
    """MMSE receiver for user 1 built from contaminated estimates.

    Solves (sum_{k>=2} beta_1k hhat_1k hhat_1k^H + (theta1+theta2+s2) I) c
    = sqrt(beta_11) hhat_11. User 1's own estimate is excluded from the
    interference sum.
    """
    reg = theta1 + theta2 + noise_var
    if reg <= 0.0:
        raise InvalidInputError("theta1 + theta2 + noise_var must be positive")
    own = np.asarray(gains)[0]
    V = est.estimates[1:].T
    b = np.sqrt(own[0]) * est.estimates[0]
    c = _solve_regularized_gram(V, own[1:], reg, b, method)
    return LinearFilter(weights=c, kind="mmse-pilot")


def mmse_filter_perfect(real: ChannelRealization, theta1: float,
                        noise_var: float, method: str | None = None) -> LinearFilter:
    """MMSE receiver with error-free in-cell channel knowledge.

    The interference sum runs over all K in-cell users and the regularizer
    drops the estimation-error term.
    """
    reg = theta1 + noise_var
    if reg <= 0.0:
        raise InvalidInputError("theta1 + noise_var must be positive")
    V = real.small_scale[0].T
    b = np.sqrt(real.gains[0, 0]) * real.small_scale[0, 0]
    c = _solve_regularized_gram(V, real.gains[0], reg, b, method)
    return LinearFilter(weights=c, kind="mmse-perfect")


def matched_filter(est: EstimateSet) -> LinearFilter:
    """Coherent projection onto user 1's (possibly contaminated) estimate."""
    return LinearFilter(weights=est.estimates[0].copy(), kind="matched")


def empirical_sinr(filt: LinearFilter, real: ChannelRealization) -> SinrBreakdown:
    """Conditional power decomposition of the filter output.

    Signal is user (1,1); contamination is the same-resource users of the
    other cells; interference is everyone else; noise is the filter energy
    times the noise variance.
    """
    c = filt.weights
    if c.shape != (real.M,):
        raise InvalidInputError("filter length does not match antennas")
    proj = real.small_scale @ c.conj()          # (B, K) of c^H h_jk
    powers = real.gains * np.abs(proj) ** 2
    return SinrBreakdown(
        p_signal=float(powers[0, 0]),
        p_noise=float(real.noise_var * np.vdot(c, c).real),
        p_contam=float(powers[1:, 0].sum()),
        p_inter=float(powers[:, 1:].sum()),
    )
