"""Experiment runners: sweeps over loading, percentiles, rates, CSV output.

Every runner is a pure function of (scenario, master seed, knobs); trial
randomness comes from per-(point, trial) substreams so results do not
depend on evaluation order and any emitted row can be recomputed from the
metadata in its CSV header.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .asymptotic import (asymptotic_report, solve_det_eq, solve_eta1_perfect,
                         to_db)
from .errors import InvalidInputError, ScenarioError
from .fading import FadingDistribution
from .geometry import idealized_gains
from .montecarlo import (MODE_NOISELESS, MODE_NOISY, MODE_TRAINING,
                         draw_channels, empirical_sinr, generate_pilot_sequences,
                         matched_filter, mmse_filter_perfect, mmse_filter_pilot,
                         pilot_estimate_noiseless, pilot_estimate_noisy,
                         theta2_from_estimates, theta_effective,
                         training_based_estimate, users_per_cell)
from .rng import seed_substream
from .scenario import Scenario, scenario_hash

CSV_SCHEMA = 1

FILTER_MF = "mf"
FILTER_MMSE = "mmse"
FILTER_MMSE_PERFECT = "mmse-perfect"
ALL_FILTERS = (FILTER_MF, FILTER_MMSE, FILTER_MMSE_PERFECT)

ESTIMATE_MODES = {
    "noiseless": MODE_NOISELESS,
    "noisy": MODE_NOISY,
    "training": MODE_TRAINING,
}


@dataclass
class SweepResult:
    """Rows plus the metadata that makes them recomputable."""

    columns: list[str]
    rows: list[tuple]
    units: dict[str, str]
    meta: dict[str, str] = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        idx = self.columns.index(name)
        return np.array([row[idx] for row in self.rows])


def _format_cell(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))  # shortest round-trip representation
    return str(value)


def write_csv(result: SweepResult, path: str | Path) -> None:
    """One file per figure/table analog, with schema/seed/units in the header."""
    units = ",".join(f"{c}:{result.units.get(c, '-')}" for c in result.columns)
    meta = " ".join(f"{k}={v}" for k, v in sorted(result.meta.items()))
    lines = [f"# ulmimo-csv schema={CSV_SCHEMA} {meta} units={units}"]
    lines.append(",".join(result.columns))
    for row in result.rows:
        lines.append(",".join(_format_cell(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def _base_meta(scenario: Scenario, seed) -> dict[str, str]:
    return {"scenario": scenario.name, "scenario_sha": scenario_hash(scenario),
            "seed": str(seed)}


def _check_alpha_grid(alpha_grid) -> list[float]:
    grid = [float(a) for a in alpha_grid]
    if not grid:
        raise InvalidInputError("alpha grid must be non-empty")
    if any(not 0.0 < a <= 1.5 for a in grid):
        raise InvalidInputError("alpha grid must lie in (0, 1.5]")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise InvalidInputError("alpha grid must be strictly increasing")
    return grid


# ---------------------------------------------------------------------------
# closed-form sweeps
# ---------------------------------------------------------------------------

def asymptotic_sweep(scenario: Scenario, alpha_grid) -> SweepResult:
    """Limiting SINR of the three receivers versus loading (idealized cells)."""
    if not scenario.is_idealized:
        raise ScenarioError(
            "asymptotic sweeps need an idealized scenario; use the "
            "percentile or rates runners for drop-based models")
    grid = _check_alpha_grid(alpha_grid)
    dist = scenario.fading_distribution()
    profile = scenario.profile()
    rows = []
    for a in grid:
        rep = asymptotic_report(profile, dist, a, scenario.noise_var)
        rows.append((a, rep.mf_pilot_db, rep.mmse_pilot_db, rep.mmse_perfect_db))
    return SweepResult(
        columns=["alpha", "sinr_mf_pilot_db", "sinr_mmse_pilot_db",
                 "sinr_mmse_perfect_db"],
        rows=rows,
        units={"alpha": "ratio", "sinr_mf_pilot_db": "dB",
               "sinr_mmse_pilot_db": "dB", "sinr_mmse_perfect_db": "dB"},
        meta=_base_meta(scenario, "none"),
    )


def rate_gap_sweep(scenario: Scenario, alpha_list, beta_other_grid) -> SweepResult:
    """Per-user rate lost to estimate contamination, idealized cells.

    Restricted to beta_other <= 0.1; above that both receivers are
    other-cell-interference limited and the comparison is uninformative.
    """
    alphas = [float(a) for a in alpha_list]
    if any(not 0.0 < a <= 1.5 for a in alphas):
        raise InvalidInputError("alpha values must lie in (0, 1.5]")
    if any(b <= a for a, b in zip(alphas, alphas[1:])):
        raise InvalidInputError("alpha values must be strictly increasing")
    betas = [float(b) for b in beta_other_grid]
    if any(not 0.0 < b <= 0.1 for b in betas):
        raise InvalidInputError("beta_other grid must lie in (0, 0.1]")
    rows = []
    for a in alphas:
        for b in betas:
            dist, profile = idealized_gains(scenario.cells, b)
            rep = asymptotic_report(profile, dist, a, scenario.noise_var)
            gap = np.log2(1.0 + rep.mmse_perfect) - np.log2(1.0 + rep.mmse_pilot)
            rows.append((a, b, float(gap)))
    return SweepResult(
        columns=["alpha", "beta_other", "rate_gap"],
        rows=rows,
        units={"alpha": "ratio", "beta_other": "ratio",
               "rate_gap": "bits/symbol"},
        meta=_base_meta(scenario, "none"),
    )


# ---------------------------------------------------------------------------
# Monte Carlo machinery
# ---------------------------------------------------------------------------

def _estimate_for_mode(real, mode: str, pilot_snr: float, rng):
    if mode == MODE_NOISELESS:
        return pilot_estimate_noiseless(real)
    if mode == MODE_NOISY:
        return pilot_estimate_noisy(real, pilot_snr, rng)
    if mode == MODE_TRAINING:
        pilots = generate_pilot_sequences(real.K, real.B, rng, pilot_snr)
        return training_based_estimate(real, pilots, rng)
    raise InvalidInputError(f"unknown estimate mode {mode!r}")


def run_trial(scenario: Scenario, M: int, mode: str, filters,
              rng_channel, rng_pilot) -> dict[str, float]:
    """One Monte Carlo trial: draw, estimate, filter, measure."""
    real = draw_channels(scenario, M, rng_channel)
    est = _estimate_for_mode(real, mode, scenario.pilot.pilot_snr, rng_pilot)
    theta1, _ = theta_effective(real)
    out = {}
    for f in filters:
        if f == FILTER_MF:
            filt = matched_filter(est)
        elif f == FILTER_MMSE:
            theta2 = theta2_from_estimates(real, est)
            filt = mmse_filter_pilot(est, real.gains, theta1, theta2,
                                     scenario.noise_var)
        elif f == FILTER_MMSE_PERFECT:
            filt = mmse_filter_perfect(real, theta1, scenario.noise_var)
        else:
            raise InvalidInputError(f"unknown filter {f!r}")
        out[f] = empirical_sinr(filt, real).sinr
    return out


def monte_carlo_sweep(scenario: Scenario, M: int, alpha_grid, trials: int,
                      filters=ALL_FILTERS, estimate_mode: str = "noiseless",
                      master_seed: int = 0) -> dict[tuple[float, str], np.ndarray]:
    """Empirical SINR samples per (alpha, filter).

    Channel and gain draws for a trial come from one substream, pilot
    noise from another, so the three estimate modes of the same seed see
    identical channels.
    """
    if trials < 1:
        raise InvalidInputError("trials must be at least 1")
    grid = _check_alpha_grid(alpha_grid)
    mode = ESTIMATE_MODES.get(estimate_mode, estimate_mode)
    if mode not in ESTIMATE_MODES.values():
        raise InvalidInputError(f"unknown estimate mode {estimate_mode!r}")
    filters = tuple(filters)
    samples = {(a, f): np.empty(trials) for a in grid for f in filters}
    for ai, a in enumerate(grid):
        sc = scenario.with_alpha(a)
        for t in range(trials):
            rng_ch = seed_substream(master_seed, f"mc.channel.a{ai}", t)
            rng_pn = seed_substream(master_seed, f"mc.pilot.a{ai}", t)
            out = run_trial(sc, M, mode, filters, rng_ch, rng_pn)
            for f in filters:
                samples[(a, f)][t] = out[f]
    return samples


def monte_carlo_result(scenario: Scenario, M: int, alpha_grid, trials: int,
                       filters=ALL_FILTERS, estimate_mode: str = "noiseless",
                       master_seed: int = 0) -> SweepResult:
    """Monte Carlo sweep as rows of raw per-trial SINRs."""
    samples = monte_carlo_sweep(scenario, M, alpha_grid, trials, filters,
                                estimate_mode, master_seed)
    rows = [(a, f, t, to_db(vals[t]))
            for (a, f), vals in sorted(samples.items())
            for t in range(len(vals))]
    meta = _base_meta(scenario, master_seed)
    meta.update({"antennas": str(M), "trials": str(trials),
                 "estimate": estimate_mode})
    return SweepResult(
        columns=["alpha", "filter", "trial", "sinr_db"],
        rows=rows,
        units={"alpha": "ratio", "filter": "-", "trial": "count",
               "sinr_db": "dB"},
        meta=meta,
    )


# ---------------------------------------------------------------------------
# scalar reductions
# ---------------------------------------------------------------------------

def five_percentile(samples) -> float:
    """Empirical 5% quantile with linear order-statistic interpolation."""
    samples = np.asarray(samples, dtype=float)
    if samples.size < 20:
        raise InvalidInputError("five-percentile needs at least 20 samples")
    return float(np.quantile(samples, 0.05))


def achievable_rate(sinr_samples) -> float:
    """Mean of log2(1 + SINR) over the samples, bits/symbol."""
    samples = np.asarray(sinr_samples, dtype=float)
    if samples.size == 0:
        raise InvalidInputError("rate needs at least one sample")
    return float(np.mean(np.log2(1.0 + samples)))


def sum_rate(alpha: float, M: int, sinr: float) -> float:
    """alpha * M * log2(1 + SINR), bits/symbol for the whole cell."""
    if alpha <= 0.0:
        raise InvalidInputError("alpha must be positive")
    if M < 1:
        raise InvalidInputError("M must be at least 1")
    return float(alpha * M * np.log2(1.0 + sinr))


def training_overhead_factor(scenario: Scenario, K: int) -> float:
    """Fraction of the coherence block left for data after K training symbols.

    Rates ignore this by default (large coherence blocks assumed); callers
    opt in where the training time matters.
    """
    block = scenario.coherence.symbols * scenario.coherence.subcarriers
    if K >= block:
        raise InvalidInputError(
            f"K={K} training symbols exhaust the {block}-symbol coherence block")
    return 1.0 - K / block


# ---------------------------------------------------------------------------
# drop-based runners
# ---------------------------------------------------------------------------

def _drop_profiles(scenario: Scenario, n_drops: int, master_seed: int):
    rng = seed_substream(master_seed, "drops")
    rows = scenario.gain_rows(n_drops, rng)
    return FadingDistribution(rows), rows


def det_eq_sinr_rows(rows: np.ndarray, dist: FadingDistribution, alpha: float,
                     noise_var: float) -> tuple[np.ndarray, np.ndarray]:
    """Limiting pilot-MMSE and perfect-MMSE SINR for every gain row."""
    det = solve_det_eq(dist, alpha, noise_var)
    eta1_star = solve_eta1_perfect(dist, alpha, noise_var)
    total = rows.sum(axis=1)
    signal_bar = rows[:, 0] ** 2 / total
    pilot_bar = (rows[:, 1:] ** 2).sum(axis=1) / total
    pilot = signal_bar / (noise_var + pilot_bar + alpha * det.inter_mmse)
    perfect = rows[:, 0] * eta1_star
    return pilot, perfect


def percentile_sweep(scenario: Scenario, M: int, alpha_grid, trials: int,
                     master_seed: int = 0, n_drops: int = 4000,
                     estimate_mode: str = "noiseless") -> SweepResult:
    """Five-percentile SINR versus loading: simulation and limit side by side."""
    grid = _check_alpha_grid(alpha_grid)
    samples = monte_carlo_sweep(scenario, M, grid, trials,
                                (FILTER_MMSE, FILTER_MMSE_PERFECT),
                                estimate_mode, master_seed)
    dist, rows_gain = _drop_profiles(scenario, n_drops, master_seed)
    rows = []
    for a in grid:
        pilot_det, perfect_det = det_eq_sinr_rows(rows_gain, dist, a,
                                                  scenario.noise_var)
        rows.append((
            a,
            to_db(five_percentile(samples[(a, FILTER_MMSE)])),
            to_db(five_percentile(samples[(a, FILTER_MMSE_PERFECT)])),
            to_db(five_percentile(pilot_det)),
            to_db(five_percentile(perfect_det)),
        ))
    meta = _base_meta(scenario, master_seed)
    meta.update({"antennas": str(M), "trials": str(trials),
                 "drops": str(n_drops), "estimate": estimate_mode})
    return SweepResult(
        columns=["alpha", "five_pct_mmse_mc_db", "five_pct_perfect_mc_db",
                 "five_pct_mmse_det_db", "five_pct_perfect_det_db"],
        rows=rows,
        units={"alpha": "ratio", "five_pct_mmse_mc_db": "dB",
               "five_pct_perfect_mc_db": "dB", "five_pct_mmse_det_db": "dB",
               "five_pct_perfect_det_db": "dB"},
        meta=meta,
    )


def rate_table(scenario: Scenario, alpha_grid, master_seed: int = 0,
               n_drops: int = 10_000, M: int | None = None,
               trials: int | None = None,
               estimate_mode: str = "noiseless") -> SweepResult:
    """Achievable rate per user: limit values, plus simulation when asked.

    The limit columns average instantaneous rates over the drop profiles.
    Simulation columns need K = round(alpha*M) >= 3; below that the
    finite-system table is not reproduced, it is refused.
    """
    grid = _check_alpha_grid(alpha_grid)
    dist, rows_gain = _drop_profiles(scenario, n_drops, master_seed)
    mc = None
    if trials is not None:
        if M is None:
            raise InvalidInputError("simulation rates need an antenna count")
        for a in grid:
            if users_per_cell(a, M) < 3:
                raise ScenarioError(
                    f"alpha={a}, M={M} gives fewer than 3 users per cell; "
                    "refusing to extrapolate the rate table")
        mc = monte_carlo_sweep(scenario, M, grid, trials,
                               (FILTER_MMSE, FILTER_MMSE_PERFECT),
                               estimate_mode, master_seed)
    rows = []
    for a in grid:
        pilot_det, perfect_det = det_eq_sinr_rows(rows_gain, dist, a,
                                                  scenario.noise_var)
        row = (a, achievable_rate(pilot_det), achievable_rate(perfect_det))
        if mc is not None:
            row = row + (achievable_rate(mc[(a, FILTER_MMSE)]),
                         achievable_rate(mc[(a, FILTER_MMSE_PERFECT)]))
        rows.append(row)
    columns = ["alpha", "rate_pilot", "rate_perfect"]
    units = {"alpha": "ratio", "rate_pilot": "bits/symbol",
             "rate_perfect": "bits/symbol"}
    if mc is not None:
        columns += ["rate_pilot_mc", "rate_perfect_mc"]
        units.update({"rate_pilot_mc": "bits/symbol",
                      "rate_perfect_mc": "bits/symbol"})
    meta = _base_meta(scenario, master_seed)
    meta.update({"drops": str(n_drops)})
    if mc is not None:
        meta.update({"antennas": str(M), "trials": str(trials),
                     "estimate": estimate_mode})
    return SweepResult(columns=columns, rows=rows, units=units, meta=meta)
