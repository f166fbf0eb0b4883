"""Programmatic invariant self-check behind the ``validate`` command.

A small, fast subset of the test suite's property checks, runnable from a
deployed install without pytest.
"""

from __future__ import annotations

import numpy as np

from . import asymptotic as la
from . import montecarlo as mc
from .geometry import idealized_gains
from .rng import seed_substream


def _check_fixed_points(emit) -> bool:
    ok = True
    for beta in (0.001, 0.01, 0.1):
        dist, _ = idealized_gains(7, beta)
        for alpha in (0.0, 0.25, 0.5, 1.0):
            eta1 = la.solve_eta1(dist, alpha, 0.01)
            resid = abs(la.eta1_map(dist, alpha, 0.01, eta1) - eta1) / eta1
            eta2 = la.solve_eta2(dist, alpha, eta1)
            supp = la.interference_suppression(dist, alpha, eta1, eta2)
            e_total = dist.expect(dist.total)
            ok &= resid <= 1e-10
            ok &= eta2 >= eta1 * eta1
            ok &= 0.0 <= supp <= e_total
    emit(f"fixed-point residuals, eta ordering, suppression bounds: "
         f"{'PASS' if ok else 'FAIL'}")
    return ok


def _check_collapse(emit) -> bool:
    dist, profile = idealized_gains(7, 0.01)
    det = la.solve_det_eq(dist, 0.0, 0.01)
    mmse = la.sinr_mmse_pilot(profile, det)
    mf = la.sinr_mf_pilot(profile, dist, 0.0, 0.01)
    ok = mmse == mf
    emit(f"alpha=0 collapse (MMSE == MF): {'PASS' if ok else 'FAIL'}")
    return ok


def _check_single_cell(emit) -> bool:
    dist, profile = idealized_gains(1, 0.5)  # beta_other unused at B=1
    det = la.solve_det_eq(dist, 0.5, 0.01)
    pilot = la.sinr_mmse_pilot(profile, det)
    perfect = la.sinr_mmse_perfect(profile, dist, 0.5, 0.01)
    ok = abs(pilot - perfect) <= 1e-9 * perfect
    emit(f"single-cell pilot == perfect: {'PASS' if ok else 'FAIL'}")
    return ok


def _check_stieltjes(emit) -> bool:
    dist, _ = idealized_gains(7, 0.01)
    det = la.solve_det_eq(dist, 0.5, 0.01)
    z = -(det.theta1_bar + det.theta2_bar + det.noise_var)
    m = la.stieltjes_m(z, dist, 0.5)
    ok = abs(m - det.eta1) <= 1e-8 * det.eta1
    emit(f"stieltjes route agrees with eta1: {'PASS' if ok else 'FAIL'}")
    return ok


def _check_solver_paths(emit) -> bool:
    rng = seed_substream(0, "validate.solver")
    real = mc.ChannelRealization(
        M=3, K=2, B=1,
        small_scale=mc.draw_channel_matrix(1, 2, 3, rng),
        gains=np.array([[1.0, 0.7]]), noise_var=0.01)
    est = mc.pilot_estimate_noiseless(real)
    t1, t2 = mc.theta_effective(real)
    low = mc.mmse_filter_pilot(est, real.gains, t1, t2, 0.01, method="lowrank")
    dense = mc.mmse_filter_pilot(est, real.gains, t1, t2, 0.01, method="dense")
    err = np.linalg.norm(low.weights - dense.weights) / np.linalg.norm(dense.weights)
    ok = err <= 1e-12
    emit(f"structured vs dense filter solve at M=3: {'PASS' if ok else 'FAIL'}")
    return ok


def _check_determinism(emit) -> bool:
    from .experiments import monte_carlo_sweep
    from .scenario import parse_scenario
    sc = parse_scenario("idealized-01")
    a = monte_carlo_sweep(sc, 8, [0.5], 3, master_seed=42)
    b = monte_carlo_sweep(sc, 8, [0.5], 3, master_seed=42)
    ok = all(np.array_equal(a[k], b[k]) for k in a)
    emit(f"seeded rerun determinism: {'PASS' if ok else 'FAIL'}")
    return ok


def run_all(emit=print) -> bool:
    checks = [_check_fixed_points, _check_collapse, _check_single_cell,
              _check_stieltjes, _check_solver_paths, _check_determinism]
    ok = True
    for check in checks:
        ok &= bool(check(emit))
    emit(f"validate: {'all checks passed' if ok else 'FAILURES detected'}")
    return ok
