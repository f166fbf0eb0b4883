import numpy as np
import pytest

from ulmimo import asymptotic as la
from ulmimo import experiments as ex
from ulmimo.errors import InvalidInputError, ScenarioError
from ulmimo.geometry import idealized_gains
from ulmimo.scenario import parse_scenario


@pytest.fixture(scope="module")
def idealized_01():
    return parse_scenario("idealized-01")


class TestScalarReductions:
    def test_five_percentile_constant(self):
        assert ex.five_percentile(np.full(50, 3.7)) == 3.7

    def test_five_percentile_order_statistics(self):
        # linear interpolation between order statistics on 1..100
        assert ex.five_percentile(np.arange(1.0, 101.0)) == pytest.approx(5.95)

    def test_five_percentile_needs_samples(self):
        with pytest.raises(InvalidInputError):
            ex.five_percentile(np.ones(19))

    def test_rate_constant_unit_sinr(self):
        assert ex.achievable_rate(np.ones(10)) == pytest.approx(1.0)

    def test_rate_empty_rejected(self):
        with pytest.raises(InvalidInputError):
            ex.achievable_rate([])

    def test_sum_rate_trivial(self):
        assert ex.sum_rate(1.0, 1, 1.0) == pytest.approx(1.0)

    def test_sum_rate_validation(self):
        with pytest.raises(InvalidInputError):
            ex.sum_rate(0.0, 10, 1.0)
        with pytest.raises(InvalidInputError):
            ex.sum_rate(0.5, 0, 1.0)


class TestAsymptoticSweep:
    def test_mmse_between_mf_and_perfect(self, idealized_01):
        res = ex.asymptotic_sweep(idealized_01, [0.1, 0.3, 0.5, 0.8, 1.0, 1.3])
        mf = res.column("sinr_mf_pilot_db")
        mmse = res.column("sinr_mmse_pilot_db")
        per = res.column("sinr_mmse_perfect_db")
        assert (mf <= mmse + 1e-9).all()
        assert (mmse <= per + 1e-9).all()

    def test_grid_validation(self, idealized_01):
        with pytest.raises(InvalidInputError):
            ex.asymptotic_sweep(idealized_01, [0.0, 0.5])
        with pytest.raises(InvalidInputError):
            ex.asymptotic_sweep(idealized_01, [0.5, 0.5])
        with pytest.raises(InvalidInputError):
            ex.asymptotic_sweep(idealized_01, [0.5, 1.6])

    def test_drop_scenario_rejected(self):
        sc = parse_scenario("cost231-7cell")
        with pytest.raises(ScenarioError):
            ex.asymptotic_sweep(sc, [0.5])

    def test_rows_match_direct_evaluation(self, idealized_01):
        res = ex.asymptotic_sweep(idealized_01, [0.5])
        dist, profile = idealized_gains(7, 0.01)
        rep = la.asymptotic_report(profile, dist, 0.5, 0.01)
        assert res.rows[0][1] == rep.mf_pilot_db
        assert res.rows[0][2] == rep.mmse_pilot_db
        assert res.rows[0][3] == rep.mmse_perfect_db


class TestSumRateCurve:
    def test_interior_maximum(self, idealized_01):
        grid = [round(0.05 * i, 2) for i in range(1, 25)]  # (0, 1.2]
        res = ex.asymptotic_sweep(idealized_01, grid)
        rates = [ex.sum_rate(a, 50, la.from_db(db))
                 for a, db in zip(res.column("alpha"),
                                  res.column("sinr_mmse_pilot_db"))]
        peak = int(np.argmax(rates))
        assert 0 < peak < len(rates) - 1


class TestRateGap:
    def test_strong_interference_small_gap(self, idealized_01):
        res = ex.rate_gap_sweep(idealized_01, [1.0], [0.1])
        gap = res.rows[0][2]
        assert gap == pytest.approx(0.4, abs=0.1)

    def test_gap_decreases_with_alpha(self, idealized_01):
        res = ex.rate_gap_sweep(idealized_01, [0.2, 1.0], [0.05])
        gaps = {row[0]: row[2] for row in res.rows}
        assert gaps[0.2] > gaps[1.0]

    def test_gap_vanishes_with_contamination(self, idealized_01):
        # exact estimates in the limit of no other-cell power; the gap is
        # not monotone across the whole range (it peaks mid-band)
        res = ex.rate_gap_sweep(idealized_01, [0.5], [0.0001, 0.001, 0.01])
        gaps = [row[2] for row in res.rows]
        assert gaps[0] < gaps[1] < gaps[2]
        assert gaps[0] < 0.05

    def test_beta_grid_validated(self, idealized_01):
        with pytest.raises(InvalidInputError):
            ex.rate_gap_sweep(idealized_01, [0.5], [0.2])


class TestMonteCarloSweep:
    def test_exact_rerun_determinism(self, idealized_01):
        a = ex.monte_carlo_sweep(idealized_01, 16, [0.5], 5, master_seed=9)
        b = ex.monte_carlo_sweep(idealized_01, 16, [0.5], 5, master_seed=9)
        for key in a:
            assert np.array_equal(a[key], b[key])

    def test_single_trial_reproducible(self, idealized_01):
        a = ex.monte_carlo_sweep(idealized_01, 16, [0.5], 1, master_seed=3)
        b = ex.monte_carlo_sweep(idealized_01, 16, [0.5], 1, master_seed=3)
        assert a[(0.5, "mf")][0] == b[(0.5, "mf")][0]

    def test_channels_paired_across_estimate_modes(self, idealized_01):
        # perfect-CSI filter ignores the estimate, so identical channel
        # substreams must give identical samples in every mode
        kwargs = dict(filters=("mmse-perfect",), master_seed=4)
        a = ex.monte_carlo_sweep(idealized_01, 16, [0.5], 4,
                                 estimate_mode="noiseless", **kwargs)
        b = ex.monte_carlo_sweep(idealized_01, 16, [0.5], 4,
                                 estimate_mode="noisy", **kwargs)
        c = ex.monte_carlo_sweep(idealized_01, 16, [0.5], 4,
                                 estimate_mode="training", **kwargs)
        assert np.array_equal(a[(0.5, "mmse-perfect")], b[(0.5, "mmse-perfect")])
        assert np.array_equal(a[(0.5, "mmse-perfect")], c[(0.5, "mmse-perfect")])

    def test_unknown_mode_rejected(self, idealized_01):
        with pytest.raises(InvalidInputError):
            ex.monte_carlo_sweep(idealized_01, 16, [0.5], 2,
                                 estimate_mode="psychic")

    def test_gap_to_limit_shrinks_with_antennas(self, idealized_01):
        dist, profile = idealized_gains(7, 0.01)
        gaps = {}
        for M in (20, 200):
            samples = ex.monte_carlo_sweep(idealized_01, M, [0.5], 200,
                                           master_seed=11)
            rep = la.asymptotic_report(profile, dist, 0.5, 0.01)
            theory = {"mf": rep.mf_pilot_db, "mmse": rep.mmse_pilot_db,
                      "mmse-perfect": rep.mmse_perfect_db}
            gaps[M] = {f: abs(la.to_db(np.median(samples[(0.5, f)])) - theory[f])
                       for f in theory}
        for f in gaps[20]:
            assert gaps[200][f] <= gaps[20][f]


class TestDropRunners:
    def test_percentile_sweep_structure(self):
        sc = parse_scenario("cost231-7cell")
        res = ex.percentile_sweep(sc, 20, [0.5], trials=60, master_seed=5,
                                  n_drops=400)
        assert res.columns[0] == "alpha"
        row = res.rows[0]
        # Monte Carlo and limit five-percentiles in the same ballpark
        assert abs(row[1] - row[3]) < 3.0
        assert abs(row[2] - row[4]) < 3.0

    def test_rate_table_theory_columns(self):
        sc = parse_scenario("cost231-7cell")
        res = ex.rate_table(sc, [0.5, 1.0], master_seed=6, n_drops=2000)
        pilot = res.column("rate_pilot")
        perfect = res.column("rate_perfect")
        assert (perfect > pilot).all()
        assert (np.diff(pilot) < 0).all()  # more load, less rate per user

    def test_rate_table_idealized_is_deterministic_rate(self, idealized_01):
        res = ex.rate_table(idealized_01, [0.5], master_seed=0, n_drops=10)
        dist, profile = idealized_gains(7, 0.01)
        det = la.solve_det_eq(dist, 0.5, 0.01)
        expected = np.log2(1.0 + la.sinr_mmse_pilot(profile, det))
        assert res.rows[0][1] == pytest.approx(expected, rel=1e-12)

    def test_rate_table_refuses_tiny_cells(self):
        sc = parse_scenario("cost231-7cell")
        with pytest.raises(ScenarioError, match="fewer than 3"):
            ex.rate_table(sc, [0.1], master_seed=0, n_drops=100, M=10, trials=5)

    def test_training_five_percentile_tracks_repeated_pilot_theory(self):
        # full per-cell training at M=50 stays within half a dB of the
        # repeated-pilot deterministic equivalent at the fifth percentile
        sc = parse_scenario("cost231-7cell")
        from ulmimo.fading import FadingDistribution
        from ulmimo.rng import seed_substream
        rows = sc.gain_rows(8000, seed_substream(1, "drops"))
        dist = FadingDistribution(rows)
        pilot_det, _ = ex.det_eq_sinr_rows(rows, dist, 0.5, sc.noise_var)
        theory = la.to_db(ex.five_percentile(pilot_det))
        samples = ex.monte_carlo_sweep(sc, 50, [0.5], 1200, ("mmse",),
                                       "training", 1)
        mc_val = la.to_db(ex.five_percentile(samples[(0.5, "mmse")]))
        assert abs(mc_val - theory) <= 0.5

    def test_ten_antenna_rates_match_reference_bands(self):
        # small-system simulation stays near the reference table at alpha=0.5:
        # per-user rates (pilot, perfect) close to (2.9, 3.6) within +-0.5
        sc = parse_scenario("cost231-7cell")
        res = ex.rate_table(sc, [0.5], master_seed=7, n_drops=2000, M=10,
                            trials=800)
        pilot_mc = res.column("rate_pilot_mc")[0]
        perfect_mc = res.column("rate_perfect_mc")[0]
        assert abs(pilot_mc - 2.9) <= 0.5
        assert abs(perfect_mc - 3.6) <= 0.5


class TestCsv:
    def test_header_and_roundtrip(self, tmp_path, idealized_01):
        res = ex.asymptotic_sweep(idealized_01, [0.5, 1.0])
        path = tmp_path / "sweep.csv"
        ex.write_csv(res, path)
        text = path.read_text().splitlines()
        assert text[0].startswith("# ulmimo-csv schema=1")
        assert "scenario_sha=" in text[0] and "units=" in text[0]
        assert text[1].split(",")[0] == "alpha"
        # shortest-roundtrip floats: parsing a cell recovers the exact value
        value = float(text[2].split(",")[1])
        assert value == res.rows[0][1]

    def test_byte_identical_rewrites(self, tmp_path, idealized_01):
        res = ex.asymptotic_sweep(idealized_01, [0.25, 0.75])
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        ex.write_csv(res, p1)
        ex.write_csv(res, p2)
        assert p1.read_bytes() == p2.read_bytes()
