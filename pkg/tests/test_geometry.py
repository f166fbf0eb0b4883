import numpy as np
import pytest
from scipy.stats import chisquare

from ulmimo import geometry as geo
from ulmimo.errors import InvalidInputError
from ulmimo.rng import seed_substream

SQ3 = np.sqrt(3.0)


class TestHexLayout:
    def test_single_cell(self):
        layout = geo.hex_layout(1, 500.0)
        assert layout.num_cells == 1
        assert np.allclose(layout.centers, 0.0)

    def test_seven_cell_ring_distance(self):
        layout = geo.hex_layout(7, 1000.0)
        d = np.linalg.norm(layout.centers[1:], axis=1)
        assert np.allclose(d, SQ3 * 1000.0)
        assert np.allclose(d, 1732.0508, atol=1e-3)

    def test_unsupported_count(self):
        with pytest.raises(InvalidInputError):
            geo.hex_layout(3, 1000.0)

    def test_cells_tile_without_overlap(self):
        layout = geo.hex_layout(7, 1000.0)
        rng = np.random.default_rng(0)
        pts = rng.uniform(-2600, 2600, size=(20_000, 2))
        counts = np.zeros(len(pts), dtype=int)
        for center in layout.centers:
            counts += geo.points_in_hex(pts, center, layout.radius_m)
        assert counts.max() <= 1
        # and the layout actually covers the central region
        near = np.linalg.norm(pts, axis=1) < 800.0
        assert counts[near].all()


class TestDropUsers:
    def test_deterministic(self):
        layout = geo.hex_layout(7, 1000.0)
        a = geo.drop_users(layout, 13, seed_substream(5, "drop"))
        b = geo.drop_users(layout, 13, seed_substream(5, "drop"))
        assert np.array_equal(a.positions, b.positions)

    def test_positions_inside_cells_and_outside_exclusion(self):
        layout = geo.hex_layout(7, 1000.0)
        drop = geo.drop_users(layout, 200, seed_substream(6, "drop"))
        for j, center in enumerate(layout.centers):
            assert geo.points_in_hex(drop.positions[j], center, 1000.0).all()
            d = np.linalg.norm(drop.positions[j] - center, axis=1)
            assert (d >= 35.0).all()

    def test_uniformity_chi_square_sextants(self):
        layout = geo.hex_layout(1, 1000.0)
        drop = geo.drop_users(layout, 100_000, seed_substream(7, "drop"))
        angles = np.arctan2(drop.positions[0, :, 1], drop.positions[0, :, 0])
        sextant = ((angles + np.pi) // (np.pi / 3)).astype(int).clip(0, 5)
        counts = np.bincount(sextant, minlength=6)
        assert chisquare(counts).pvalue > 0.01


class TestPathloss:
    def test_reference_distance_frozen_constant(self):
        # urban formula at the frozen parameter set, evaluated by hand once:
        # 46.3 + 33.9 log10(1900) - 13.82 log10(30) - 0.045088 at 1 km
        params = geo.Cost231Params()
        assert geo.cost231_pathloss_db(1000.0, params) == pytest.approx(
            136.99084, abs=1e-4)

    def test_doubling_slope(self):
        params = geo.Cost231Params()
        slope = 44.9 - 6.55 * np.log10(30.0)
        got = (geo.cost231_pathloss_db(2000.0, params)
               - geo.cost231_pathloss_db(1000.0, params))
        assert got == pytest.approx(slope * np.log10(2.0), rel=1e-12)
        assert got == pytest.approx(10.6043, abs=1e-3)

    def test_monotone_in_distance(self):
        params = geo.Cost231Params()
        d = np.linspace(35.0, 3000.0, 200)
        pl = geo.cost231_pathloss_db(d, params)
        assert (np.diff(pl) > 0).all()

    def test_repeatable(self):
        params = geo.Cost231Params()
        assert (geo.cost231_pathloss_db(777.0, params)
                == geo.cost231_pathloss_db(777.0, params))

    def test_below_exclusion_rejected(self):
        with pytest.raises(InvalidInputError):
            geo.cost231_pathloss_db(10.0, geo.Cost231Params())

    def test_validity_ranges_enforced(self):
        with pytest.raises(InvalidInputError):
            geo.Cost231Params(carrier_freq_mhz=900.0)
        with pytest.raises(InvalidInputError):
            geo.Cost231Params(bs_height_m=10.0)


class TestLargeScaleGains:
    def _drop_at(self, positions):
        layout = geo.hex_layout(7, 1000.0)
        pos = np.zeros((7, positions.shape[0], 2))
        pos[:] = layout.centers[:, None, :]  # placeholder, overwritten below
        pos[0] = positions
        for j in range(1, 7):
            pos[j] = layout.centers[j] + np.array([100.0, 50.0])
        return geo.UserDrop(positions=pos, layout=layout, exclusion_m=35.0)

    def test_equidistant_users_equal_gain(self):
        drop = self._drop_at(np.array([[300.0, 0.0], [0.0, 300.0]]))
        gains = geo.large_scale_gains(drop, geo.Cost231Params(),
                                      seed_substream(8, "sh"))
        assert gains[0, 0] == pytest.approx(gains[0, 1], rel=1e-12)

    def test_gain_matches_link_budget_formula(self):
        params = geo.Cost231Params(noise_bandwidth_hz=760.0)
        drop = self._drop_at(np.array([[500.0, 0.0]]))
        gains = geo.large_scale_gains(drop, params, seed_substream(9, "sh"))
        pl = geo.cost231_pathloss_db(500.0, params)
        expected = 10 ** (-pl / 10) * 10 ** (23.0 / 10) / (10 ** (-174.0 / 10) * 760.0)
        assert gains[0, 0] == pytest.approx(expected, rel=1e-12)

    def test_gain_ratio_equals_pathloss_difference(self):
        # a cell-edge user's own-BS vs interferer-BS gains differ by exactly
        # the path-loss difference of the two distances
        layout = geo.hex_layout(7, 1000.0)
        edge = layout.centers[1] / 2.0  # midpoint toward neighbour 1
        pos = np.zeros((7, 1, 2))
        pos[0, 0] = edge
        for j in range(1, 7):
            pos[j, 0] = layout.centers[j]
        drop = geo.UserDrop(positions=pos, layout=layout, exclusion_m=35.0)
        params = geo.Cost231Params()
        gains = geo.large_scale_gains(drop, params, seed_substream(10, "sh"))
        d_center = np.linalg.norm(edge)
        d_neighbor = np.linalg.norm(layout.centers[1])
        delta_db = (geo.cost231_pathloss_db(d_neighbor, params)
                    - geo.cost231_pathloss_db(d_center, params))
        assert 10 * np.log10(gains[0, 0] / gains[1, 0]) == pytest.approx(
            delta_db, rel=1e-9)

    def test_shadowing_off_is_deterministic(self):
        drop = self._drop_at(np.array([[400.0, 100.0]]))
        g1 = geo.large_scale_gains(drop, geo.Cost231Params(), seed_substream(1, "a"))
        g2 = geo.large_scale_gains(drop, geo.Cost231Params(), seed_substream(2, "b"))
        assert np.array_equal(g1, g2)

    def test_shadowing_reproducible_per_seed(self):
        drop = self._drop_at(np.array([[400.0, 100.0]]))
        params = geo.Cost231Params(shadowing_sigma_db=8.0)
        g1 = geo.large_scale_gains(drop, params, seed_substream(3, "s"))
        g2 = geo.large_scale_gains(drop, params, seed_substream(3, "s"))
        g3 = geo.large_scale_gains(drop, params, seed_substream(4, "s"))
        assert np.array_equal(g1, g2)
        assert not np.array_equal(g1, g3)


class TestIdealizedGains:
    def test_seven_cell_total(self):
        dist, profile = geo.idealized_gains(7, 0.01)
        assert dist.kind == "point-mass"
        assert dist.total[0] == pytest.approx(1.06)
        assert profile.total_gain == pytest.approx(1.06)

    def test_single_cell(self):
        dist, profile = geo.idealized_gains(1, 0.5)
        assert dist.num_cells == 1
        assert profile.pilot_bar == 0.0

    def test_effective_pilot_power(self):
        _, profile = geo.idealized_gains(7, 0.1)
        assert profile.pilot_bar == pytest.approx(6 * 0.01 / 1.6)

    def test_range_enforced(self):
        with pytest.raises(InvalidInputError):
            geo.idealized_gains(7, 1.5)


class TestGainRows:
    def test_shape_and_determinism(self):
        layout = geo.hex_layout(7, 1000.0)
        params = geo.Cost231Params(noise_bandwidth_hz=760.0)
        a = geo.cost231_gain_rows(layout, params, 50, seed_substream(11, "r"))
        b = geo.cost231_gain_rows(layout, params, 50, seed_substream(11, "r"))
        assert a.shape == (50, 7)
        assert np.array_equal(a, b)
        assert (a > 0).all()

    def test_own_cell_gain_dominates_typically(self):
        layout = geo.hex_layout(7, 1000.0)
        params = geo.Cost231Params(noise_bandwidth_hz=760.0)
        rows = geo.cost231_gain_rows(layout, params, 400, seed_substream(12, "r"))
        assert np.median(rows[:, 0] / rows[:, 1:].max(axis=1)) > 1.0
