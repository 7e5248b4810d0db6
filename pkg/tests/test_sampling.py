"""Seed-derived generators, geometry draws, and boosted timelike directions."""

import numpy as np
import pytest

from straindec import (
    LorentzianMetric,
    RiemannianMetric,
    derive_rng,
    rank_of_map,
    sample_geometry,
    sample_timelike_directions,
)
from straindec.sampling import (
    assemble_directions,
    draw_direction_params,
    draw_geometry_arrays,
)


class TestDeriveRng:
    def test_pure_function_of_seed_and_index(self):
        a = derive_rng(123, 7).uniform(size=16)
        b = derive_rng(123, 7).uniform(size=16)
        np.testing.assert_array_equal(a, b)

    def test_indices_decorrelate_streams(self):
        a = derive_rng(123, 0).uniform(size=16)
        b = derive_rng(123, 1).uniform(size=16)
        assert np.max(np.abs(a - b)) > 1e-3

    def test_seed_bounds(self):
        with pytest.raises(ValueError):
            derive_rng(-1, 0)
        with pytest.raises(ValueError):
            derive_rng(2**64, 0)
        with pytest.raises(ValueError):
            derive_rng(0, -1)
        derive_rng(2**64 - 1, 0)  # top of the range is fine


class TestGeometryDraws:
    def test_shapes_and_validity(self):
        g, h, dphi, retries = draw_geometry_arrays(derive_rng(5, 0), 4, 3)
        assert g.shape == (4, 4) and h.shape == (3, 3) and dphi.shape == (3, 4)
        assert retries >= 0
        LorentzianMetric(g)
        RiemannianMetric(h)
        assert np.max(np.abs(dphi)) <= 1.0

    def test_bitwise_deterministic(self):
        a = draw_geometry_arrays(derive_rng(5, 3), 3, 2)
        b = draw_geometry_arrays(derive_rng(5, 3), 3, 2)
        for x, y in zip(a[:3], b[:3]):
            np.testing.assert_array_equal(x, y)

    def test_entry_range_bounds_dphi(self):
        _, _, dphi, _ = draw_geometry_arrays(derive_rng(5, 0), 3, 2, entry_range=0.25)
        assert np.max(np.abs(dphi)) <= 0.25

    def test_entry_range_zero_gives_zero_map(self):
        _, _, dphi, _ = draw_geometry_arrays(derive_rng(5, 0), 3, 2, entry_range=0.0)
        np.testing.assert_array_equal(dphi, np.zeros((2, 3)))

    def test_rank_override_exact(self):
        for r in (0, 1, 2):
            _, _, dphi, _ = draw_geometry_arrays(
                derive_rng(5, 1), 3, 2, rank_override=r
            )
            assert rank_of_map(dphi) == r
        _, _, dphi, _ = draw_geometry_arrays(derive_rng(5, 1), 3, 2, rank_override=0)
        np.testing.assert_array_equal(dphi, np.zeros((2, 3)))

    def test_validation(self):
        rng = derive_rng(5, 0)
        with pytest.raises(ValueError):
            draw_geometry_arrays(rng, 0, 2)
        with pytest.raises(ValueError):
            draw_geometry_arrays(rng, 2, 2, entry_range=-1.0)
        with pytest.raises(ValueError):
            draw_geometry_arrays(rng, 2, 2, rank_override=3)

    def test_sample_geometry_wraps_arrays(self):
        geom = sample_geometry(3, 2, rng=derive_rng(5, 4))
        assert geom.dim == 3 and geom.target_dim == 2
        g2, h2, d2, _ = draw_geometry_arrays(derive_rng(5, 4), 3, 2)
        np.testing.assert_array_equal(geom.metric.entries, g2)
        np.testing.assert_array_equal(geom.dphi, d2)


class TestDirections:
    def test_param_validation(self):
        rng = derive_rng(1, 0)
        with pytest.raises(ValueError):
            draw_direction_params(rng, 0, 2)
        with pytest.raises(ValueError):
            draw_direction_params(rng, 4, 2, boost_cap=-1.0)

    def test_unit_timelike_and_future_pointing(self):
        for index in range(5):
            rng = derive_rng(42, index)
            g, _, _, _ = draw_geometry_arrays(rng, 4, 2)
            metric = LorentzianMetric(g)
            from straindec import canonical_frame

            frame = canonical_frame(metric)
            xs = sample_timelike_directions(frame.basis, rng, 16)
            assert xs.shape == (16, 4)
            for x in xs:
                assert metric.inner(x, x) == pytest.approx(-1.0, abs=1e-9)
                # future-pointing: negative product with the frame's time leg
                assert metric.inner(x, frame.vector(0)) < 0.0

    def test_boost_cap_limits_gamma(self):
        metric = LorentzianMetric(np.diag([-1.0, 1.0, 1.0]))
        basis = np.eye(3)
        xs = sample_timelike_directions(basis, derive_rng(3, 0), 64, boost_cap=2.0)
        assert np.max(np.abs(xs[:, 0])) <= np.cosh(2.0) + 1e-12

    def test_zero_boost_returns_time_leg(self):
        basis = np.eye(2)
        xs = sample_timelike_directions(basis, derive_rng(3, 0), 4, boost_cap=0.0)
        np.testing.assert_allclose(xs, np.tile([1.0, 0.0], (4, 1)), atol=1e-12)

    def test_dimension_one_always_time_leg(self):
        basis = np.array([[2.0]])
        xs = sample_timelike_directions(basis, derive_rng(3, 0), 3)
        np.testing.assert_array_equal(xs, np.full((3, 1), 2.0))

    def test_zero_normal_falls_back_to_first_spatial_leg(self):
        basis = np.eye(3)
        xs = assemble_directions(basis, np.array([1.0]), np.zeros((1, 2)))
        want = np.array([[np.cosh(1.0), np.sinh(1.0), 0.0]])
        np.testing.assert_allclose(xs, want, atol=1e-12)
