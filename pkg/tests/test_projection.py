"""Feasible-set clipping for the dual iterates."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sdot.measures import DiscreteMeasure, RngStream
from sdot.projection import (
    AnchoredProjection,
    BoxProjection,
    NoProjection,
    make_projection,
)


def line_target(M=4):
    y = np.arange(M, dtype=float)[:, None]
    return DiscreteMeasure(points=y, weights=np.full(M, 1.0 / M))


class TestBoxProjection:
    def test_frozen_clip(self):
        proj = BoxProjection(radius_bound=1.0, n_atoms=2)
        out = proj.project(np.array([-1.0, 3.0]))
        assert np.array_equal(out, [0.0, 2.0])

    def test_bounds(self):
        proj = BoxProjection(radius_bound=2.0, n_atoms=3)
        assert np.array_equal(proj.lower, np.zeros(3))
        assert np.array_equal(proj.upper, np.full(3, 8.0))
        assert proj.diameter == pytest.approx(8.0 * np.sqrt(3))

    def test_interior_point_unchanged(self):
        proj = BoxProjection(radius_bound=1.0, n_atoms=2)
        g = np.array([0.3, 1.7])
        assert np.array_equal(proj.project(g), g)
        assert proj.contains(g)
        assert not proj.contains(np.array([-0.1, 0.0]))

    def test_requires_positive_radius(self):
        with pytest.raises(ValueError):
            BoxProjection(radius_bound=0.0, n_atoms=2)


class TestAnchoredProjection:
    def test_anchor_coordinate_is_pinned(self):
        proj = AnchoredProjection(radius_bound=1.0, target=line_target(4))
        g = np.array([0.7, 0.2, -0.1, 0.4])
        out = proj.project(g)
        assert out[0] == 0.0
        assert proj.contains(out)

    def test_bounds_scale_with_distance_to_anchor(self):
        proj = AnchoredProjection(radius_bound=2.0, target=line_target(4))
        # |g_j| <= R * ||y_anchor - y_j|| with atoms at 0,1,2,3
        assert np.allclose(proj.upper, [0.0, 2.0, 4.0, 6.0])
        assert np.allclose(proj.lower, [0.0, -2.0, -4.0, -6.0])
        assert proj.diameter == pytest.approx(2 * 2.0 * np.sqrt(1 + 4 + 9))

    def test_nondefault_anchor(self):
        proj = AnchoredProjection(radius_bound=1.0, target=line_target(3), anchor=2)
        assert proj.upper[2] == 0.0
        assert np.allclose(proj.upper, [2.0, 1.0, 0.0])
        out = proj.project(np.array([5.0, 5.0, 5.0]))
        assert np.array_equal(out, [2.0, 1.0, 0.0])

    def test_anchor_out_of_range(self):
        with pytest.raises(ValueError):
            AnchoredProjection(radius_bound=1.0, target=line_target(3), anchor=3)

    def test_idempotent(self):
        proj = AnchoredProjection(radius_bound=1.0, target=line_target(5))
        gen = RngStream(0, 70).generator()
        g = gen.uniform(-10, 10, 5)
        once = proj.project(g)
        assert np.array_equal(proj.project(once), once)


class TestNoProjection:
    def test_identity_copy(self):
        proj = NoProjection(n_atoms=3)
        g = np.array([1.0, -50.0, 1e9])
        out = proj.project(g)
        assert np.array_equal(out, g)
        assert out is not g
        out[0] = 0.0
        assert g[0] == 1.0

    def test_contains_everything(self):
        proj = NoProjection(n_atoms=2)
        assert proj.contains(np.array([1e300, -1e300]))
        assert proj.diameter == np.inf


class TestGeneralProperties:
    @settings(max_examples=50, deadline=None)
    @given(seed=st.integers(0, 10_000), kind=st.sampled_from(["box", "anchored"]))
    def test_nonexpansive(self, seed, kind):
        gen = RngStream(seed, 71).generator()
        M = int(gen.integers(2, 8))
        target = DiscreteMeasure(
            points=gen.random((M, 2)), weights=np.full(M, 1.0 / M)
        )
        proj = make_projection(kind, target=target, radius_bound=1.5)
        a = gen.uniform(-5, 5, M)
        b = gen.uniform(-5, 5, M)
        pa, pb = proj.project(a), proj.project(b)
        assert np.linalg.norm(pa - pb) <= np.linalg.norm(a - b) + 1e-12

    def test_projection_validates_length(self):
        proj = BoxProjection(radius_bound=1.0, n_atoms=3)
        with pytest.raises(ValueError):
            proj.project(np.zeros(4))

    def test_make_projection_dispatch(self):
        target = line_target(3)
        assert isinstance(
            make_projection("box", target=target, radius_bound=1.0), BoxProjection
        )
        assert isinstance(
            make_projection("anchored", target=target, radius_bound=1.0),
            AnchoredProjection,
        )
        assert isinstance(
            make_projection("none", target=target, radius_bound=1.0), NoProjection
        )
        with pytest.raises(ValueError):
            make_projection("other", target=target, radius_bound=1.0)
