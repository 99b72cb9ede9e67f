"""Estimator front end: protocol compliance and behavior."""

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from sdot.estimators import map_indices
from sdot.measures import UniformBox, make_example
from sdot.transport import SemiDiscreteTransport


def grid_atoms(M=5):
    _, target, _ = make_example(3, M=M, delta=0.5)
    return target.points


class TestProtocol:
    def test_get_set_params_round_trip(self):
        est = SemiDiscreteTransport(t_max=123, seed=9, omega=2.0)
        params = est.get_params()
        assert params["t_max"] == 123
        assert params["omega"] == 2.0
        est.set_params(t_max=55)
        assert est.t_max == 55

    def test_clone_preserves_params(self):
        est = SemiDiscreteTransport(method="asgd", eps=0.5, t_max=77)
        dup = clone(est)
        assert dup.get_params() == est.get_params()

    def test_not_fitted_errors(self):
        est = SemiDiscreteTransport()
        with pytest.raises(NotFittedError):
            est.predict(np.zeros((2, 1)))
        with pytest.raises(NotFittedError):
            est.transform(np.zeros((2, 1)))
        with pytest.raises(NotFittedError):
            est.estimate_cost(n_mc=10)

    def test_fit_returns_self_and_sets_attributes(self):
        X = grid_atoms()
        est = SemiDiscreteTransport(
            source=UniformBox([0.5], [1.5]), t_max=200, seed=1
        )
        assert est.fit(X) is est
        assert est.n_iter_ == 200
        assert est.n_features_in_ == 1
        assert est.potential_.shape == (5,)
        assert est.potential_avg_.shape == (5,)
        assert est.potential_wavg_ is None
        assert est.config_.resolved
        assert est.target_.n_atoms == 5


class TestFitBehavior:
    def test_default_source_is_unit_box(self):
        rng = np.random.default_rng(0)
        X = rng.random((6, 2))
        est = SemiDiscreteTransport(t_max=100).fit(X)
        assert isinstance(est.source_, UniformBox)
        assert np.array_equal(est.source_.lo, [0.0, 0.0])
        assert np.array_equal(est.source_.hi, [1.0, 1.0])

    def test_sample_weight_normalized(self):
        X = grid_atoms(4)
        est = SemiDiscreteTransport(
            source=UniformBox([0.5], [1.5]), t_max=50
        ).fit(X, sample_weight=[1.0, 1.0, 1.0, 5.0])
        assert np.allclose(est.target_.weights, [0.125, 0.125, 0.125, 0.625])

    def test_sample_weight_validation(self):
        X = grid_atoms(4)
        est = SemiDiscreteTransport(source=UniformBox([0.5], [1.5]), t_max=50)
        with pytest.raises(ValueError):
            est.fit(X, sample_weight=[1.0, 1.0])
        with pytest.raises(ValueError):
            est.fit(X, sample_weight=[0.0, 0.0, 0.0, 0.0])

    def test_method_and_eps_validation(self):
        X = grid_atoms(4)
        src = UniformBox([0.5], [1.5])
        with pytest.raises(ValueError):
            SemiDiscreteTransport(source=src, method="newton", t_max=10).fit(X)
        with pytest.raises(ValueError):
            SemiDiscreteTransport(source=src, method="sgd", t_max=10).fit(X)

    def test_source_dim_mismatch(self):
        X = grid_atoms(4)
        with pytest.raises(ValueError):
            SemiDiscreteTransport(source=UniformBox([0, 0], [1, 1]), t_max=10).fit(X)

    def test_fixed_eps_methods(self):
        X = grid_atoms(4)
        src = UniformBox([0.5], [1.5])
        sgd = SemiDiscreteTransport(source=src, method="sgd", eps=0.1, t_max=100).fit(X)
        assert sgd.potential_avg_ is None
        assert sgd.potential_wavg_ is None
        asgd = SemiDiscreteTransport(source=src, method="asgd", eps=0.1, t_max=100).fit(X)
        assert asgd.potential_avg_ is not None

    def test_omega_tracked_only_for_annealed(self):
        X = grid_atoms(4)
        src = UniformBox([0.5], [1.5])
        est = SemiDiscreteTransport(source=src, omega=2.0, t_max=100).fit(X)
        assert est.potential_wavg_ is not None
        est = SemiDiscreteTransport(
            source=src, method="asgd", eps=0.1, omega=2.0, t_max=100
        ).fit(X)
        assert est.potential_wavg_ is None


class TestPredictTransform:
    def test_predict_matches_map_indices(self):
        X = grid_atoms()
        est = SemiDiscreteTransport(source=UniformBox([0.5], [1.5]), t_max=500).fit(X)
        Q = np.linspace(0.5, 1.5, 40)[:, None]
        expected = map_indices(est.potential_avg_, est.target_, Q)
        assert np.array_equal(est.predict(Q), expected)

    def test_weighted_average_drives_predictions(self):
        X = grid_atoms()
        est = SemiDiscreteTransport(
            source=UniformBox([0.5], [1.5]), t_max=500, omega=2.0
        ).fit(X)
        Q = np.linspace(0.5, 1.5, 40)[:, None]
        expected = map_indices(est.potential_wavg_, est.target_, Q)
        assert np.array_equal(est.predict(Q), expected)

    def test_transform_hard_returns_atoms(self):
        X = grid_atoms()
        est = SemiDiscreteTransport(source=UniformBox([0.5], [1.5]), t_max=500).fit(X)
        Q = np.linspace(0.5, 1.5, 17)[:, None]
        out = est.transform(Q)
        assert out.shape == Q.shape
        atoms = {float(v) for v in est.target_.points.ravel()}
        assert all(float(v) in atoms for v in out.ravel())

    def test_transform_soft_interpolates(self):
        X = grid_atoms()
        soft = SemiDiscreteTransport(
            source=UniformBox([0.5], [1.5]), t_max=500, map_eps=0.5
        ).fit(X)
        Q = np.linspace(0.5, 1.5, 17)[:, None]
        out = soft.transform(Q)
        atoms = {float(v) for v in soft.target_.points.ravel()}
        assert any(float(v) not in atoms for v in out.ravel())
        assert np.all(out >= soft.target_.points.min())
        assert np.all(out <= soft.target_.points.max())

    def test_deterministic_across_fits(self):
        X = grid_atoms()
        a = SemiDiscreteTransport(source=UniformBox([0.5], [1.5]), t_max=300, seed=4).fit(X)
        b = SemiDiscreteTransport(source=UniformBox([0.5], [1.5]), t_max=300, seed=4).fit(X)
        assert np.array_equal(a.potential_, b.potential_)
        assert np.array_equal(a.potential_avg_, b.potential_avg_)
        c = SemiDiscreteTransport(source=UniformBox([0.5], [1.5]), t_max=300, seed=5).fit(X)
        assert not np.array_equal(a.potential_, c.potential_)


class TestCost:
    def test_estimate_cost_near_truth_when_converged(self):
        source, target, truth = make_example(3, M=5, delta=0.5)
        est = SemiDiscreteTransport(source=source, t_max=20_000, seed=0).fit(
            target.points
        )
        value, se = est.estimate_cost(n_mc=50_000)
        assert value == pytest.approx(truth.true_cost, abs=max(5e-3, 6 * se))

    def test_estimate_cost_seeded(self):
        X = grid_atoms(4)
        est = SemiDiscreteTransport(source=UniformBox([0.5], [1.5]), t_max=100).fit(X)
        v1 = est.estimate_cost(n_mc=5_000, seed=7)
        v2 = est.estimate_cost(n_mc=5_000, seed=7)
        v3 = est.estimate_cost(n_mc=5_000, seed=8)
        assert v1 == v2
        assert v1 != v3
