"""Transforms, gradients, and deterministic quadrature."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sdot.measures import DiscreteMeasure, RngStream, UniformBall, UniformBox, shifted_interval
from sdot.semidual import (
    c_transform,
    c_transform_batch,
    entropic_c_transform,
    entropic_c_transform_batch,
    grad_quadrature_1d,
    laguerre_masses_1d,
    minibatch_grad,
    semidual_integrand,
    semidual_value_mc,
    soft_assignment,
    soft_assignment_batch,
    stochastic_grad,
)


def two_atoms():
    return DiscreteMeasure(points=[[0.0], [1.0]], weights=[0.5, 0.5])


def random_problem(M=6, d=2, seed=0):
    gen = RngStream(seed, 99).generator()
    points = gen.random((M, d))
    w = gen.random(M) + 0.1
    w /= w.sum()
    target = DiscreteMeasure(points=points, weights=w)
    g = gen.uniform(-0.5, 0.5, M)
    return target, g, gen


class TestHardTransform:
    def test_two_atom_values(self):
        target = two_atoms()
        value, idx = c_transform(np.zeros(2), target, [0.4])
        assert value == pytest.approx(0.5 * 0.16)
        assert idx == 0
        value, idx = c_transform(np.zeros(2), target, [0.9])
        assert value == pytest.approx(0.5 * 0.01)
        assert idx == 1

    def test_tie_takes_smallest_index(self):
        target = two_atoms()
        _, idx = c_transform(np.zeros(2), target, [0.5])
        assert idx == 0

    def test_potential_moves_boundary(self):
        target = two_atoms()
        # raising g_2 makes atom 2 win at the former midpoint
        _, idx = c_transform(np.array([0.0, 0.2]), target, [0.5])
        assert idx == 1

    def test_batch_matches_pointwise(self):
        target, g, gen = random_problem()
        X = gen.random((25, 2))
        values, indices = c_transform_batch(g, target, X)
        for i in range(25):
            v, j = c_transform(g, target, X[i])
            assert v == values[i]
            assert j == indices[i]

    def test_chunking_does_not_change_results(self):
        # force multiple row chunks through a big (M * d) footprint
        gen = RngStream(3, 99).generator()
        M, d = 2048, 2048
        points = gen.random((M, d))
        target = DiscreteMeasure(points=points, weights=np.full(M, 1.0 / M))
        g = gen.uniform(-0.1, 0.1, M)
        X = gen.random((3, d))
        values, indices = c_transform_batch(g, target, X)
        diff = X[:, None, :] - points[None, :, :]
        scores = 0.5 * np.einsum("nmd,nmd->nm", diff, diff) - g
        assert np.array_equal(indices, np.argmin(scores, axis=1))
        assert np.array_equal(values, scores[np.arange(3), indices])

    def test_input_validation(self):
        target = two_atoms()
        with pytest.raises(ValueError):
            c_transform(np.zeros(3), target, [0.5])
        with pytest.raises(ValueError):
            c_transform(np.array([np.nan, 0.0]), target, [0.5])
        with pytest.raises(ValueError):
            c_transform_batch(np.zeros(2), target, np.zeros((4, 2)))


class TestEntropicTransform:
    def test_above_hard_and_within_entropy_gap(self):
        target, g, gen = random_problem()
        X = gen.random((50, 2))
        hard = c_transform_batch(g, target, X)[0]
        for eps in (1.0, 0.1, 0.01):
            soft = entropic_c_transform_batch(g, target, X, eps)
            assert np.all(soft >= hard - 1e-12)
            assert np.all(soft <= hard - eps * np.log(target.w_min) + 1e-12)

    def test_gap_shrinks_with_eps(self):
        target, g, gen = random_problem(seed=4)
        x = gen.random(2)
        hard = c_transform(g, target, x)[0]
        gaps = [
            entropic_c_transform(g, target, x, eps) - hard
            for eps in (1.0, 0.3, 0.1, 0.03, 0.01)
        ]
        assert all(g2 <= g1 + 1e-15 for g1, g2 in zip(gaps, gaps[1:]))

    def test_finite_at_tiny_eps(self):
        target, g, gen = random_problem(seed=5)
        x = gen.random(2)
        hard = c_transform(g, target, x)[0]
        soft = entropic_c_transform(g, target, x, 1e-8)
        assert np.isfinite(soft)
        assert soft == pytest.approx(hard, abs=1e-6)

    def test_shift_equivariance(self):
        # adding c to every g_j subtracts c from both transforms
        target, g, gen = random_problem(seed=6)
        x = gen.random(2)
        for c in (0.7, -2.5):
            assert c_transform(g + c, target, x)[0] == pytest.approx(
                c_transform(g, target, x)[0] - c, abs=1e-12
            )
            assert entropic_c_transform(g + c, target, x, 0.1) == pytest.approx(
                entropic_c_transform(g, target, x, 0.1) - c, abs=1e-12
            )

    def test_eps_must_be_positive(self):
        target = two_atoms()
        with pytest.raises(ValueError):
            entropic_c_transform(np.zeros(2), target, [0.5], 0.0)


class TestAssignments:
    def test_soft_assignment_is_distribution(self):
        target, g, gen = random_problem(seed=7)
        X = gen.random((40, 2))
        for eps in (1.0, 0.01, 1e-6):
            chi = soft_assignment_batch(g, target, X, eps)
            assert chi.shape == (40, target.n_atoms)
            assert np.all(chi >= 0)
            assert np.allclose(chi.sum(axis=1), 1.0, atol=1e-12)

    def test_concentrates_on_argmin_cell(self):
        target, g, gen = random_problem(seed=8)
        X = gen.random((40, 2))
        idx = c_transform_batch(g, target, X)[1]
        chi = soft_assignment_batch(g, target, X, 1e-6)
        assert np.array_equal(np.argmax(chi, axis=1), idx)
        assert np.all(chi[np.arange(40), idx] > 0.999)

    def test_grad_structure(self):
        target, g, gen = random_problem(seed=9)
        x = gen.random(2)
        grad = stochastic_grad(g, target, x, 0.1)
        assert grad.sum() == pytest.approx(0.0, abs=1e-12)
        assert np.all(grad >= -target.weights - 1e-15)
        assert np.all(grad <= 1 - target.weights + 1e-15)
        assert np.linalg.norm(grad) <= 2.0

    @settings(max_examples=40, deadline=None)
    @given(
        seed=st.integers(0, 10_000),
        eps=st.floats(1e-4, 10.0),
        scale=st.floats(0.0, 3.0),
    )
    def test_grad_properties_random(self, seed, eps, scale):
        gen = RngStream(seed, 42).generator()
        M = int(gen.integers(1, 9))
        d = int(gen.integers(1, 4))
        w = gen.random(M) + 0.05
        w /= w.sum()
        target = DiscreteMeasure(points=gen.random((M, d)), weights=w)
        g = gen.uniform(-scale, scale, M)
        x = gen.random(d)
        grad = stochastic_grad(g, target, x, eps)
        assert abs(grad.sum()) < 1e-10
        assert np.linalg.norm(grad) <= 2.0 + 1e-12

    def test_minibatch_is_mean_of_per_sample(self):
        target, g, gen = random_problem(seed=10)
        batch = gen.random((16, 2))
        stacked = np.stack([stochastic_grad(g, target, x, 0.2) for x in batch])
        assert np.allclose(
            minibatch_grad(g, target, batch, 0.2), stacked.mean(axis=0), atol=1e-14
        )

    def test_minibatch_rejects_empty(self):
        target = two_atoms()
        with pytest.raises(ValueError):
            minibatch_grad(np.zeros(2), target, np.zeros((0, 1)), 0.1)


class TestIntegrandAndValue:
    def test_finite_difference_gradient(self):
        # the documented gradient identity: d h / d g = chi - w
        target, g, gen = random_problem(M=5, d=2, seed=11)
        x = gen.random(2)
        delta = 1e-6
        for eps in (1.0, 0.1, 0.01):
            grad = stochastic_grad(g, target, x, eps)
            for j in range(5):
                e = np.zeros(5)
                e[j] = delta
                fd = (
                    semidual_integrand(g + e, target, x, eps)
                    - semidual_integrand(g - e, target, x, eps)
                ) / (2 * delta)
                assert fd == pytest.approx(grad[j], rel=1e-5, abs=1e-9)

    def test_value_at_optimum_is_minus_cost(self):
        from sdot.oracles import example3_truth

        source = shifted_interval(0.5)
        _, target, _ = _example3(4)
        truth = example3_truth(4, 0.5)
        gen = RngStream(0, 50).generator()
        value, se = semidual_value_mc(truth.g_star, target, source, 0.0, 40_000, gen)
        assert value == pytest.approx(-truth.true_cost, abs=4 * se + 1e-12)
        assert se < 1e-3

    def test_value_requires_two_samples(self):
        target = two_atoms()
        with pytest.raises(ValueError):
            semidual_value_mc(
                np.zeros(2), target, shifted_interval(0.0), 0.0, 1,
                RngStream(0).generator(),
            )


def _example3(M, delta=0.5):
    from sdot.measures import make_example

    return make_example(3, M=M, delta=delta)


class TestLaguerreMasses:
    def test_zero_potential_splits_at_midpoint(self):
        target = two_atoms()
        masses = laguerre_masses_1d(np.zeros(2), target, 0.0, 1.0)
        assert np.allclose(masses, [0.5, 0.5], atol=1e-15)

    def test_potential_shifts_boundary(self):
        # boundary = midpoint + (g_1 - g_2) / (y_2 - y_1)
        target = two_atoms()
        masses = laguerre_masses_1d(np.array([0.0, 0.25]), target, 0.0, 1.0)
        assert np.allclose(masses, [0.25, 0.75], atol=1e-15)

    def test_dominated_atom_gets_zero_mass(self):
        target = DiscreteMeasure(
            points=[[0.0], [0.5], [1.0]], weights=[1 / 3, 1 / 3, 1 / 3]
        )
        g = np.array([1.0, -5.0, 1.0])
        masses = laguerre_masses_1d(g, target, 0.0, 1.0)
        assert masses[1] == 0.0
        assert masses.sum() == pytest.approx(1.0)

    def test_masses_sum_to_one(self):
        gen = RngStream(12, 0).generator()
        y = np.sort(gen.random(20))
        y += np.arange(20) * 1e-6  # guard against duplicates
        target = DiscreteMeasure(points=y[:, None], weights=np.full(20, 0.05))
        g = gen.uniform(-0.2, 0.2, 20)
        masses = laguerre_masses_1d(g, target, -1.0, 2.0)
        assert masses.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.all(masses >= 0)

    def test_requires_sorted_targets(self):
        target = DiscreteMeasure(points=[[1.0], [0.0]], weights=[0.5, 0.5])
        with pytest.raises(ValueError):
            laguerre_masses_1d(np.zeros(2), target, 0.0, 1.0)


class TestGradQuadrature:
    def test_exact_at_optimum(self):
        source, target, truth = _example3(10)
        grad = grad_quadrature_1d(truth.g_star, target, source, 0.0, 10**6)
        assert np.max(np.abs(grad)) < 1e-12

    def test_matches_monte_carlo_at_positive_eps(self):
        source, target, truth = _example3(5)
        eps = 0.5
        quad = grad_quadrature_1d(truth.g_star, target, source, eps, 200_001)
        gen = RngStream(1, 60).generator()
        X = source.sample(gen, 400_000)
        mc = soft_assignment_batch(truth.g_star, target, X, eps).mean(axis=0) - target.weights
        assert np.allclose(quad, mc, atol=5e-3)

    def test_grid_refinement_converges(self):
        source, target, truth = _example3(5)
        g = truth.g_star + np.linspace(0, 0.05, 5)
        coarse = grad_quadrature_1d(g, target, source, 0.2, 1_001)
        fine = grad_quadrature_1d(g, target, source, 0.2, 100_001)
        assert np.allclose(coarse, fine, atol=1e-5)

    def test_requires_1d_uniform_box(self):
        source, target, truth = _example3(5)
        with pytest.raises(ValueError):
            grad_quadrature_1d(truth.g_star, target, UniformBall(1.0, 1), 0.0, 100)
        with pytest.raises(ValueError):
            grad_quadrature_1d(
                truth.g_star, target, UniformBox([0, 0], [1, 1]), 0.0, 100
            )
        with pytest.raises(ValueError):
            grad_quadrature_1d(truth.g_star, target, source, 0.5, 1)
