import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize as scipy_minimize
from scipy.optimize import minimize_scalar

from mmsqueeze.gaussian_states import named_state, random_covariance
from mmsqueeze.optimizer import (
    OptimizerConfig,
    RayleighProductProblem,
    canonical_sign,
    minimize,
    objective,
    objective_gradient,
    local_search,
    start_points,
)
from mmsqueeze.witness import squeezing_problem


def random_psd(rng, n, rank=None):
    X = rng.normal(size=(n, rank or n))
    return X @ X.T


def lbfgs_oracle(problem, rng, n_starts=200):
    """Independent reference: gradient-based searches from many random starts."""
    best = np.inf
    for _ in range(n_starts):
        res = scipy_minimize(
            lambda g: objective(problem, g),
            rng.normal(size=problem.dim),
            jac=lambda g: objective_gradient(problem, g),
            method="L-BFGS-B",
            options={"ftol": 1e-15, "gtol": 1e-12},
        )
        best = min(best, res.fun)
    return best


class TestProblem:
    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError, match="symmetric"):
            RayleighProductProblem(np.array([[1.0, 1.0], [0.0, 1.0]]), np.eye(2))

    def test_rejects_indefinite(self):
        with pytest.raises(ValueError, match="semidefinite"):
            RayleighProductProblem(np.eye(2), np.diag([1.0, -1.0]))

    def test_rejects_shape_mismatch(self):
        with pytest.raises(ValueError):
            RayleighProductProblem(np.eye(2), np.eye(4))

    def test_zero_direction(self):
        with pytest.raises(ValueError):
            objective(RayleighProductProblem(np.eye(2), np.eye(2)), [0, 0])


class TestObjective:
    def test_isotropic_problem_is_one_everywhere(self, rng):
        p = RayleighProductProblem(0.5 * np.eye(4), 0.5 * np.eye(4))
        for _ in range(10):
            assert objective(p, rng.normal(size=4)) == pytest.approx(1, rel=1e-14)

    @given(c=st.floats(-1e3, 1e3).filter(lambda c: abs(c) > 1e-3))
    def test_scale_invariance(self, c):
        p = squeezing_problem(named_state("tms3", 0.4))
        g = np.array([0.3, -1.0, 0.2, 0.5, 0.7, 0.1])
        assert objective(p, c * g) == pytest.approx(objective(p, g), rel=1e-12)

    @pytest.mark.parametrize("r", [0.2, 1.0])
    def test_tms2_reference_direction(self, r):
        p = squeezing_problem(named_state("tms2", r))
        cx, cp = 0.3, -1.7
        assert objective(p, [cx, cp, -cx, cp]) == pytest.approx((1 + np.exp(-4 * r)) / 2, rel=1e-13)

    @pytest.mark.parametrize("r", [0.2, 1.0])
    def test_tms3_reference_direction(self, r):
        p = squeezing_problem(named_state("tms3", r))
        assert objective(p, [1, 0, 1, 0, 1, 0]) == pytest.approx((1 + 2 * np.exp(-4 * r)) / 3, rel=1e-13)


class TestGradient:
    def test_matches_central_differences(self, rng):
        for _ in range(20):
            p = RayleighProductProblem(random_psd(rng, 4), random_psd(rng, 4))
            g = rng.normal(size=4)
            h = 1e-6
            fd = np.array([(objective(p, g + h * e) - objective(p, g - h * e)) / (2 * h) for e in np.eye(4)])
            np.testing.assert_allclose(objective_gradient(p, g), fd, rtol=1e-6, atol=1e-8 * np.abs(fd).max())

    def test_orthogonal_to_g(self, rng):
        # scale invariance implies g . grad = 0
        p = RayleighProductProblem(random_psd(rng, 6), random_psd(rng, 6))
        g = rng.normal(size=6)
        assert g @ objective_gradient(p, g) == pytest.approx(0, abs=1e-10 * np.linalg.norm(objective_gradient(p, g)))


class TestMinimize:
    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 6))
    def test_diagonal_problems(self, seed, n):
        # for commuting diagonal forms log(a.w) + log(b.w) is concave on the simplex w_i = g_i^2,
        # so the minimum sits at a vertex: 4 min_i a_i b_i
        rng = np.random.default_rng(seed)
        a, b = rng.uniform(0.1, 3, size=(2, n))
        res = minimize(RayleighProductProblem(np.diag(a), np.diag(b)))
        assert res.value == pytest.approx(4 * np.min(a * b), rel=1e-9)

    def test_two_dimensional_problem_against_angle_search(self, rng):
        for _ in range(10):
            p = RayleighProductProblem(random_psd(rng, 2), random_psd(rng, 2))
            f = lambda t: objective(p, [np.cos(t), np.sin(t)])
            grid = np.linspace(0, np.pi, 2001)
            t0 = grid[np.argmin([f(t) for t in grid])]
            ref = minimize_scalar(f, bounds=(t0 - 0.01, t0 + 0.01), method="bounded", options={"xatol": 1e-12}).fun
            assert minimize(p).value == pytest.approx(ref, rel=1e-9, abs=1e-14)

    def test_random_problems_against_gradient_oracle(self, rng):
        for _ in range(5):
            p = RayleighProductProblem(random_psd(rng, 6), random_psd(rng, 6))
            ours = minimize(p).value
            assert ours <= lbfgs_oracle(p, rng, 100) * (1 + 1e-8)

    @pytest.mark.parametrize("r", [0.1, 0.5, 1.0, 2.0])
    def test_tms2_minimizer_lies_in_squeezed_plane(self, r):
        res = minimize(squeezing_problem(named_state("tms2", r)))
        assert res.value == pytest.approx((1 + np.exp(-4 * r)) / 2, abs=1e-8)
        plane = np.array([[1, 0, -1, 0], [0, 1, 0, 1]]) / np.sqrt(2)
        assert np.linalg.norm(plane @ res.g_opt) == pytest.approx(1, abs=1e-6)

    def test_result_normalized_with_canonical_sign(self, rng):
        res = minimize(squeezing_problem(random_covariance(3, rng)))
        assert np.linalg.norm(res.g_opt) == pytest.approx(1, abs=1e-14)
        assert res.g_opt[np.flatnonzero(np.abs(res.g_opt) > 1e-12)[0]] > 0
        assert res.converged
        assert res.n_restarts_used == 6 + 6 + 16

    def test_deterministic(self, rng):
        p = squeezing_problem(random_covariance(3, rng))
        a, b = minimize(p), minimize(p)
        assert a.value == b.value
        np.testing.assert_array_equal(a.g_opt, b.g_opt)

    def test_one_dimensional(self):
        res = minimize(RayleighProductProblem(np.array([[2.0]]), np.array([[0.5]])))
        assert res.value == pytest.approx(4.0)

    @pytest.mark.parametrize("r", [0.3, 1.0])
    def test_local_search_from_suboptimal_direction(self, r):
        p = squeezing_problem(named_state("tms3", r))
        _, value, _ = local_search(p, np.array([0, -1, 0, -1, 0, 2.0]), OptimizerConfig())
        assert value <= (2 + np.exp(-4 * r)) / 3 + 1e-12

    def test_result_dominates_eigenvector_starts(self, rng):
        p = squeezing_problem(random_covariance(3, rng), "1|2,3")
        res = minimize(p)
        for v in start_points(p, OptimizerConfig(n_random=0)):
            assert res.value <= objective(p, v) + 1e-15

    def test_value_matches_g_opt(self, rng):
        p = squeezing_problem(random_covariance(2, rng))
        res = minimize(p)
        assert res.value == objective(p, res.g_opt)

    def test_start_points_count(self):
        p = RayleighProductProblem(np.eye(4), np.eye(4))
        assert len(start_points(p, OptimizerConfig(n_random=3))) == 11


class TestCanonicalSign:
    def test_flips_leading_negative(self):
        np.testing.assert_allclose(canonical_sign([0, -3, 4]), [0, 0.6, -0.8])

    def test_ignores_negligible_leading_entry(self):
        np.testing.assert_allclose(canonical_sign([-1e-15, -1, 0]), [1e-15, 1, 0])
