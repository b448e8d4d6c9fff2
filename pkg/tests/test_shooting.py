"""Shooting recursion, fixed-point bisection and the wall-departure force."""

import numpy as np
import pytest

from coulomb_chain import (
    Classification,
    Constant,
    ModelParams,
    MonotonicityViolation,
    NoConvergence,
    PiecewiseLinear,
    critical_force_exact,
    gaps_constant_force,
    residuals,
    shoot,
    solve_fixed_point,
    wall_force,
)


def params(n, L=1.0, force=None):
    return ModelParams(L=L, n_gaps=n, force=force if force is not None else Constant(0.0))


def random_monotone_piecewise(rng, L, scale):
    k = int(rng.integers(2, 7))
    xs = np.concatenate(([-L], np.sort(rng.uniform(-L, 0.0, size=k - 2)), [0.0]))
    xs = np.unique(xs)
    vals = np.cumsum(rng.uniform(0.0, scale, size=xs.size))[::-1].copy()
    return PiecewiseLinear(list(zip(xs.tolist(), vals.tolist())))


class TestShoot:
    def test_uniform_gap_no_force_hits_wall_exactly(self):
        p = params(4)
        out = shoot(0.25, p)
        assert out.complete
        assert out.x_terminal == -1.0
        np.testing.assert_allclose(out.config.gaps, 0.25)

    def test_two_step_constant_recursion(self):
        p = params(2, force=Constant(1.0))
        out = shoot(2.0 ** -0.5, p)
        assert out.complete
        assert out.config.pressures[0] == pytest.approx(2.0, rel=1e-14)
        assert out.f_terminal == pytest.approx(1.0, rel=1e-14)
        assert out.config.gaps[1] == pytest.approx(1.0, rel=1e-14)
        assert out.x_terminal == pytest.approx(-(2.0 ** -0.5 + 1.0), rel=1e-14)

    def test_collapse_at_the_constant_force_bound(self):
        n, F = 6, 2.0
        p = params(n, force=Constant(F))
        out = shoot(((n - 1) * F) ** -0.5, p)
        assert not out.complete
        assert out.collapse_index == n
        # even larger first gap collapses no later
        out2 = shoot(2.0 * ((n - 1) * F) ** -0.5, p)
        assert not out2.complete
        assert out2.collapse_index <= n

    def test_collapse_reports_smallest_index_piecewise(self):
        f = PiecewiseLinear([(-1.0, 5.0), (0.0, 5.0)])
        p = params(5, force=f)
        out = shoot(1.0, p)
        assert not out.complete
        assert out.collapse_index == 2  # f_2 = 1 - 5 < 0 immediately

    def test_rejects_nonpositive_first_gap(self):
        with pytest.raises(ValueError):
            shoot(0.0, params(3))
        with pytest.raises(ValueError):
            shoot(-0.1, params(3))

    @pytest.mark.parametrize("case", range(6))
    def test_monotone_in_first_gap(self, case):
        rng = np.random.default_rng(100 + case)
        n, L = 30, 1.0
        if case % 2 == 0:
            force = Constant(float(rng.uniform(0.0, 2.0 * n)))
        else:
            force = random_monotone_piecewise(rng, L, scale=float(n))
        p = params(n, L, force)
        d1 = float(rng.uniform(0.2, 0.8)) * L / n
        a, b = shoot(d1, p), shoot(1.2 * d1, p)
        assert a.complete and b.complete
        assert np.all(b.config.pressures < a.config.pressures)
        assert np.all(b.config.gaps > a.config.gaps)
        assert np.all(b.positions[1:] < a.positions[1:])

    def test_gaps_never_decrease_under_nonnegative_force(self):
        rng = np.random.default_rng(5)
        p = params(20, force=random_monotone_piecewise(rng, 1.0, 10.0))
        out = shoot(0.02, p)
        assert out.complete
        assert np.all(np.diff(out.config.gaps) >= 0.0)

    def test_strict_gap_growth_below_force_support(self):
        # force vanishes right of y = -0.3 and is positive left of it
        y = -0.3
        f = PiecewiseLinear([(-1.0, 8.0), (y - 0.01, 8.0), (y, 0.0), (0.0, 0.0)])
        p = params(12, force=f)
        sol = solve_fixed_point(p)
        gaps = sol.config.gaps
        pos = sol.config.positions
        assert np.all(np.diff(gaps) >= -1e-12 * np.max(gaps))
        # wherever the particle above the gap pair sits in the forced region,
        # the next gap is strictly wider
        for k in range(11):
            if pos[k + 1] < y - 0.01:
                assert gaps[k + 1] > gaps[k]


class TestSolveFixedPoint:
    def test_no_force_is_uniform_and_pinned(self):
        for n, L in [(1, 1.0), (7, 2.5), (50, 0.3)]:
            sol = solve_fixed_point(params(n, L))
            assert sol.classification is Classification.BOUNDARY_PINNED
            assert sol.config.positions[-1] == -L
            np.testing.assert_allclose(sol.config.gaps, L / n, rtol=1e-9)
            assert sol.terminal_slack >= 0.0

    def test_supercritical_matches_half_line_pressures(self):
        n, L = 40, 1.0
        F = 1.5 * critical_force_exact(n, L)
        sol = solve_fixed_point(params(n, L, Constant(F)))
        assert sol.classification is Classification.INTERIOR
        expected = F * np.arange(n, 0, -1, dtype=float)
        np.testing.assert_allclose(sol.config.pressures, expected, rtol=1e-8)
        assert sol.config.positions[-1] > -L

    def test_large_scaled_force_detaches_to_two_over_sqrt_c(self):
        c = 16.0
        n = 10 ** 4
        sol = solve_fixed_point(params(n, 1.0, Constant(c * n)))
        assert sol.classification is Classification.INTERIOR
        assert sol.config.positions[-1] == pytest.approx(-2.0 / np.sqrt(c), abs=0.01)

    def test_gap_growth_and_first_gap_bound_under_constant_force(self):
        n, L = 25, 1.0
        sol = solve_fixed_point(params(n, L, Constant(30.0)))
        gaps = sol.config.gaps
        assert np.all(np.diff(gaps) > 0.0)
        assert sol.delta1 < L / n

    def test_idempotent_reshoot(self):
        n, L = 35, 1.0
        sol = solve_fixed_point(params(n, L, Constant(50.0)))
        out = shoot(sol.delta1, params(n, L, Constant(50.0)))
        # pinned results snap only the last particle
        np.testing.assert_allclose(
            out.positions[:-1], sol.config.positions[:-1],
            atol=10 * np.finfo(float).eps * n * L,
        )

    def test_matches_closed_form_gaps(self):
        rng = np.random.default_rng(9)
        for _ in range(25):
            n = int(rng.integers(2, 60))
            F = float(rng.uniform(0.0, 4.0 * n))
            p = params(n, 1.0, Constant(F))
            sol = solve_fixed_point(p)
            np.testing.assert_allclose(
                gaps_constant_force(sol.delta1, F, n)[:-1],
                sol.config.gaps[:-1],
                rtol=1e-10,
            )

    @pytest.mark.parametrize("seed", range(4))
    def test_piecewise_profiles_solve_cleanly(self, seed):
        rng = np.random.default_rng(200 + seed)
        n, L = 200, 1.0
        p = params(n, L, random_monotone_piecewise(rng, L, scale=3.0 * n))
        sol = solve_fixed_point(p)
        scale = (n / L) ** 2
        assert sol.max_residual <= 1e-9 * scale
        if sol.classification is Classification.BOUNDARY_PINNED:
            assert sol.config.positions[-1] == -L
            assert sol.terminal_slack >= -1e-9 * scale
        else:
            assert sol.config.positions[-1] > -L

    def test_rejects_increasing_profile(self):
        f = PiecewiseLinear([(-1.0, 0.0), (0.0, 1.0)])
        with pytest.raises(MonotonicityViolation):
            solve_fixed_point(params(5, force=f))

    def test_rejects_negative_profile(self):
        f = PiecewiseLinear([(-1.0, 1.0), (0.0, -0.5)])
        with pytest.raises(MonotonicityViolation):
            solve_fixed_point(params(5, force=f))

    def test_iteration_budget_enforced(self):
        with pytest.raises(NoConvergence):
            solve_fixed_point(params(10), max_iter=5)

    def test_residuals_recompute_to_reported_value(self):
        p = params(64, 1.0, Constant(100.0))
        sol = solve_fixed_point(p)
        res = residuals(sol.config, p)
        assert np.max(np.abs(res.interior)) == sol.max_residual


class TestWallForce:
    def test_single_gap_value(self):
        got = wall_force(params(1, 1.0, Constant(1.0)))
        assert got == pytest.approx(1.0, rel=1e-8)

    def test_matches_exact_sum_formula(self):
        p = params(100, 1.0, Constant(1.0))
        got = wall_force(p, tol_rel=1e-9)
        assert got == pytest.approx(critical_force_exact(100, 1.0), rel=1e-6)

    def test_length_scaling(self):
        base = wall_force(params(20, 1.0, Constant(1.0)), tol_rel=1e-10)
        scaled = wall_force(params(20, 2.0, Constant(1.0)), tol_rel=1e-10)
        assert scaled == pytest.approx(base / 4.0, rel=1e-7)

    def test_classification_flips_across_threshold(self):
        n, L = 30, 1.0
        fstar = wall_force(params(n, L, Constant(1.0)), tol_rel=1e-10)
        below = solve_fixed_point(params(n, L, Constant(fstar * (1 - 1e-6))))
        above = solve_fixed_point(params(n, L, Constant(fstar * (1 + 1e-6))))
        assert below.classification is Classification.BOUNDARY_PINNED
        assert above.classification is Classification.INTERIOR

    def test_requires_constant_profile(self):
        f = PiecewiseLinear([(-1.0, 1.0), (0.0, 0.0)])
        with pytest.raises(TypeError):
            wall_force(params(5, force=f))
