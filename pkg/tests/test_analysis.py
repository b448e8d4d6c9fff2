"""Histograms, phase classification, sweeps and convergence tables."""

import dataclasses

import numpy as np
import pytest

from coulomb_chain import (
    Configuration,
    Constant,
    ModelParams,
    Phase,
    Scaled,
    classify_phase,
    convergence_study,
    histogram,
    solve_fixed_point,
    sweep,
    uniform_configuration,
)


class TestHistogram:
    def test_uniform_chain_fills_bins_evenly(self):
        p = ModelParams(L=1.0, n_gaps=9, force=Constant(0.0))
        h = histogram(uniform_configuration(p), p, n_bins=5)
        # 10 particles, 5 bins: quantization of at most one particle per bin
        assert np.all(np.abs(h.mass - 0.2) <= 1.0 / 10 + 1e-12)
        assert h.mass.sum() == pytest.approx(1.0, abs=1e-12)

    def test_two_particles_two_bins(self):
        p = ModelParams(L=1.0, n_gaps=1, force=Constant(0.0))
        h = histogram(Configuration([0.0, -1.0]), p, n_bins=2)
        np.testing.assert_allclose(h.mass, [0.5, 0.5])

    def test_edges_cover_segment_exactly(self):
        p = ModelParams(L=2.5, n_gaps=7, force=Constant(0.0))
        h = histogram(uniform_configuration(p), p, n_bins=4)
        assert h.bin_edges[0] == -2.5
        assert h.bin_edges[-1] == 0.0

    def test_mass_conserved_on_random_configs(self):
        rng = np.random.default_rng(17)
        p = ModelParams(L=1.0, n_gaps=40, force=Constant(0.0))
        for _ in range(10):
            pos = np.sort(rng.uniform(-1.0, 0.0, size=41))[::-1]
            pos[0] = 0.0
            h = histogram(Configuration(pos), p)
            assert h.mass.sum() == pytest.approx(1.0, abs=1e-12)

    def test_default_bin_count_is_sqrt_n(self):
        p = ModelParams(L=1.0, n_gaps=100, force=Constant(0.0))
        h = histogram(uniform_configuration(p), p)
        assert h.n_bins == 10

    def test_density_integrates_to_one(self):
        p = ModelParams(L=1.0, n_gaps=50, force=Constant(0.0))
        h = histogram(uniform_configuration(p), p, n_bins=7)
        assert float(np.sum(h.density * np.diff(h.bin_edges))) == pytest.approx(1.0)


def solved_scaled(n, c, gamma, L=1.0):
    p = ModelParams(L=L, n_gaps=n, force=Scaled(c=c, gamma=gamma))
    return p, solve_fixed_point(p)


class TestClassifyPhase:
    def test_sublinear_force_detected_uniform(self):
        p, sol = solved_scaled(10 ** 4, 1.0, 0.5)
        report = classify_phase(p, sol)
        assert report.detected is Phase.UNIFORM
        assert not report.ambiguous

    def test_supercritical_detected_detached(self):
        p, sol = solved_scaled(10 ** 4, 16.0, 1.0)
        report = classify_phase(p, sol)
        assert report.detected is Phase.DETACHED
        assert report.x_leftmost == pytest.approx(-0.5, abs=0.01)
        assert report.sup_deviation is not None

    def test_subcritical_detected_smooth(self):
        p, sol = solved_scaled(10 ** 4, 2.0, 1.0)
        report = classify_phase(p, sol)
        assert report.detected is Phase.SMOOTH_POSITIVE
        assert report.delta1_scaled == pytest.approx(2.0 / 3.0, rel=0.02)
        # empirical histogram tracks the predicted linear density
        assert report.sup_deviation < 0.05

    def test_superlinear_force_detected_point_mass(self):
        p, sol = solved_scaled(10 ** 4, 1.0, 2.0)
        report = classify_phase(p, sol)
        assert report.detected is Phase.DELTA_AT_ORIGIN
        assert report.sup_deviation is None

    def test_agreement_with_declared_region_away_from_boundaries(self):
        # gamma at least 0.25 from 1, c at least 0.5 from the critical 4.0
        n = 10 ** 4
        cases = [
            (1.0, 0.5, Phase.UNIFORM),
            (1.0, 0.75, Phase.UNIFORM),
            (1.0, 1.0, Phase.SMOOTH_POSITIVE),
            (3.5, 1.0, Phase.SMOOTH_POSITIVE),
            (4.5, 1.0, Phase.DETACHED),
            (16.0, 1.0, Phase.DETACHED),
            (1.0, 2.0, Phase.DELTA_AT_ORIGIN),
        ]
        for c, gamma, expected in cases:
            p, sol = solved_scaled(n, c, gamma)
            assert classify_phase(p, sol).detected is expected, (c, gamma)

    def test_near_critical_is_flagged_ambiguous(self):
        p, sol = solved_scaled(10 ** 4, 4.1, 1.0)
        report = classify_phase(p, sol)
        assert report.ambiguous

    def test_needs_scaled_force(self):
        p = ModelParams(L=1.0, n_gaps=10, force=Constant(1.0))
        sol = solve_fixed_point(p)
        with pytest.raises(TypeError):
            classify_phase(p, sol)


class TestSweep:
    def test_empty_grid(self):
        assert sweep([]) == []

    def test_phase_switch_across_critical_coupling(self):
        rows = sweep([(10 ** 4, 1.0, 3.9, 1.0), (10 ** 4, 1.0, 4.1, 1.0)])
        assert rows[0].detected == "smooth_positive"
        assert rows[1].detected == "detached"
        assert rows[1].x_leftmost + 1.0 > 0.01

    def test_deterministic_up_to_timing(self):
        grid = [(500, 1.0, 2.0, 1.0), (500, 1.0, 8.0, 1.0)]
        a = sweep(grid)
        b = sweep(grid)
        for ra, rb in zip(a, b):
            assert dataclasses.replace(ra, seconds=0.0) == dataclasses.replace(
                rb, seconds=0.0
            )

    def test_failures_recorded_and_sweep_continues(self):
        rows = sweep([(100, 1.0, 1.0, 1.0), (100, 1.0, 1.0, 1.0)], max_iter=3)
        assert all(r.error is not None and "NoConvergence" in r.error for r in rows)
        assert len(rows) == 2

    def test_grid_order_preserved(self):
        grid = [(100, 1.0, 8.0, 1.0), (50, 1.0, 1.0, 1.0)]
        rows = sweep(grid)
        assert [r.n_gaps for r in rows] == [100, 50]


class TestConvergenceStudy:
    def test_sublinear_force_deviation_decreases(self):
        rows = convergence_study(1.0, 0.5, 1.0, [100, 1000, 10000])
        devs = [r.n_max_gap_dev for r in rows]
        assert devs[0] > devs[1] > devs[2]

    def test_detached_extent_converges_to_limit(self):
        rows = convergence_study(16.0, 1.0, 1.0, [100, 1000, 10000])
        errs = [abs(r.x_leftmost + 0.5) for r in rows]
        assert errs[0] > errs[1] > errs[2]
        assert errs[2] < 1e-2

    def test_zero_force_row_has_no_deviation(self):
        rows = convergence_study(0.0, 1.0, 1.0, [100, 1000])
        for r in rows:
            assert r.n_max_gap_dev <= 1e-9
            assert r.x_leftmost == -1.0
