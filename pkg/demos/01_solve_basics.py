"""Solve a chain with and without an external force.

Walks through the basic objects: parameters, the shooting solve, and what
the returned configuration looks like in both terminal regimes (left
particle pinned at the wall vs floating in the interior).
"""

import numpy as np

from coulomb_chain import (
    Classification,
    Constant,
    ModelParams,
    critical_force_exact,
    residuals,
    solve_fixed_point,
)

N, L = 12, 1.0

print("=" * 64)
print("No force: repulsion alone spreads the chain uniformly")
print("=" * 64)
params = ModelParams(L=L, n_gaps=N, force=Constant(0.0))
sol = solve_fixed_point(params)
print(f"classification : {sol.classification.value}")
print(f"gaps           : {np.round(sol.config.gaps, 6)}")
print(f"x_N            : {sol.config.positions[-1]} (wall at {-L})")
print(f"terminal slack : {sol.terminal_slack:.3f}  (= (N/L)^2 = {(N / L) ** 2})")

print()
print("=" * 64)
print("Moderate constant force: still pinned, but gaps now grow with k")
print("=" * 64)
F = 0.5 * critical_force_exact(N, L)
params = ModelParams(L=L, n_gaps=N, force=Constant(F))
sol = solve_fixed_point(params)
res = residuals(sol.config, params)
print(f"force          : {F:.3f} (half the critical value)")
print(f"classification : {sol.classification.value}")
print(f"first gap      : {sol.delta1:.6f}  < L/N = {L / N:.6f}")
print(f"gaps increase  : {bool(np.all(np.diff(sol.config.gaps) > 0))}")
print(f"max residual   : {sol.max_residual:.3e}")
print(f"pressure drops : {np.round(-np.diff(sol.config.pressures), 9)} (= F each)")

print()
print("=" * 64)
print("Supercritical force: the left particle leaves the wall")
print("=" * 64)
F = 2.0 * critical_force_exact(N, L)
params = ModelParams(L=L, n_gaps=N, force=Constant(F))
sol = solve_fixed_point(params)
print(f"force          : {F:.3f} (twice the critical value)")
print(f"classification : {sol.classification.value}")
print(f"x_N            : {sol.config.positions[-1]:.6f} > {-L}")
print(f"terminal slack : {sol.terminal_slack:.3e} (exact balance f_N = F)")
k = np.arange(N, 0, -1)
print(f"pressures match the half-line law (N-k+1)F to "
      f"{np.max(np.abs(sol.config.pressures - k * F) / (k * F)):.2e} relative")

assert sol.classification is Classification.INTERIOR
