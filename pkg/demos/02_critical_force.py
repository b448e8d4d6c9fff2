"""The wall-departure force: numeric bisection vs the exact sum formula.

The force at which the left particle detaches equals
(sum_{k=1..N} k**-0.5 / L)**2 exactly, and grows like (4/L**2) N for large
chains.  This script confirms both facts numerically.
"""

from coulomb_chain import (
    Constant,
    ModelParams,
    c_critical,
    critical_force_exact,
    wall_force,
)

L = 1.0

print(f"{'N':>6} {'bisection':>14} {'exact sum':>14} {'rel diff':>10}")
for n in (1, 2, 10, 50, 100):
    params = ModelParams(L=L, n_gaps=n, force=Constant(1.0))
    numeric = wall_force(params, tol_rel=1e-10)
    exact = critical_force_exact(n, L)
    print(f"{n:>6} {numeric:>14.6f} {exact:>14.6f} {abs(numeric / exact - 1):>10.2e}")

print()
print(f"Large-N trend: F_cr / N should approach c_cr = 4/L^2 = {c_critical(L)}")
print(f"{'N':>8} {'F_cr/N':>10} {'gap to 4':>10}")
for n in (10 ** 2, 10 ** 3, 10 ** 4, 10 ** 5):
    ratio = critical_force_exact(n, L) / n
    print(f"{n:>8} {ratio:>10.5f} {4.0 - ratio:>10.5f}")

print()
print("Scaling in the segment length: F_cr(N, L) = F_cr(N, 1) / L^2")
for length in (0.5, 2.0, 4.0):
    lhs = critical_force_exact(100, length)
    rhs = critical_force_exact(100, 1.0) / length ** 2
    print(f"  L = {length}: {lhs:.6f} vs {rhs:.6f}")
