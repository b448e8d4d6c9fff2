"""Direct energy minimization over ordered positions.

An independent route to fixed points: projected gradient descent with
backtracking on the total energy, with the walls enforced by clamping the
end particles into [-L, 0] after every step.  Slower than shooting but it
needs no monotonicity from the force profile, so it doubles as the oracle
for solver verification and as the probe for non-monotone profiles where
several local minima coexist.

``minimize`` is a pure function of (params, start, settings); the
multi-start search is seeded and sorts before deduplicating, so its output
does not depend on evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, OrderingBreach
from .model import (
    Classification,
    Configuration,
    Constant,
    FixedPointResult,
    ModelParams,
    PiecewiseLinear,
    energy,
    residuals,
)

__all__ = [
    "MinimizeSettings",
    "NonuniquenessProfile",
    "default_settings",
    "energy_gradient",
    "local_minimality_certificate",
    "minimize",
    "multi_start_fixed_points",
    "nonuniqueness_params",
]

_ARMIJO = 1e-4
_BACKTRACK_FLOOR = 2.0 ** -100


@dataclass(frozen=True)
class MinimizeSettings:
    """Step, tolerance and iteration budget of the descent."""

    step_init: float
    grad_tol: float
    max_iter: int = 500_000
    seed: int = 0

    def __post_init__(self):
        if not (self.step_init > 0.0):
            raise ValueError(f"step_init must be positive, got {self.step_init}")
        if not (self.grad_tol > 0.0):
            raise ValueError(f"grad_tol must be positive, got {self.grad_tol}")


def default_settings(params: ModelParams, seed: int = 0) -> MinimizeSettings:
    """Scale-aware defaults: lengths ~ L/N, pressures ~ (N/L)**2."""
    scale = params.L / params.n_gaps
    return MinimizeSettings(
        step_init=scale ** 3,
        grad_tol=1e-10 / scale ** 2,
        seed=seed,
    )


def _gradient_raw(x: np.ndarray, profile, fv: np.ndarray) -> np.ndarray:
    d = x[:-1] - x[1:]
    f = d ** -2.0
    g = np.empty_like(x)
    g[0] = -f[0] - fv[0]
    if x.size > 2:
        g[1:-1] = f[:-1] - f[1:] - fv[1:-1]
    g[-1] = f[-1] - fv[-1]
    return g


def energy_gradient(positions, params: ModelParams) -> np.ndarray:
    """Analytic gradient of the energy with respect to every position.

    For an interior particle dU/dx_i = f_i - f_{i+1} - F(x_i); the end
    particles keep only their single interaction term.  Zero interior
    gradient is exactly the interior force-balance condition.
    """
    x = positions.positions if isinstance(positions, Configuration) else np.asarray(positions, dtype=float)
    profile = params.resolved_force()
    fv = np.asarray(profile.force_at(x), dtype=float)
    return _gradient_raw(x, profile, fv)


def _energy_raw(x: np.ndarray, profile, L: float) -> float:
    d = x[:-1] - x[1:]
    return float(np.sum(1.0 / d) - np.sum(profile.integral_from_wall(x, L)))


def _integral_between(profile, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Per-particle integral of the force from a_i to b_i, cancellation-free.

    Whenever both endpoints fall in the same linear (or flat-extension)
    region the trapezoid rule is exact and involves no large-value
    cancellation, which keeps tiny-move energy deltas accurate; endpoints in
    different regions are far apart, where the plain difference of
    antiderivatives is already well conditioned.
    """
    if isinstance(profile, Constant):
        return profile.value * (b - a)
    bx = profile.breakpoints
    ra = np.searchsorted(bx, a, side="right") - 1
    rb = np.searchsorted(bx, b, side="right") - 1
    trapezoid = 0.5 * (profile.force_at(a) + profile.force_at(b)) * (b - a)
    far = profile._integral_from_first_node(b) - profile._integral_from_first_node(a)
    return np.where(ra == rb, trapezoid, far)


def _delta_energy(x: np.ndarray, trial: np.ndarray, profile, L: float) -> float:
    """Energy change U(trial) - U(x), accurate at the scale of the move.

    Small moves make the direct difference of two O(U) energies pure
    rounding noise; here each gap's contribution is formed from the exact
    difference of the two moves, so the result stays meaningful down to
    moves near machine precision.
    """
    move = trial - x
    d = x[:-1] - x[1:]
    dt = trial[:-1] - trial[1:]
    mdiff = move[:-1] - move[1:]  # equals dt - d exactly
    interaction = -float(np.sum(mdiff / (d * dt)))
    external = float(np.sum(_integral_between(profile, x, trial)))
    return interaction - external


def _projected_gradient(x: np.ndarray, g: np.ndarray, L: float) -> np.ndarray:
    pg = g.copy()
    if x[0] >= 0.0:
        pg[0] = max(g[0], 0.0)
    if x[-1] <= -L:
        pg[-1] = min(g[-1], 0.0)
    return pg


def minimize(
    params: ModelParams,
    start: Configuration,
    settings: MinimizeSettings | None = None,
    on_step=None,
) -> FixedPointResult:
    """Descend the energy from ``start`` until the projected gradient is flat.

    Backtracking halves the step until the trial keeps strict ordering and
    achieves sufficient decrease, so the energy is monotone along accepted
    steps.  Walls act through clamping of the two end particles.  Raises
    OrderingBreach if ordering cannot be restored even at the backtracking
    floor (step_init far too large) and NoConvergence when the iteration
    budget runs out.  ``on_step(iteration, energy)`` is invoked after every
    accepted step.
    """
    if settings is None:
        settings = default_settings(params)
    L = params.L
    profile = params.resolved_force()
    if start.n_gaps != params.n_gaps:
        raise ValueError("start configuration size does not match params")
    if start.positions[-1] < -L:
        raise ValueError("start configuration extends beyond the left wall")

    x = start.positions.copy()
    u = _energy_raw(x, profile, L)
    step = settings.step_init
    iterations = 0
    prev_x = prev_g = None

    while True:
        fv = np.asarray(profile.force_at(x), dtype=float)
        g = _gradient_raw(x, profile, fv)
        pg = _projected_gradient(x, g, L)
        if float(np.max(np.abs(pg))) <= settings.grad_tol:
            break
        if iterations >= settings.max_iter:
            raise NoConvergence(
                f"descent did not reach grad_tol={settings.grad_tol} "
                f"in {settings.max_iter} iterations"
            )

        # Spectral (Barzilai-Borwein, alternating long/short) trial step;
        # backtracking keeps the iteration monotone, so stiff chains converge
        # in far fewer steps than a fixed-step descent would need.
        if prev_x is not None:
            s = x - prev_x
            y = g - prev_g
            sy = float(s @ y)
            if sy > 0.0:
                step = float(s @ s) / sy if iterations % 2 == 0 else sy / float(y @ y)
            else:
                step *= 2.0
        prev_x, prev_g = x, g

        accepted = False
        ordered_ever = False
        while step >= settings.step_init * _BACKTRACK_FLOOR:
            trial = x - step * g
            if trial[0] > 0.0:
                trial[0] = 0.0
            if trial[-1] < -L:
                trial[-1] = -L
            diffs = trial[:-1] - trial[1:]
            if np.all(diffs > 0.0):
                ordered_ever = True
                move = trial - x
                du = _delta_energy(x, trial, profile, L)
                if du <= -(_ARMIJO / step) * float(move @ move):
                    x = trial
                    u += du
                    accepted = True
                    break
            step *= 0.5
        if not accepted:
            if not ordered_ever:
                raise OrderingBreach(
                    "could not restore particle ordering while backtracking; "
                    "step_init is too large for this problem scale"
                )
            raise NoConvergence("backtracking line search stalled")
        iterations += 1
        if on_step is not None:
            on_step(iterations, u)

    pinned = x[-1] <= -L + 1e-12 * L
    if pinned:
        x[-1] = -L
    config = Configuration(x)
    res = residuals(config, params)
    max_residual = float(np.max(np.abs(res.interior))) if res.interior.size else 0.0
    return FixedPointResult(
        config=config,
        classification=Classification.BOUNDARY_PINNED if pinned else Classification.INTERIOR,
        delta1=float(x[0] - x[1]),
        max_residual=max_residual,
        iterations=iterations,
        terminal_slack=res.terminal_slack,
    )


def local_minimality_certificate(
    config: Configuration, params: ModelParams, eps: float | None = None
) -> bool:
    """Check that every feasible +-eps single-particle move raises the energy.

    A cheap coordinate-wise certificate, not a Hessian test; ``eps`` defaults
    to 1e-6 * L / N.  Moves that would break ordering or leave the segment
    are skipped.
    """
    L = params.L
    if eps is None:
        eps = 1e-6 * L / params.n_gaps
    profile = params.resolved_force()
    x = config.positions
    u0 = _energy_raw(x, profile, L)
    guard = 1e-12 * max(1.0, abs(u0))
    for i in range(x.size):
        for s in (eps, -eps):
            xi = x[i] + s
            if i == 0 and xi > 0.0:
                continue
            if i == x.size - 1 and xi < -L:
                continue
            if i > 0 and xi >= x[i - 1]:
                continue
            if i < x.size - 1 and xi <= x[i + 1]:
                continue
            trial = x.copy()
            trial[i] = xi
            if _energy_raw(trial, profile, L) < u0 - guard:
                return False
    return True


# ---------------------------------------------------------------------------
# Non-monotone showcase profile and multi-start search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NonuniquenessProfile:
    """Tent-shaped base force with a single interior maximum.

    On the canonical segment [-2, 0] the base force rises linearly from
    a - 2b at the left wall to the peak value a at x = -1, then falls to -a
    at the right wall (the parameters must satisfy b > a > 0).  It is
    positive only around the peak, so once multiplied by a strong coupling
    the chain splits into clusters separated by force barriers and many
    distinct local energy minima appear.
    """

    a_slopepeak: float
    b_slope: float

    def __post_init__(self):
        if not (self.b_slope > self.a_slopepeak > 0.0):
            raise ValueError(
                f"need b > a > 0, got a={self.a_slopepeak}, b={self.b_slope}"
            )

    def base_profile(self) -> PiecewiseLinear:
        a, b = self.a_slopepeak, self.b_slope
        return PiecewiseLinear([(-2.0, a - 2.0 * b), (-1.0, a), (0.0, -a)])

    def scaled_profile(self, coupling: float) -> PiecewiseLinear:
        return self.base_profile().scale(coupling)


def nonuniqueness_params(
    a: float, b: float, c: float, n_gaps: int
) -> ModelParams:
    """Chain on [-2, 0] driven by the tent profile with coupling c * N."""
    profile = NonuniquenessProfile(a_slopepeak=a, b_slope=b)
    return ModelParams(L=2.0, n_gaps=n_gaps, force=profile.scaled_profile(c * n_gaps))


def _force_peak(params: ModelParams) -> float:
    """Interior abscissa of the largest force value, used to stratify starts."""
    L = params.L
    profile = params.resolved_force()
    peak = -0.5 * L
    if isinstance(profile, PiecewiseLinear):
        bx, by = profile.breakpoints, profile.values
        mask = (bx >= -L) & (bx <= 0.0)
        if mask.any():
            inner_x, inner_v = bx[mask], by[mask]
            peak = float(inner_x[int(np.argmax(inner_v))])
    return float(np.clip(peak, -0.98 * L, -0.02 * L))


def _stratified_start(
    params: ModelParams, m_right: int, peak: float, rng: np.random.Generator
) -> Configuration:
    L, n = params.L, params.n_gaps
    margin = 0.02 * min(-peak, L + peak)
    right = np.linspace(0.0, peak + margin, m_right)
    left = np.linspace(peak - margin, -L, n + 1 - m_right)
    pos = np.concatenate((right, left))
    gaps = pos[:-1] - pos[1:]
    room = 0.25 * np.minimum(gaps[:-1], gaps[1:])
    pos[1:-1] += rng.uniform(-1.0, 1.0, size=n - 1) * room
    return Configuration(pos)


def multi_start_fixed_points(
    params: ModelParams,
    n_starts: int,
    settings: MinimizeSettings | None = None,
) -> list[FixedPointResult]:
    """Minimize from stratified starts and return the distinct local minima.

    Starts vary how many particles begin to the right of the force peak.
    Results are deduplicated on max-abs position distance below 1e-3 * L / N
    (well under the one-gap separation of genuinely distinct minima, well
    over the convergence scatter of one basin), then each survivor must pass
    the residual check and the coordinate-perturbation certificate.  Output
    order is by increasing energy; ties break on positions, so the result is
    independent of scheduling.
    """
    if n_starts < 1:
        raise ValueError(f"need at least one start, got {n_starts}")
    if settings is None:
        settings = default_settings(params)
    rng = np.random.default_rng(settings.seed)
    peak = _force_peak(params)
    n = params.n_gaps

    counts = np.unique(np.clip(np.round(np.linspace(1, n, n_starts)).astype(int), 1, n))
    found: list[tuple[float, FixedPointResult]] = []
    for m in counts:
        start = _stratified_start(params, int(m), peak, rng)
        result = minimize(params, start, settings)
        found.append((energy(result.config, params), result))

    found.sort(key=lambda item: (item[0], tuple(item[1].config.positions)))
    dedup_tol = 1e-3 * params.L / n
    distinct: list[tuple[float, FixedPointResult]] = []
    for u, result in found:
        pos = result.config.positions
        if any(
            float(np.max(np.abs(pos - kept.config.positions))) <= dedup_tol
            for _, kept in distinct
        ):
            continue
        distinct.append((u, result))

    verified = []
    tol_res = 10.0 * settings.grad_tol
    for _, result in distinct:
        if result.max_residual > tol_res:
            continue
        if not local_minimality_certificate(result.config, params):
            continue
        verified.append(result)
    return verified
