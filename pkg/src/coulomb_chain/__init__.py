"""Equilibrium chains of like charges on a segment under an external force.

The library solves for the minimal-energy (fixed-point) configuration of
N + 1 equal charges on [-L, 0] with nearest-neighbour 1/r repulsion and a
renormalized external force, by three complementary routes:

* :mod:`coulomb_chain.shooting` -- the fast solver: generate the chain from
  its first gap and bisect on the terminal conditions.
* :mod:`coulomb_chain.closed_form` -- exact constant-force formulas: gap
  sequences, the half-line model, the wall-departure (critical) force and
  the four asymptotic density phases.
* :mod:`coulomb_chain.minimizer` -- projected gradient descent on the energy,
  the independent oracle, which also handles non-monotone profiles with
  several local minima.

:mod:`coulomb_chain.analysis` turns solutions into densities, phase reports
and sweep tables, and :mod:`coulomb_chain.cli` exposes everything as the
``coulomb-chain`` command.
"""

from .analysis import (
    ConvergenceRow,
    DensityHistogram,
    PhaseReport,
    SweepRow,
    classify_phase,
    convergence_study,
    histogram,
    sweep,
)
from .closed_form import (
    AsymptoticDensity,
    CriticalForce,
    Phase,
    asymptotic_density,
    aux_model_extent,
    aux_model_gaps,
    c_critical,
    critical_force,
    critical_force_exact,
    gaps_constant_force,
    inverse_sqrt_sum,
    phase2_scaling_factor,
)
from .errors import (
    CoulombChainError,
    DegenerateConfigurationError,
    MonotonicityViolation,
    NoConvergence,
    OrderingBreach,
    PositivityError,
)
from .minimizer import (
    MinimizeSettings,
    NonuniquenessProfile,
    default_settings,
    energy_gradient,
    local_minimality_certificate,
    minimize,
    multi_start_fixed_points,
    nonuniqueness_params,
)
from .model import (
    Classification,
    Configuration,
    Constant,
    FixedPointResult,
    ForceProfile,
    ModelParams,
    PiecewiseLinear,
    Residuals,
    Scaled,
    energy,
    external_energy,
    interaction_energy,
    residuals,
    uniform_configuration,
)
from .shooting import ShootingOutcome, shoot, solve_fixed_point, wall_force

__version__ = "0.1.0"

__all__ = [
    "AsymptoticDensity",
    "Classification",
    "Configuration",
    "Constant",
    "ConvergenceRow",
    "CoulombChainError",
    "CriticalForce",
    "DegenerateConfigurationError",
    "DensityHistogram",
    "FixedPointResult",
    "ForceProfile",
    "MinimizeSettings",
    "ModelParams",
    "MonotonicityViolation",
    "NoConvergence",
    "NonuniquenessProfile",
    "OrderingBreach",
    "Phase",
    "PhaseReport",
    "PiecewiseLinear",
    "PositivityError",
    "Residuals",
    "Scaled",
    "ShootingOutcome",
    "SweepRow",
    "asymptotic_density",
    "aux_model_extent",
    "aux_model_gaps",
    "c_critical",
    "classify_phase",
    "convergence_study",
    "critical_force",
    "critical_force_exact",
    "default_settings",
    "energy",
    "energy_gradient",
    "external_energy",
    "gaps_constant_force",
    "histogram",
    "interaction_energy",
    "inverse_sqrt_sum",
    "local_minimality_certificate",
    "minimize",
    "multi_start_fixed_points",
    "nonuniqueness_params",
    "phase2_scaling_factor",
    "residuals",
    "shoot",
    "solve_fixed_point",
    "sweep",
    "uniform_configuration",
    "wall_force",
]
