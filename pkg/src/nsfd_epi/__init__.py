"""Host-parasite epidemic models with dynamics-preserving discretizations.

Continuous two-class models (uninfected/infected hosts with vertical
and horizontal transmission), their equilibria and linear stability,
nonstandard finite difference counterparts that keep trajectories
positive and equilibria stable for every step size, and a harness that
demonstrates the dynamic consistency numerically.
"""

from .convergence import ConvergenceSettings, Trajectory, Verdict, VerdictStatus, detect_limit
from .equilibria import (
    Condition,
    Equilibrium,
    EquilibriumKind,
    InteriorCoefficients,
    ReproductionNumbers,
    all_equilibria,
    disease_free_equilibrium,
    equilibrium_residual,
    interior_coefficients,
    interior_equilibrium,
    reproduction_numbers,
    susceptible_free_equilibrium,
    trivial_equilibrium,
)
from .harness import (
    INITIAL_POINT_PRESETS,
    PRESET_INITIAL_POINTS,
    ConsistencyReport,
    SweepResult,
    consistency_experiment,
    euler_failure_demo,
    first_negative_step,
    step_size_sweep,
)
from .integrators import ContinuousRun, euler_step, rk4_step, simulate_continuous
from .model import (
    BlowUpError,
    DegenerateQuadraticError,
    DomainError,
    HostParams,
    ModelVariant,
    NotAnEquilibriumError,
    State,
    VariantParameterError,
    Violation,
    validate_params,
    vector_field,
)
from .nsfd import DenominatorPair, denominators, iterate, step, step_general, step_horizontal, step_vertical
from .stability import (
    Classification,
    JuryConditions,
    Matrix2,
    Regime,
    StabilityReport,
    TheoremPrediction,
    classify,
    continuous_jacobian,
    discrete_jacobian,
    eigenvalues2,
    jury_conditions,
    stability_report,
    theorem_prediction,
)

__version__ = "0.1.0"
