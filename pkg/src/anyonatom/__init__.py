"""Bound states of a fractional-spin particle in an attractive 2+1D Coulomb
field.

Four routes to the same spectrum: a closed-form semiclassical energy, full
WKB quantization of the radial phase integral, a perturbative split of that
integral, and an independent shooting eigensolver for cross-checks.
"""

from .closedform import (
    ClosedFormTerms,
    closed_form_terms,
    energy_closed_form,
    energy_nonrel,
    principal_expansion,
    sigma_l,
)
from .errors import (
    BracketFailure,
    DomainError,
    EigenvalueNotFound,
    IntegrationOverflow,
    NoClassicalRegion,
    QuadratureFailure,
)
from .model import (
    CODATA_ALPHA,
    DEFAULT_CONSTANTS,
    ELECTRON_MASS_EV,
    AnyonParams,
    EnergyResult,
    PhysicalConstants,
    QuantumNumbers,
    kinetic_ev,
    l_prime,
    lambda_sq,
)
from .oracle import (
    RadialProblem,
    RadialSolution,
    build_problem,
    effective_term,
    eigen_solve,
    energy_oracle,
    shoot,
    solve_level,
)
from .wkb import (
    QuantizationResidual,
    TurningPoints,
    energy_wkb_full,
    energy_wkb_split,
    momentum_sq,
    phase_integral,
    quantization_residual,
    split_integrals,
    turning_points,
)

__version__ = "0.1.0"

__all__ = [
    "AnyonParams",
    "BracketFailure",
    "CODATA_ALPHA",
    "ClosedFormTerms",
    "DEFAULT_CONSTANTS",
    "DomainError",
    "ELECTRON_MASS_EV",
    "EigenvalueNotFound",
    "EnergyResult",
    "IntegrationOverflow",
    "NoClassicalRegion",
    "PhysicalConstants",
    "QuadratureFailure",
    "QuantizationResidual",
    "QuantumNumbers",
    "RadialProblem",
    "RadialSolution",
    "TurningPoints",
    "build_problem",
    "closed_form_terms",
    "effective_term",
    "eigen_solve",
    "energy_closed_form",
    "energy_nonrel",
    "energy_oracle",
    "energy_wkb_full",
    "energy_wkb_split",
    "kinetic_ev",
    "l_prime",
    "lambda_sq",
    "momentum_sq",
    "phase_integral",
    "principal_expansion",
    "quantization_residual",
    "shoot",
    "sigma_l",
    "solve_level",
    "split_integrals",
    "turning_points",
    "__version__",
]
