"""Time-budgeted quantum magnetometry with twisted collective spin states.

Exact Dicke-sector simulation of five sensing protocols under one total
time budget, quantum-Fisher-information and echo-readout sensitivities,
analytic infinite-N closed forms with an independent truncated-Fock
cross-check, and optimization of the sensing fraction plus break-even
twist thresholds.
"""

from .bosonic_limit import (
    ClosedFormOptimum,
    ClosedFormPoint,
    FockSpace,
    closed_form,
    closed_form_c_small_twist,
    closed_form_optimum,
    closed_form_point,
    enhancement_ratio,
    fock_hamiltonian,
    fock_simulate,
    momentum_quadrature,
    vacuum_state,
)
from .errors import (
    BracketingError,
    ContractViolationError,
    DimensionMismatchError,
    InvalidDimensionError,
    SingularParameterError,
    TruncationError,
    TwistsenseError,
    WrongMethodError,
)
from .metrology import (
    SensitivityRecord,
    closed_form_Bprime,
    echo_sensitivity,
    generating_function,
    moment_oracle,
    qfi,
    qfi_sensitivity,
    relative_difference,
)
from .protocols import (
    ECHO_SCHEMES,
    QFI_SCHEMES,
    SCHEMES,
    ProtocolConfig,
    SchemeState,
    final_state,
    hamiltonian,
)
from .spin_core import (
    CollectiveOperators,
    ComplexOperator,
    DickeSpace,
    PropagationWithDerivative,
    StateVector,
    apply_operator,
    collective_operators,
    expectation,
    fidelity,
    initial_state,
    overlap,
    plus_state,
    propagate,
    propagate_with_derivative,
    propagator,
    variance,
)
from .sweep_optimize import (
    ENGINES,
    OptimumResult,
    SweepSpec,
    evaluate_point,
    find_threshold,
    optimize_t,
    sweep_curve,
)

__version__ = "0.1.0"

__all__ = [
    "BracketingError",
    "ClosedFormOptimum",
    "ClosedFormPoint",
    "CollectiveOperators",
    "ComplexOperator",
    "ContractViolationError",
    "DickeSpace",
    "DimensionMismatchError",
    "ECHO_SCHEMES",
    "ENGINES",
    "FockSpace",
    "InvalidDimensionError",
    "OptimumResult",
    "PropagationWithDerivative",
    "ProtocolConfig",
    "QFI_SCHEMES",
    "SCHEMES",
    "SchemeState",
    "SensitivityRecord",
    "SingularParameterError",
    "StateVector",
    "SweepSpec",
    "TruncationError",
    "TwistsenseError",
    "WrongMethodError",
    "apply_operator",
    "closed_form",
    "closed_form_Bprime",
    "closed_form_c_small_twist",
    "closed_form_optimum",
    "closed_form_point",
    "collective_operators",
    "echo_sensitivity",
    "enhancement_ratio",
    "evaluate_point",
    "expectation",
    "fidelity",
    "final_state",
    "find_threshold",
    "fock_hamiltonian",
    "fock_simulate",
    "generating_function",
    "hamiltonian",
    "initial_state",
    "momentum_quadrature",
    "moment_oracle",
    "optimize_t",
    "overlap",
    "plus_state",
    "propagate",
    "propagate_with_derivative",
    "propagator",
    "qfi",
    "qfi_sensitivity",
    "relative_difference",
    "sweep_curve",
    "vacuum_state",
    "variance",
]
