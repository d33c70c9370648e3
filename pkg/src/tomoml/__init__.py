"""Maximum-likelihood quantum state tomography by diluted RrhoR iterations.

Typical use::

    from tomoml import ObjectiveContext, solve, counterexample_spec

    spec = counterexample_spec()
    ctx = ObjectiveContext(spec.povm, spec.dataset)
    rho_hat, log = solve(ctx)
"""

from .errors import (
    BoundaryLikelihoodError,
    ConditioningError,
    DimensionError,
    InvalidStateError,
    NotHermitianError,
    NumericalError,
    TomographyError,
)
from .hermitian import (
    POLICY,
    HermitianOperator,
    NumericPolicy,
    add_scaled,
    eigen_hermitian,
    frobenius_distance,
    identity,
    inner,
    min_eigenvalue,
    sandwich,
    symmetrized_product,
    trace,
)
from .likelihood import (
    ObjectiveContext,
    StationarityReport,
    directional_derivative,
    gradient,
    log_likelihood,
    stationarity,
)
from .quantum import (
    Dataset,
    DensityMatrix,
    Povm,
    PureState,
    born_probabilities,
    fidelity_with_pure,
    from_pure,
    ghz_state,
    maximally_mixed,
    w_state,
)
from .simulate import (
    ExperimentSpec,
    counterexample_spec,
    noiseless_dataset,
    pauli_povm,
    sample_dataset,
    w_state_spec,
)
from .solver import (
    Armijo,
    DirectionPair,
    ExactReference,
    FixedT,
    IterationLog,
    PureRrhoR,
    SolverConfig,
    Termination,
    armijo_accepts,
    check_rhobar_subproblem,
    combined_direction,
    compute_directions,
    diluted_step,
    exact_reference_step,
    rrhor_step,
    solve,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "BoundaryLikelihoodError",
    "ConditioningError",
    "DimensionError",
    "InvalidStateError",
    "NotHermitianError",
    "NumericalError",
    "TomographyError",
    "POLICY",
    "HermitianOperator",
    "NumericPolicy",
    "add_scaled",
    "eigen_hermitian",
    "frobenius_distance",
    "identity",
    "inner",
    "min_eigenvalue",
    "sandwich",
    "symmetrized_product",
    "trace",
    "ObjectiveContext",
    "StationarityReport",
    "directional_derivative",
    "gradient",
    "log_likelihood",
    "stationarity",
    "Dataset",
    "DensityMatrix",
    "Povm",
    "PureState",
    "born_probabilities",
    "fidelity_with_pure",
    "from_pure",
    "ghz_state",
    "maximally_mixed",
    "w_state",
    "ExperimentSpec",
    "counterexample_spec",
    "noiseless_dataset",
    "pauli_povm",
    "sample_dataset",
    "w_state_spec",
    "Armijo",
    "DirectionPair",
    "ExactReference",
    "FixedT",
    "IterationLog",
    "PureRrhoR",
    "SolverConfig",
    "Termination",
    "armijo_accepts",
    "check_rhobar_subproblem",
    "combined_direction",
    "compute_directions",
    "diluted_step",
    "exact_reference_step",
    "rrhor_step",
    "solve",
]
