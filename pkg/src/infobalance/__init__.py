"""Information balance of finite-dimensional quantum measurements.

Represents quantum instruments (finite collections of completely positive
maps), builds their indirect-measurement dilations, and computes the
information gain, disturbance, and missing information of a measurement,
together with recovery channels, fidelity bounds, and Holevo-bound checks.
All entropic quantities are in bits.
"""

__version__ = "0.1.0"

from .errors import (
    BadDistribution,
    DimensionMismatch,
    DimensionTooSmall,
    DuplicateLabel,
    InfoBalanceError,
    InvalidInstrument,
    InvalidPovm,
    InvalidState,
    LabelOverlap,
    MissingOutcome,
    NegativeEigenvalue,
    NotIsometry,
    NotSquare,
    NumericalInconsistency,
    ParseError,
    UnknownLabel,
    UnknownOutcome,
    ZeroProbabilityOutcome,
)
from .tensors import (
    LabeledState,
    Subsystem,
    eig_hermitian,
    entropy_bits,
    func_on_support,
    partial_trace,
    support_projector,
    tensor_product,
    von_neumann_entropy,
)
from .objects import (
    Instrument,
    OutcomeMap,
    Povm,
    PurifiedInput,
    ValidationReport,
    check_povm,
    haar_isometry,
    outcome_probability,
    posterior_state,
    povm_of,
    purify,
    random_instrument,
    require_valid,
    theta_state,
    validate,
)
from .serialize import (
    dumps_instrument,
    dumps_json,
    dumps_povm,
    dumps_state,
    dumps_recovery_family,
    loads_instrument,
    loads_povm,
    loads_recovery_family,
    loads_state,
)
from .dilation import DilationBundle, dilate, reduced, unitary_completion
from .measures import (
    BalanceReport,
    OutcomeBalance,
    balance_report,
    binary_entropy,
    chi_quantity,
    coherent_information,
    conditional_mutual_information,
    disturbance,
    disturbance_no_outcomes,
    groenewold_gain,
    information_gain,
    mutual_information,
    noise_delta,
    shannon_entropy,
    single_outcome_quantities,
)
from .recovery import (
    FanoCheck,
    RecoveryFamily,
    corrected_fidelity,
    entanglement_fidelity,
    fano_bound_check,
    petz_family,
    petz_recovery,
)
from .encodings import (
    Encoding,
    HolevoReport,
    classical_mutual_information,
    ensemble_from_reference_povm,
    holevo_check,
    joint_distribution,
    random_reference_povm,
)
from .families import (
    DEFAULT_PARAMS,
    FAMILIES,
    depolarizing,
    filter_family,
    measure_and_reprepare,
    partial_dephasing,
    projective,
)

__all__ = [name for name in dir() if not name.startswith("_")]
