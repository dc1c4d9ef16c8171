"""Thermodynamic cost bounds for quantum parameter estimation.

Quantum Fisher information, symmetric logarithmic derivatives, parameter
averaged states and the entropy / heat-dissipation bounds that connect them.
"""

from ._kernels import BACKEND
from .bounds import (
    EqualityCase,
    InequalityCase,
    equality_case_detect,
    generalized_bound,
    lemma1_check,
    two_level_bound,
    violation_search,
)
from .linalg import evolve_unitary, herm_eig, seminorm, validate_density
from .qfi import (
    QfiSplit,
    SLDResult,
    classical_fisher,
    qfi_bloch_oracle,
    qfi_mixed,
    qfi_pure,
    sld,
    sld_measurement,
    spectral_split,
    two_level_decompose,
    variance_identity_check,
)
from .states import (
    MeasurementBasis,
    MixedMapFamily,
    ProbDist,
    PureUnitaryFamily,
    derivative_rho,
    family_eval,
    measurement_probs,
    nonsld_basis,
    pm_basis,
    phase_basis,
    quadratic_mixed_family,
    single_qubit_family,
)
from .thermo import (
    AveragingSpec,
    BoundReport,
    CycleRecord,
    average_state,
    averaged_probs,
    entropy_chain_check,
    landauer_bound,
    memory_cycle,
    normalize_generator,
    qfi_heat_bound,
    shannon_entropy,
    von_neumann_entropy,
)

__version__ = "0.1.0"
