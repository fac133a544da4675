"""Exact two-qubit stochastic approximate entanglement conversion.

Closed-form optimal probabilities and fidelities for pure-to-mixed two-qubit
conversions, resource-theoretic upper bounds from the generalized robustness,
the supporting entanglement measures, and seeded verification oracles.
"""

from .conversion import (
    ConversionReport,
    exact_probability,
    exact_probability_report,
    f_p,
    p_f,
    p_f1_f2,
    thm1_fidelity_bound,
    thm1_probability_bound,
    werner_unit_fidelity_threshold,
)
from .decomp import EqualGDecomposition, equal_g_decomposition, psi_max, rho_min
from .errors import DomainError, SolverError, UsageError
from .measures import (
    MeasureReport,
    concurrence,
    entanglement_of_formation,
    geometric_entanglement,
    geometric_entanglement_brute,
    measure_report,
)
from .robustness import (
    RobustnessResult,
    generalized_robustness,
    robustness_lower_bound,
    robustness_pure_oracle,
)
from .states import (
    DensityMatrix,
    PureState,
    bell_phi_plus,
    load_state,
    parse_state_spec,
    pure_from_angle,
    sample_fidelity_ball,
    sample_haar_pure,
    sample_mixed,
    save_state,
    werner,
)
from .verify import SUITES, SuiteReport, run_suite

__version__ = "1.0.0"
