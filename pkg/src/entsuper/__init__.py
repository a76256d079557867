"""Entanglement of superposed tripartite pure states.

Closed-form concurrence, concurrence of assistance and entanglement of
formation for 2x2xn states, the superposition bounds built on them, and a
decomposition-search oracle that certifies the closed forms independently.
"""

from ._backend import COMPILED
from .bounds import (
    BoundReport,
    UpperForms,
    bound_report,
    bound_unnormalized,
    lower_bounds_C,
    multi_term_upper,
    thm1_upper_E,
    thm1_upper_Ea,
    thm2_upper_C,
    thm2_upper_Ca,
)
from .measures import (
    LambdaSpectrum,
    MeasureSet,
    binary_entropy,
    concurrence_pure,
    entropy_pure,
    lambda_spectrum,
    measures_of,
)
from .oracle import DecompositionSearch, estimate_Ea, hjw_ensemble, optimize_avg
from .states import (
    Ensemble,
    PureTripartiteState,
    load_fixture,
    measure_ensemble,
    sample_random,
    superpose,
)

__version__ = "0.1.0"
