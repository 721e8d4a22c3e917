"""Degenerate parity-paired bound states in bottomless 1D potentials.

Build a pair from an envelope profile, then check it::

    >>> from degenpair import LorentzSqrtProfile, PairConfig, build_pair, verify_pair
    >>> pair = build_pair(LorentzSqrtProfile(1.0), PairConfig(gamma=1.0), (8.0, 4001))
    >>> pair.energy
    2.0
    >>> verify_pair(pair).passed
    True
"""

from .construct import (
    DegeneratePair,
    EnergyRef,
    GridSpec,
    PairConfig,
    Which,
    build_pair,
    gamma_zero_potential,
    koley_kar_pair,
    koley_kar_potential,
    phase,
    potential_function,
)
from .errors import (
    ConvergenceError,
    DegenPairError,
    DivergenceError,
    ParameterDomainError,
    QuadratureError,
    ResolutionError,
    UnsupportedLimitError,
)
from .profiles import (
    GaussianProfile,
    LorentzSqrtProfile,
    Profile,
    SechPowerProfile,
    TabulatedProfile,
    load_tabulated,
    make_profile,
    norm_squared,
)
from .spectra import (
    BoxProblem,
    Parity,
    eigen_bisect,
    gamma_collapse_study,
    node_half_width,
    numerov_integrate,
    paired_spectrum,
)
from .verify import (
    VerificationReport,
    check_interlacing,
    find_zeros,
    norm_tail,
    orthogonality,
    schrodinger_residual,
    verify_pair,
    wronskian_scan,
)
from .wellscape import Regime, WellReport, classify_sweep, locate_boundaries, solve_maxima

__version__ = "0.1.0"
