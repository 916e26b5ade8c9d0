"""Analysis toolkit for the complex rational recurrence
z[n+1] = (a + z[n-1]) / (b*z[n] + z[n-1]).

Equilibria and their local stability, prime period-two solutions, orbit
simulation with outcome classification, largest-Lyapunov-exponent
estimation, and seeded parameter-space scans.
"""

from .coremap import (
    ConvergedTo,
    Orbit,
    OrbitOutcome,
    OrbitState,
    Params,
    PeriodicCycle,
    Singular,
    ToleranceConfig,
    Unbounded,
    Undecided,
    classify_orbit,
    detect_cycle,
    iterate,
    step,
)
from .equilibria import (
    Branch,
    CharQuadratic,
    EquilibriumReport,
    StabilityClass,
    classify_by_lemma,
    classify_roots,
    equilibria,
    equilibrium_values,
    linearize_at,
    saddle_margin,
    special_case_alpha_eq_beta,
    stability_margin,
)
from .errors import (
    ConfigError,
    DegenerateError,
    InsufficientDataError,
    NoDistinctCycleError,
    NonFiniteError,
    NotConvergedError,
    OracleMismatchError,
    OrbitDiedError,
    RatdynError,
    SingularError,
    SpuriousRootWarning,
)
from .lyapunov import LyapunovEstimate, classify_chaotic, jacobian_fd, lyapunov_max
from .period_two import (
    TwoCycle,
    TwoCycleStability,
    classify_two_cycle,
    map_jacobian,
    t2_jacobian,
    two_cycle,
    verify_cycle_dynamically,
)
from .scan import (
    BasinRaster,
    ChaosHarnessReport,
    ConditionCheck,
    ExtremumResult,
    PeriodHarnessReport,
    ScanGrid,
    basin_raster,
    condition_check,
    conjecture_chaos_harness,
    conjecture_p3_harness,
    find_extremum,
)

__version__ = "0.1.0"

__all__ = [
    "Branch",
    "BasinRaster",
    "ChaosHarnessReport",
    "CharQuadratic",
    "ConditionCheck",
    "ConfigError",
    "ConvergedTo",
    "DegenerateError",
    "EquilibriumReport",
    "ExtremumResult",
    "InsufficientDataError",
    "LyapunovEstimate",
    "NoDistinctCycleError",
    "NonFiniteError",
    "NotConvergedError",
    "OracleMismatchError",
    "Orbit",
    "OrbitDiedError",
    "OrbitOutcome",
    "OrbitState",
    "Params",
    "PeriodHarnessReport",
    "PeriodicCycle",
    "RatdynError",
    "ScanGrid",
    "Singular",
    "SingularError",
    "SpuriousRootWarning",
    "StabilityClass",
    "ToleranceConfig",
    "TwoCycle",
    "TwoCycleStability",
    "Unbounded",
    "Undecided",
    "basin_raster",
    "classify_by_lemma",
    "classify_chaotic",
    "classify_orbit",
    "classify_roots",
    "classify_two_cycle",
    "condition_check",
    "conjecture_chaos_harness",
    "conjecture_p3_harness",
    "detect_cycle",
    "equilibria",
    "equilibrium_values",
    "find_extremum",
    "iterate",
    "jacobian_fd",
    "linearize_at",
    "lyapunov_max",
    "map_jacobian",
    "saddle_margin",
    "special_case_alpha_eq_beta",
    "stability_margin",
    "step",
    "t2_jacobian",
    "two_cycle",
    "verify_cycle_dynamically",
]
