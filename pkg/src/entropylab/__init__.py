"""Shannon entropy for discrete distributions, with executable checks of
the properties that single it out."""

from .dist_core import (
    DecompositionReport,
    DistributionError,
    EntropyValue,
    RationalDist,
    RealDist,
    decompose,
    entropy,
    make_rational_dist,
    product,
    rational_approx,
    uniform,
    uniform_entropy,
)
from .composition import (
    Branch,
    Leaf,
    UncertaintyBreakdown,
    flatten,
    total_uncertainty,
    validate,
)
from .axiom_lab import (
    AxiomReport,
    LogFitResult,
    continuity_convergence,
    estimate_k,
    run_check,
)

__version__ = "0.1.0"
