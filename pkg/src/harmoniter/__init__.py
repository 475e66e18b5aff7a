"""harmoniter: iterated harmonic numbers and their number theory.

Exact-arithmetic computation of iterated harmonic numbers h_j(n),
Conway-Guy hyperharmonic numbers, and Cesaro partial-sum towers; iterated
logarithms and their step sums; estimators for Euler's constant and its
iterated generalizations; and p-adic valuation scans of the h_j
denominators with reproducible, checkpointed table output.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    CorruptCheckpointError,
    DomainError,
    EmptyInputError,
    HarmoniterError,
    HyperpowerOverflowError,
    InternalError,
    NotPrimeError,
    PrecisionExhaustedError,
    ResourceLimitError,
    UnsupportedOrderError,
    VersionMismatchError,
)
from .exact import (  # noqa: F401
    NEG_INFINITY,
    BigRational,
    PAdicValuation,
    format_rational,
    fraction_to_float,
    is_prime,
    parse_rational,
    rat_add,
    valuation,
    valuation_of_sum_via_min,
)
from .harmonic import (  # noqa: F401
    DEFAULT_BIT_BUDGET,
    CesaroTower,
    HarmonicStream,
    cesaro_sum,
    concavity_check,
    h_eval,
    h_float_profile,
    h_stream_advance,
    hyperharmonic,
)
from .logiter import (  # noqa: F401
    IterLogContext,
    StepSumAccumulator,
    domain_floor,
    hyperpower_e,
    l_step_sum,
    ln_iter,
    start_index,
)
from .constants import (  # noqa: F401
    GammaEstimate,
    gamma_classic,
    gamma_j_estimate,
    gamma_j_prime_estimate,
    gamma_j_prime_profile,
    gamma_reference,
)
from .numtheory import (  # noqa: F401
    InequalityScan,
    PadicAccumulator,
    ScanCheckpoint,
    ScanResult,
    ValuationRunTable,
    checkpoint_load,
    checkpoint_save,
    denominator_valuation_scan,
    inequality_threshold,
    integrality_check,
    kurschak_witness,
    primes_upto,
    theisinger_witness,
)
