"""Exact cyclotomic arithmetic, affinely regular polygons in cyclotomic model
sets, and discrete X-ray counterexamples built from them."""

__version__ = "0.1.0"

from .cyclotomic import (  # noqa: E402
    ConductorError,
    CyclotomicNumber,
    RealCyclotomicNumber,
    embed,
    galois_apply,
    is_real,
    lift,
    norm_square,
    try_lower,
    zeta,
)
from .errors import Inconclusive  # noqa: E402
from .fields import (  # noqa: E402
    classify_phi_half,
    k_field_equal,
    k_field_subset,
    real_subfield_equal,
    real_subfield_subset,
    sophie_germain_primes,
)
from .model_sets import ModelSetDescriptor, Patch, generate_patch  # noqa: E402
from .polygons import (  # noqa: E402
    Polygon,
    admissible_m,
    construct_polygon_in_field,
    exists_affinely_regular,
    inflate_into_model_set,
    verify_affinely_regular,
)
from .tomography import (  # noqa: E402
    Direction,
    build_counterexample,
    determination_bruteforce,
    min_k_bound,
    witness_bound,
    xray,
    xrays_equal,
)
