"""Cut-preserving vertex sparsifiers with exact verification."""

from .bhc import BhcInstance, gen_hypercube_instance, image_size, sparsifier_to_mapping, stretch
from .estimators import OneFaceSparsifier, ProfileSparsifier, SamplingSparsifier
from .generators import gen_random_quasi
from .graph import (
    ContractionMap,
    Edge,
    Instance,
    InstanceError,
    InvalidContractionError,
    contract,
    is_quasi_bipartite,
    star_of,
    total_weight,
)
from .mincut import Bipartition, canonical_side_map, enumerate_bipartitions, min_cut_value, min_terminal_cut
from .quasi_approx import SamplingParams, approx_sparsifier, sparsify_star, special_cuts
from .quasi_exact import exact_sparsifier, gen_profile_lowerbound, star_profile
from .verify import QualityReport, verify_contraction, verify_quality

__version__ = "0.1.0"
__all__ = [name for name in dir() if not name.startswith("_")]
