"""Coreset-based diversity maximization under matroid constraints."""

from .core import (
    CapabilityError,
    Dataset,
    DiversityKind,
    DivMaxError,
    InfeasibleError,
    InputError,
    InvariantViolation,
    MetricKind,
    Point,
    Solution,
    StateError,
    diameter,
    distance,
)
from .clustering import Clustering, gmm, gmm_init, gmm_iteration, gmm_radius, gmm_until
from .coreset import Coreset, extract, seq_coreset
from .diversity import evaluate, mst_weight, pair_count, tsp_weight
from .matroid import (
    CustomMatroid,
    Matroid,
    PartitionMatroid,
    TransversalMatroid,
    augment,
    is_independent,
    maximal_independent_subset,
    rank,
    uniform_matroid,
)
from .parallel import parallel_coreset, reduce_coreset
from .solvers import exhaustive_search, local_search_sum, solve
from .stream import StreamState, consume, stream_coreset

__version__ = "0.1.0"
