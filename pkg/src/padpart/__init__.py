"""Randomized padded decompositions of weighted graphs.

Partition schemes (weak-diameter ball carving, strong-diameter cone
carving, treewidth ball carving, genus cycle carving), truncated
exponential sampling, corpus generators, and a Monte Carlo harness that
verifies padding, threat-count, cut-probability, and potential-drift
bounds on replayable decomposition traces.

The shortest-path kernels run from a compiled extension when available;
``padpart.BACKEND`` reports which implementation is active (force the
pure-Python one with the PADPART_PURE_PYTHON environment variable).
"""

from ._kernels import BACKEND
from .errors import (
    InvariantError,
    MinorParameterWarning,
    ParseError,
    TraceIntegrityError,
    ValidationError,
)
from .graph import (
    ClusterInfo,
    DistanceMap,
    Graph,
    Partition,
    ball,
    boundary_neighbors,
    cluster_diameter,
    connected_components,
    net_on_paths,
    shortest_paths,
)
from .sampling import (
    RandomStream,
    TexpParams,
    texp_cdf,
    texp_inverse_cdf,
    texp_pdf,
    texp_sample,
)
from .trace import DecompositionTrace
from .weak import WeakParams, build_skeleton_tree, extract_minor_witness, weak_random_partition
from .strong import StrongParams, create_cones, strong_random_partition
from .treewidth import (
    HeightOrder,
    TreeDecomposition,
    height_order,
    treewidth_partition,
    validate_tree_decomposition,
)
from .genus import (
    GenusCycle,
    RotationSystem,
    find_reducing_cycle,
    genus_from_embedding,
    genus_partition,
    validate_rotation,
)
from .corpus import GeneratorSpec, generate
from .harness import (
    PaddingEstimate,
    PotentialState,
    Scheme,
    check_cut_bound,
    count_net_threateners,
    count_threateners,
    drift_check,
    estimate_cut_fraction,
    estimate_padding,
    estimate_padding_multi,
    filter_subsequence,
    max_adjacent_clusters,
    potential,
    potential_capped,
    run_scheme,
    verify_trace_invariants,
    wilson_interval,
)

__version__ = "0.1.0"
