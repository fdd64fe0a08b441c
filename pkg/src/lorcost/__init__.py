"""Memory-locality cost models for access traces.

Prices execution traces under a family of related models: tabulated jump-cost
functions, block-crossing counts with exact alignment smoothing, LRU/ideal
cache simulation, a two-source spatio-temporal cost, and weighted multi-level
hierarchies. Ships tree-layout case studies and executable verification
suites over pinned-seed corpora.
"""

__version__ = "0.1.0"

from .bidim import (  # noqa: F401
    BidimLocality,
    TimedTrace,
    eval_bidim,
    make_bidim,
    make_lmb,
    single_finger_cost,
    time_of,
    two_finger_cost,
)
from .cache import (  # noqa: F401
    CacheConfig,
    SimResult,
    block_of,
    co_cost_query,
    simulate,
    smoothed_co_query,
    smoothed_cost,
)
from .errors import LorcostError  # noqa: F401
from .hierarchy import (  # noqa: F401
    GeometricSpec,
    Hierarchy,
    build_geometric,
    hierarchy_cost,
    level_ratio_bound,
)
from .layouts import (  # noqa: F401
    FullBST,
    Layout,
    build_layout,
    is_forward,
    median_trace,
    search_trace,
    span_stats,
    veb_closed_form,
    worst_case_search_cost,
)
from .locality import (  # noqa: F401
    Decomposition,
    JumpHistogram,
    LocalityFunction,
    combined_lor_cost,
    decompose,
    jump_histogram,
    lor_cost,
    make_locality,
    validate,
)
from .trace import (  # noqa: F401
    ExecutionSequence,
    TraceGenSpec,
    generate,
    is_query_type,
    load_trace,
    save_trace,
)
