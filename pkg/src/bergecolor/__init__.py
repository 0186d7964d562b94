"""bergecolor: edge colorings of complete uniform hypergraphs in which no
color class contains a Berge cycle or Berge biclique, plus the exact
detectors and reports that certify them."""

__version__ = "0.1.0"

from .bipartite import (
    BipartitePartition,
    FieldElement,
    c4free_partition,
    import_partition,
    load_partition,
    restrict_partition,
    save_partition,
    verify_girth,
    verify_partition,
)
from .builder import (
    BuildConfig,
    BuildResult,
    TrivialBaseColorer,
    build,
    build_coloring,
    classify_edge,
    color_layer,
    compact,
    constant_ledger,
    diagonal_combine,
)
from .compositions import (
    WeakComposition,
    linear_extension,
    precedes,
    type_vector,
    weak_compositions,
)
from .detect import (
    BicliquePattern,
    CyclePattern,
    ForbiddenFamily,
    contains_berge_biclique,
    contains_berge_cycle,
    naive_berge_contains,
    verify_coloring_free,
)
from .enlarge import (
    CoverBaseColorer,
    EnlargementSpec,
    ShiftVector,
    enlarge,
    multipartite_cover,
    shifted_copy,
)
from .model import (
    BipartiteGraph,
    Coloring,
    Hypergraph,
    ValidationReport,
    Witness,
    canonical_edge,
    complete_edges,
    load_coloring,
    load_hypergraph,
    save_coloring,
    save_hypergraph,
    validate_coloring,
)
