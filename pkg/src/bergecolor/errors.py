"""Exception types shared across the package."""


class BergecolorError(Exception):
    """Base class for all package errors."""


class InvalidEdgeError(BergecolorError, ValueError):
    """Edge has repeated vertices or the wrong number of them."""


class InvalidVertexError(BergecolorError, ValueError):
    """Vertex id is negative or outside the host's vertex range."""


class EmptyDomainError(BergecolorError, ValueError):
    """Requested uniformity exceeds the number of vertices."""


class PartitionMismatchError(BergecolorError, ValueError):
    """A vertex falls outside every part of a vertex partition."""


class NotPrimeError(BergecolorError, ValueError):
    """A prime modulus was required."""


class ConstructionInvalidError(BergecolorError, RuntimeError):
    """A construction failed its own mandatory certification."""


class PartitionFormatError(BergecolorError, ValueError):
    """A partition document is malformed."""


class InvalidPartitionError(BergecolorError, ValueError):
    """Classes do not tile the complete bipartite pair set."""


class SizeMismatchError(BergecolorError, ValueError):
    """Both sides of a bipartite graph must have equal size here."""


class UnverifiedPartitionError(BergecolorError, ValueError):
    """Operation requires a verified partition of the complete bipartite graph."""


class RaggedInputError(BergecolorError, ValueError):
    """Per-block class lists must all have the same length."""


class HypothesisViolatedError(BergecolorError, ValueError):
    """Build parameters violate the exponent or uniformity constraints."""


class OracleTooLargeError(BergecolorError, ValueError):
    """Instance exceeds the brute-force oracle's size caps."""


class CertificationRequiredError(BergecolorError, RuntimeError):
    """An imported ingredient failed the certification the pipeline requires."""
