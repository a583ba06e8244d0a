"""Exception hierarchy shared by all geospanner modules."""


class GeospannerError(Exception):
    """Base class for all library errors."""


class NonSimplePolygon(GeospannerError):
    """Polygon boundary self-intersects, repeats vertices, or has the wrong orientation."""


class DegenerateInput(GeospannerError):
    """Input too small or too degenerate for the requested operation."""


class BalanceNotAchieved(GeospannerError):
    """No chord in the candidate family met the two-thirds balance window."""


class PointOutsideFreeSpace(GeospannerError):
    """A query point does not lie in the free space of the region."""


class DegenerateDomain(GeospannerError):
    """Polygonal domain violates its invariants (e.g. a hole touches the outer boundary)."""


class NotPlanar(GeospannerError):
    """Separator input graph admits no planar embedding."""


class UnknownId(GeospannerError):
    """A decomposition or graph references a point id outside the instance."""


class FaultedEndpoint(GeospannerError):
    """Distance query endpoint is a member of the fault set."""


class BudgetTooLarge(GeospannerError):
    """Exhaustive certification would exceed the check budget."""


class GenerationFailed(GeospannerError):
    """Random instance generation exhausted its rejection-sampling attempts."""


class HashMismatch(GeospannerError):
    """Spanner file does not pair with the given instance file."""
