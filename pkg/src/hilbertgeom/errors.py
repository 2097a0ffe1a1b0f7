"""Exception hierarchy for hilbertgeom."""


class HilbertError(Exception):
    """Base class for every error raised by the toolkit."""


# --- projective primitives ---

class NonCollinear(HilbertError):
    """Points expected on one line are not collinear within tolerance."""


class DegenerateConfiguration(HilbertError):
    """A denominator or a linear system degenerated."""


class PointAtInfinity(HilbertError):
    """An affine result was requested for a point on the line at infinity."""


class SingularMap(HilbertError):
    """A projective matrix is singular within tolerance."""


# --- domains ---

class InvalidDomain(HilbertError):
    """Domain parameters violate boundedness or convexity."""


class NotInterior(HilbertError):
    """A point fails the interior test."""

    def __init__(self, point, where: str = ""):
        self.point = tuple(float(c) for c in point)
        suffix = f" of {where}" if where else ""
        super().__init__(f"point not interior{suffix}: ({self.point[0]:.17g}, {self.point[1]:.17g})")


class CoincidentPoints(HilbertError):
    """Two points that must be distinct coincide."""


class DomainOutOfChart(HilbertError):
    """A transformed domain would leave the finite affine chart."""


class UnsupportedTransform(HilbertError):
    """The requested transform has no representation for this shape."""


class BoundaryPoint(HilbertError):
    """A barycentric point sits on the triangle boundary."""


# --- webs and classification ---

class PoleInsideDomain(HilbertError):
    """A pencil pole lies in the open domain."""


class InvalidWeb(HilbertError):
    """Two web families share a pole or a line."""


class SampleOutsideDomain(HilbertError):
    """Line sampling left the source domain."""


class NotEnoughExtremePoints(HilbertError):
    """The five-pole check needs five extreme points."""


class DegenerateQuadrilateral(HilbertError):
    """The domain is not a quadrilateral with crossing diagonals."""


class InsufficientSamples(HilbertError):
    """A sampled map cannot answer the points the classifier needs."""


class NotInjective(HilbertError):
    """Two distinct sources share one target."""
