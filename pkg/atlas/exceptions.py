"""Error values raised by the atlas library.

Pole conditions carry where they happened (root tag or rank-one index and
the integer offset) so callers can react to them programmatically.
"""


class AtlasError(Exception):
    """Base class for every error raised by atlas."""


class UnknownFamilyError(AtlasError):
    """The family tag is not one of the BC2/C2 catalog families."""


class ParameterRangeError(AtlasError):
    """A family parameter or index lies outside its admissible range."""


class ExcludedSpaceError(AtlasError):
    """The space is excluded from continuation (SO0(p,2) with p odd)."""


class PoleError(AtlasError):
    """Evaluation hit a pole.

    ``where`` names the factor (a root tag such as ``"beta1"``, ``"gamma"`` or
    ``"q1"``) and ``offset`` the integer locating the pole on its lattice.
    """

    def __init__(self, where, offset, message=None):
        self.where = where
        self.offset = offset
        super().__init__(message or f"pole of {where} at offset {offset}")


class InadmissiblePointError(AtlasError):
    """The point lies on a removed ray or cut where the value is undefined."""


class BranchPointError(AtlasError):
    """The point coincides with a branch point of a square-root cover."""


class ContourProximityError(AtlasError):
    """An integrand pole is too close to the contour for the node budget."""


class QuadratureConvergenceError(AtlasError):
    """Trapezoidal quadrature did not settle before the node cap."""


class DeformationConditionError(AtlasError):
    """A pole circle S meets the deformed contour image.

    ``ell`` is the offending index.
    """

    def __init__(self, ell, message=None):
        self.ell = ell
        super().__init__(message or f"pole family {ell} meets the contour image")


class NoValidRadiusError(AtlasError):
    """No inner radius separates the requested pole families."""


class ResidueConvergenceError(AtlasError):
    """Small-circle residue changed under node doubling."""


class ContinuationError(AtlasError):
    """Sheet assignment stayed ambiguous after step refinement."""


class OutOfReachError(AtlasError):
    """A resonance is not reachable from the requested segment or sheet."""
