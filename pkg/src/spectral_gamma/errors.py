"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: structural/domain problems exit 2,
resource caps exit 3.
"""


class SpectralGammaError(Exception):
    """Base class for all package errors."""


class StructuralError(SpectralGammaError):
    """Mismatched kinds/specs/sizes: the inputs do not fit together."""


class DomainError(SpectralGammaError):
    """An operation precondition is violated (empty set, zero element, ...)."""


class ResourceCapError(SpectralGammaError):
    """An enumeration or support cap was exceeded; message names the point reached."""


class CapabilityError(SpectralGammaError):
    """A requested norm/oracle is not computable for the given group spec."""


class GeometryError(DomainError):
    """Geometric degeneracy: eigenvalue too close to a region boundary."""


class AnalyticityError(DomainError):
    """The selected function is not holomorphic on the contour's disks."""


class ConditioningError(SpectralGammaError):
    """A resolvent solve is too ill-conditioned to trust."""


class MembershipError(DomainError):
    """An eigenvalue lies outside the region or on its boundary."""


class ResolutionError(SpectralGammaError):
    """The sampling grid cannot resolve the declared region primitives."""
