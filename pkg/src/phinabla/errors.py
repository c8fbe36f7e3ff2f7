"""Exception hierarchy shared by all layers."""


class PhinablaError(Exception):
    """Base class for all domain errors."""


class MismatchedParams(PhinablaError):
    """Operands live over different ring parameters."""


class MissingStructure(PhinablaError):
    """A Frobenius or connection is required but absent."""


class NonInvertible(PhinablaError):
    """A matrix that must be invertible at working precision is not."""


class WindowTooSmall(PhinablaError):
    """A result is sensitive to the exponent window and cannot be trusted."""


class IrregularSingularity(PhinablaError):
    """The connection has a pole of order > 1 at t = 0."""


class WildCover(PhinablaError):
    """Kummer pullback degree divisible by p."""


class NotNilpotent(PhinablaError):
    """Monodromy filtration requested for a non-nilpotent operator."""


class NotLevelTwo(PhinablaError):
    """Normal form only available for unipotence level <= 2."""


class NotTame(PhinablaError):
    """Residue exponents are wild (p in denominator) or too large."""


class NonConstantFrobenius(PhinablaError):
    """Induced Frobenius on the solution space failed to be constant."""


class NotWeil(PhinablaError):
    """Eigenvalue is not a Weil number: embeddings of different size."""


class IrrationalTrace(PhinablaError):
    """A graded trace failed exact rational recognition."""


class MissingPairing(PhinablaError):
    """Rank profile needs the Weil pairing but none was supplied."""


class InconsistentRanks(PhinablaError):
    """Computed ranks violate the rank identities; input is invalid."""


class DiagnosticConflict(PhinablaError):
    """Two independent characterisations of the verdict disagree."""


class NotEquivariant(PhinablaError):
    """Boundary map fails phi- or nabla-equivariance."""


class PurityFailure(PhinablaError):
    """A graded piece is not pure of the expected weight."""

    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class SingularCurve(PhinablaError):
    """Weierstrass equation defines a singular curve."""


class Uncertifiable(PhinablaError):
    """Interval certification could not separate weight candidates."""
