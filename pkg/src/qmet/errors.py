"""Exception types shared across the package."""


class QmetError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(QmetError):
    """Operands live on incompatible spaces."""


class NonHermitianInput(QmetError):
    """A matrix required to be Hermitian fails the Hermiticity tolerance."""


class DegenerateSpectrum(QmetError):
    """An operation requiring a non-degenerate spectrum met (near-)equal eigenvalues."""


class InvalidParameter(QmetError):
    """A model parameter is outside its admissible range."""


class UnknownReference(QmetError):
    """No closed-form reference registered under the requested name."""


class NonNormalized(QmetError):
    """An outcome distribution does not sum to one within tolerance."""


class NotTraceless(QmetError):
    """A derivative of a density matrix must be traceless."""


class RankChange(QmetError):
    """The rank of a state family changes across the differentiation stencil."""


class RankDeficient(QmetError):
    """A full-rank state was required but an eigenvalue is numerically zero."""


class UnknownMetricTag(QmetError):
    """The operator-monotone function tag is not one of 'ari', 'har', 'log'."""


class DomainBoundary(QmetError):
    """A differentiation stencil would leave the parameter domain."""


class NonSmoothFamily(QmetError):
    """A unitary family is not smooth enough for its local generator to be Hermitian."""


class AliasingRisk(QmetError):
    """The phase read-out grid cannot resolve the spectrum injectively."""


class OracleTooLarge(QmetError):
    """A brute-force oracle was requested beyond its size guard."""
