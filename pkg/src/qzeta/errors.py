"""Exception types shared across the library."""


class QZetaError(Exception):
    """Base class for all library errors."""


class DenominatorDivisibleByP(QZetaError):
    pass


class NotAUnit(QZetaError):
    pass


class DomainError(QZetaError):
    pass


class NoRoot(QZetaError):
    """Root extraction failed; carries the residue obstruction."""

    def __init__(self, msg, certificate=None):
        super().__init__(msg)
        self.certificate = certificate


class NotAbelian(QZetaError):
    pass


class TooLarge(QZetaError):
    pass


class InconsistentLevel(QZetaError):
    pass


class NotGaloisStable(QZetaError):
    pass


class BetaNotSigmaSupported(QZetaError):
    pass


class UnsupportedPair(QZetaError):
    pass


class NotCoprime(QZetaError):
    pass


class MissingOracleEntry(QZetaError):
    pass


class IndexObstruction(QZetaError):
    pass


class InterpolationNotIntegral(QZetaError):
    pass


class CongruenceViolation(QZetaError):
    pass


class DataUnavailable(QZetaError):
    pass


class MembershipFailure(QZetaError):
    def __init__(self, msg, index=None, residue=None):
        super().__init__(msg)
        self.index = index
        self.residue = residue


class FunctorialityFailure(QZetaError):
    def __init__(self, msg, pair=None, residue=None):
        super().__init__(msg)
        self.pair = pair
        self.residue = residue


class TailNotConverged(QZetaError):
    pass


class DiagramFailure(QZetaError):
    pass


class ConfigError(QZetaError):
    pass
