class WMatchError(Exception):
    """Base class for library errors."""


class NonTermination(WMatchError):
    """The generic loop exceeded its iteration guard (invalid machine)."""


class DegenerateModel(NonTermination):
    """A text model drives a machine into a zero-shift cycle."""


class ExplosionGuard(WMatchError):
    """Full-memory expansion exceeded the state cap."""

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


class NotStandard(WMatchError):
    pass


class SingularSystem(WMatchError):
    pass


class CapacityGuard(WMatchError):
    """Pattern too long for an explicit position lattice."""


class PatternTooLong(WMatchError):
    """Brute-force search refused for patterns longer than its guard."""


class InvalidMap(WMatchError):
    pass


class IncompleteSublattice(WMatchError):
    pass


class UnsupportedAlgorithm(WMatchError):
    pass


class AlphabetMismatch(WMatchError):
    pass
