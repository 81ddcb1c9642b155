"""Exception types shared across the package."""


class CuponeError(Exception):
    """Base class for every error raised by this package."""


class DomainError(CuponeError):
    """An operation was asked for outside its domain (e.g. zeta_n with n >= p)."""


class RingMismatch(CuponeError):
    pass


class MissingVariable(CuponeError):
    pass


class NotIntegerValued(CuponeError):
    def __init__(self, witness):
        self.witness = dict(witness)
        super().__init__(f"polynomial is not integer valued at {self.witness}")


class ValidationError(CuponeError):
    """A Delta-set violates a face identity or references a missing simplex."""


class NoSolution(CuponeError):
    pass


class CompositionNonzero(CuponeError):
    pass


class NotACocycle(CuponeError):
    pass


class Undefined(CuponeError):
    """A Massey product is not defined; ``obstruction`` names the failing cup."""

    def __init__(self, obstruction):
        self.obstruction = obstruction
        super().__init__(f"Massey product undefined: {obstruction} is nonzero in H^2")


class DivisibilityFailure(CuponeError):
    def __init__(self, n, term, coeff):
        self.n, self.term, self.coeff = n, term, coeff
        super().__init__(f"coefficient {coeff} of {term} is not divisible by {n}!")


class UnsupportedBidegree(CuponeError):
    pass
