"""Exception hierarchy shared by the engine and the front end."""


class SkeinError(Exception):
    """Base class for domain errors (CLI exit code 1)."""


class DescriptorMismatch(SkeinError):
    pass


class CoefficientDomainError(SkeinError):
    pass


class IncompleteSubstitution(SkeinError):
    pass


class NotInvertible(SkeinError):
    pass


class AxiomError(SkeinError):
    """A Frobenius system failed one of its defining identities.

    ``identity`` names the identity, ``witnesses`` lists the basis elements
    (rendered) at which it fails.
    """

    def __init__(self, identity, witnesses=()):
        self.identity = identity
        self.witnesses = list(witnesses)
        msg = f"axiom violated: {identity}"
        if self.witnesses:
            msg += " (fails at " + ", ".join(self.witnesses) + ")"
        super().__init__(msg)


class NoDualBasis(SkeinError):
    def __init__(self, determinant):
        self.determinant = determinant
        super().__init__(f"Gram determinant {determinant} is not a unit")


class TwistError(SkeinError):
    pass


class WordShapeError(SkeinError):
    def __init__(self, level, message):
        self.level = level
        super().__init__(f"level {level}: {message}")


class SignatureMismatch(SkeinError):
    pass


class GradingError(SkeinError):
    pass


class PairingError(SkeinError):
    pass


class StateSumTooLarge(SkeinError):
    pass
