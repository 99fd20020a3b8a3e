"""Exception taxonomy; the CLI maps each class to an exit code."""


class DerivedCellsError(Exception):
    pass


class MalformedInput(DerivedCellsError):
    """Input that does not describe a valid object (exit code 3)."""


class ComplexError(MalformedInput):
    """A complex or chain map that fails its defining identities."""

    def __init__(self, message, degree=None):
        super().__init__(message)
        self.degree = degree


class HypothesisFailed(DerivedCellsError):
    """A mathematical precondition does not hold (exit code 2)."""


class OrthogonalityFailed(HypothesisFailed):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class VanishingPreconditionFailed(HypothesisFailed):
    def __init__(self, message, degree=None):
        super().__init__(message)
        self.degree = degree


class NoCertificate(DerivedCellsError):
    """No annihilation certificate exists for the given data."""


class LiftFailed(DerivedCellsError):
    """A linear solve that the theory guarantees came back empty: a bug."""


class ReplayFailed(DerivedCellsError):
    """A stored certificate does not re-verify (exit code 4)."""
