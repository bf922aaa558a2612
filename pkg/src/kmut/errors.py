"""Exception hierarchy shared by the math core and the script frontend."""


class KMutError(Exception):
    """Base class for errors raised by kmut."""


class UnsupportedOperation(KMutError, ValueError):
    """A K-group operation that has no defined meaning for its inputs.

    Raised for fiber/fiber pairings, dualizing or pushing forward fiber
    sheaves, and twisting virtual bundles of negative rank.
    """


class UnsupportedPairing(UnsupportedOperation):
    pass


class MutationError(KMutError):
    """Failure inside a mutation sequence; carries the step index."""

    def __init__(self, step: int, cause: Exception):
        super().__init__(f"step {step}: {cause}")
        self.step = step
        self.cause = cause
