class MtkError(Exception):
    """Base class for all errors raised by this package."""


class ArityError(MtkError):
    """A tuple or nesting exceeds the arity bound of the structure at hand."""


class BaseMismatchError(MtkError):
    """Inputs that must live over the same base category do not."""


class ValidationError(MtkError):
    """Structural data (tables, functor laws, ...) failed validation."""


class NoStabilisation(MtkError):
    """The sequential coequaliser did not stabilise within the step budget."""

    def __init__(self, budget):
        super().__init__(
            "sequence did not stabilise within budget %d (try a larger budget)" % budget
        )
        self.budget = budget


class IsoNotFound(MtkError):
    """No isomorphism commuting with the required maps exists; build-stopping."""
