"""Exception types shared across the package."""


class DocumentError(ValueError):
    """A serialized input document is malformed or internally inconsistent."""


class ExactSolverLimitError(RuntimeError):
    """The exact solver was asked for an instance above its search-space guard."""
