"""Exception types shared across the package."""


class GestmapError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(GestmapError):
    """A file or stream could not be parsed or validated.

    ``locus`` names where the problem sits, e.g. ``"line 4, column 11"``
    or ``"tasks[2].category"``.
    """

    def __init__(self, message: str, locus: str | None = None):
        self.locus = locus
        if locus:
            message = f"{locus}: {message}"
        super().__init__(message)


class DuplicateIdError(ParseError):
    """Two entries within one activity share an id."""


class UnknownCategoryError(ParseError):
    """A task names a category that does not exist for its activity."""


class AmbiguousReferenceError(GestmapError):
    """A bare task id matches tasks in more than one activity."""


class InfeasibleError(GestmapError):
    """No injective mapping exists (fewer gestures than tasks)."""


class GuardExceededError(GestmapError):
    """Exhaustive search would enumerate more candidates than the guard allows."""

    def __init__(self, count: int, guard: int):
        self.count = count
        self.guard = guard
        super().__init__(
            f"exhaustive search would visit {count} mappings, above the guard of {guard}"
        )


class NonSeparableError(GestmapError):
    """A solver restricted to separable criteria was given a non-separable one."""


class MissingContextError(GestmapError):
    """A criterion needs data the scoring context does not provide."""


class WeightError(GestmapError):
    """Weight vector does not match the active criterion set."""


class EmptyCriteriaError(GestmapError):
    """Aggregate quality is undefined for an empty criterion set."""
