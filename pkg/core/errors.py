# core/errors.py


class AlgebraError(ValueError):
    """Base class for every mathematical or input error raised by the library."""


class GroupMismatch(AlgebraError):
    pass


class InfiniteGroup(AlgebraError):
    """An operation needs to exhaust a group that has a free generator."""


class IllDefined(AlgebraError):
    """A form or homomorphism violates a well-definedness congruence."""


class NotAWitness(AlgebraError):
    pass


class NotNormalized(AlgebraError):
    pass


class NotFree(AlgebraError):
    pass


class SearchSpaceTooLarge(AlgebraError):
    """candidates is None when some entry ranges over an infinite group."""

    def __init__(self, what: str, candidates: int | None, limit: int):
        count = "unbounded" if candidates is None else str(candidates)
        super().__init__(f"{what}: {count} candidates exceeds the limit of {limit}")
        self.candidates = candidates
        self.limit = limit


class InvalidCocycle(AlgebraError):
    def __init__(self, report):
        failed = ", ".join(report.failures()) or "unknown"
        super().__init__(f"not an abelian 3-cocycle (failed: {failed})")
        self.report = report


class DocumentError(AlgebraError):
    """Malformed input document; the message carries the location."""

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location
