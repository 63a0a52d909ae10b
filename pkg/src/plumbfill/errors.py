class PlumbfillError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(PlumbfillError, ValueError):
    pass


class CapUnavailable(PlumbfillError):
    def __init__(self, b: int, n: int):
        super().__init__(f"concave cap needs b >= n+1, got b={b}, n={n}")
        self.b = b
        self.n = n


class InconsistentArrangement(PlumbfillError, ValueError):
    pass


class SearchLimitExceeded(PlumbfillError):
    """Raised when a search visits more nodes than allowed.

    ``partial`` holds whatever results were collected before the cutoff.
    """

    def __init__(self, explored: int, partial=None):
        super().__init__(f"search aborted after exploring {explored} nodes")
        self.explored = explored
        self.partial = partial if partial is not None else []


class UnrealizableStep(PlumbfillError):
    pass


class SynthesisRefused(PlumbfillError):
    pass


class DecodeError(PlumbfillError, ValueError):
    pass
