"""Exception hierarchy shared by all snw modules."""


class SNWError(Exception):
    """Base class for every error raised by the package."""


class DigraphError(SNWError, ValueError):
    pass


class LoopEdge(DigraphError):
    pass


class TwoCycle(DigraphError):
    pass


class DuplicateEdge(DigraphError):
    pass


class VertexOutOfRange(DigraphError):
    pass


class EmptySet(DigraphError):
    pass


class DGParseError(DigraphError):
    pass


class NonPositiveLambda(SNWError, ValueError):
    pass


class TooLargeForExact(SNWError, ValueError):
    pass


class NotACounterexample(SNWError, ValueError):
    pass


class NoCounterexampleComponent(SNWError, RuntimeError):
    """Restriction found no strongly connected component that is still a
    lambda-counterexample. This should be impossible and is never swallowed."""


class EmptyFirstNeighborhood(SNWError, ValueError):
    pass


class BadM(SNWError, ValueError):
    pass


class BadTolerance(SNWError, ValueError):
    pass


class NoSignChange(SNWError, ValueError):
    pass


class IndexOutOfRange(SNWError, ValueError):
    pass


class UniverseTooLarge(SNWError, ValueError):
    def __init__(self, message: str, required: int):
        super().__init__(message)
        self.required = required


class TooLargeForCanonical(SNWError, ValueError):
    pass
