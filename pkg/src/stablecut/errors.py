"""Exception hierarchy shared by all stablecut modules."""


class StableCutError(Exception):
    pass


# graph construction / lookup
class GraphError(StableCutError, ValueError):
    pass


class DuplicateEdge(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class NonPositiveWeight(GraphError):
    pass


class UnknownEdge(GraphError):
    pass


class UnknownNode(GraphError):
    pass


class Disconnected(StableCutError, ValueError):
    """Raised where an operation needs a connected graph."""


class TooSmall(StableCutError, ValueError):
    pass


class TooLarge(StableCutError, ValueError):
    pass


class NotBipartition(StableCutError, ValueError):
    pass


# linear algebra
class NotSymmetric(StableCutError, ValueError):
    pass


class NoConvergence(StableCutError, ArithmeticError):
    pass


# metapopulation models
class PatchSetMismatch(StableCutError, ValueError):
    pass


class DisconnectedSpeciesGraph(Disconnected):
    pass


class SinglePatch(StableCutError, ValueError):
    pass


class BadParams(StableCutError, ValueError):
    pass


class NotEquilibrium(StableCutError, ValueError):
    pass


class ParseError(StableCutError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
