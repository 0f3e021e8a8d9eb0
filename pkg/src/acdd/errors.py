"""Exception hierarchy shared across the package.

Grouped by CLI exit code: configuration errors (2), graph generation
errors (3), numerical failures (4). I/O errors use the builtin OSError.
"""


class AcddError(Exception):
    """Base class for all package errors."""


# -- configuration (exit code 2) --------------------------------------------

class ConfigError(AcddError):
    """Invalid run configuration (sizes, ranges, missing pieces)."""


class ConfigParseError(ConfigError):
    """Config file could not be parsed."""


class ConfigValidationError(ConfigError):
    """Config parsed but failed validation (unknown keys, bad ranges)."""


class DomainError(ConfigError):
    """Function argument outside its documented domain."""


class NotParameterized(ConfigError):
    """A nu-derivative was requested from a family without a nu parameter."""


# -- graph generation / structure (exit code 3) -----------------------------

class GraphError(AcddError):
    pass


class GenerationFailed(GraphError):
    """Random graph retry limit exhausted."""


class IsolatedNode(GraphError):
    def __init__(self, nodes):
        self.nodes = list(nodes)
        super().__init__(f"nodes with in-degree 0: {self.nodes}")


class SelfLoop(GraphError):
    def __init__(self, node):
        self.node = node
        super().__init__(f"self-edge at node {node}")


class DuplicateEdge(GraphError):
    def __init__(self, u, v):
        self.edge = (u, v)
        super().__init__(f"duplicate edge ({u}, {v})")


class NotEnoughEdges(GraphError):
    pass


class NotEnoughNonEdges(GraphError):
    pass


# -- numerical (exit code 4) -------------------------------------------------

class NumericalError(AcddError):
    pass


class EigenSolverFailure(NumericalError):
    pass


class DegenerateLeading(NumericalError):
    """Leading eigenvalue is not simple; perturbation formula undefined."""


class DegenerateCoefficient(NumericalError):
    """Ratio test coefficient is numerically zero."""


class IllConditioned(NumericalError):
    """Left/right eigenvector inner product numerically zero."""


class StepTooLarge(NumericalError):
    """Integrator state left [0,1]^n by more than the excursion tolerance."""


class NoCrossing(NumericalError):
    """Re(lambda_1) kept one sign over the whole parameter grid."""


class RootLost(NumericalError):
    """Tracked equilibrium root left (0,1) or could not be continued."""


class NonFinite(NumericalError):
    """A computed quantity diverged to NaN/Inf."""
