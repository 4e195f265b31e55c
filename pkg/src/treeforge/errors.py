"""Exception hierarchy shared by every treeforge module."""


class TreeforgeError(Exception):
    """Base class for all library errors."""


class WindowError(TreeforgeError):
    """Malformed window input (self-loops, bad ids, unknown edges)."""


class CenterOnBoundary(TreeforgeError):
    pass


class DegreeBoundViolated(TreeforgeError):
    pass


class NonPlanarRotation(TreeforgeError):
    """The rotation system does not describe a planar embedding."""


class InvalidBasis(TreeforgeError):
    pass


class PreconditionViolated(TreeforgeError):
    pass


class UnknownDualEdge(TreeforgeError):
    pass


class Condition4Violated(TreeforgeError):
    def __init__(self, vertex, layer):
        super().__init__(f"f_{layer}({vertex}) is not in a later domain and is not a boundary vertex")
        self.vertex = vertex
        self.layer = layer


class CyclicInput(TreeforgeError):
    def __init__(self, layer, cycle=()):
        super().__init__(f"partial map f_{layer} has a cycle through {list(cycle)}")
        self.layer = layer
        self.cycle = tuple(cycle)


class NoEscape(TreeforgeError):
    def __init__(self, component):
        super().__init__(f"component {component} cannot reach the boundary")
        self.component = component


class AMissesComponent(TreeforgeError):
    def __init__(self, component):
        super().__init__(f"anchor set misses component {component}")
        self.component = component


class TwoEndedObstruction(TreeforgeError):
    """Raised when a one-ended construction is requested on a two-ended component."""

    def __init__(self, components):
        super().__init__(f"two-ended components refuse a one-ended subforest: {list(components)}")
        self.components = tuple(components)


class NotOneEnded(TreeforgeError):
    pass


class NotLineForest(TreeforgeError):
    pass


class TooLarge(TreeforgeError):
    pass


class BudgetExceeded(TreeforgeError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report or {}


class BadParams(TreeforgeError):
    pass


class DegenerateSites(TreeforgeError):
    pass


class NotHyperbolic(TreeforgeError):
    pass


class MalformedComplex(TreeforgeError):
    pass


class ForestNotSpanning(TreeforgeError):
    pass


class NotSaturated(TreeforgeError):
    pass


class StuckNoFreePair(TreeforgeError):
    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state
