"""Exception types shared across the toolkit."""


class GraphError(Exception):
    """Base class for structural problems in graph inputs."""


class DuplicateEdge(GraphError):
    """Parallel edge (or self-loop) in an edge list."""


class DisconnectedGraph(GraphError):
    pass


class EulerViolation(GraphError):
    """Face tracing did not satisfy V - E + F = 2."""


class InconsistentRotation(GraphError):
    """Rotation system does not match the edge list."""


class InvalidVertex(GraphError):
    pass


class NotAdmissible(GraphError):
    """The (graph, s, t) triple does not admit an st-orientation
    with s and t on a common face."""


class CyclicInput(GraphError):
    """A directed input that must be acyclic contains a cycle."""


class NotBipolarFace(GraphError):
    """A face boundary does not split into two directed paths."""


class InvalidOrientation(GraphError):
    pass


class InconsistentLabeling(GraphError):
    """Angle labels force contradictory edge directions."""


class NegativeCount(ValueError):
    pass


class InvalidK(ValueError):
    pass


class TooLarge(ValueError):
    pass


class FormatError(ValueError):
    """Malformed text input (.pg / .ori / .lab / .cnf)."""
