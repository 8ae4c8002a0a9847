"""Exception types raised across the package.

Every error that identifies a witness (indices of offending points or
vertices) stores it on the exception so callers can re-evaluate the
violation.
"""


class HypApproxError(ValueError):
    """Base class for all package errors."""


# --- metric validation -------------------------------------------------

class MetricValidationError(HypApproxError):
    pass


class NotSymmetric(MetricValidationError):
    def __init__(self, i, j):
        self.i, self.j = i, j
        super().__init__(f"dist[{i}][{j}] != dist[{j}][{i}]")


class NegativeEntry(MetricValidationError):
    def __init__(self, i, j):
        self.i, self.j = i, j
        super().__init__(f"dist[{i}][{j}] < 0")


class NonzeroDiagonal(MetricValidationError):
    def __init__(self, i):
        self.i = i
        super().__init__(f"dist[{i}][{i}] != 0")


class TriangleViolation(MetricValidationError):
    def __init__(self, i, j, k):
        self.i, self.j, self.k = i, j, k
        super().__init__(f"dist[{i}][{k}] > dist[{i}][{j}] + dist[{j}][{k}]")


class DuplicatePoint(MetricValidationError):
    def __init__(self, i, j):
        self.i, self.j = i, j
        super().__init__(f"dist[{i}][{j}] == 0 for distinct points {i}, {j}")


class AlphaOutOfRange(HypApproxError):
    pass


class EmptySet(HypApproxError):
    pass


# --- approximation graph ----------------------------------------------

class InvalidParameter(HypApproxError):
    pass


class DegenerateSpace(HypApproxError):
    """The space has a single point; the truncation level is undefined."""


class NoRadialPath(HypApproxError):
    pass


# --- hyperbolicity -----------------------------------------------------

class TooLarge(HypApproxError):
    """Vertex count exceeds the exhaustive-sweep limit and sampling is off."""


class DegenerateLevel(HypApproxError):
    pass


# --- quasi-symmetry ----------------------------------------------------

class TooFewPoints(HypApproxError):
    pass


class PreconditionViolated(HypApproxError):
    """Inputs fail a check's hypothesis; signals a bad generator, not a failure."""


# --- extension ---------------------------------------------------------

class ParameterMismatch(HypApproxError):
    pass


class SpaceMismatch(HypApproxError):
    pass
