"""Exception hierarchy shared by every module of the package."""


class VRGlueError(ValueError):
    """Base class for input and hypothesis errors raised by vrglue."""


# metric construction
class AsymmetricMatrix(VRGlueError):
    pass


class NegativeDistance(VRGlueError):
    pass


class NonzeroDiagonal(VRGlueError):
    pass


class TriangleViolation(VRGlueError):
    def __init__(self, i, j, k, message=None):
        self.triple = (i, j, k)
        super().__init__(message or f"d({i},{k}) > d({i},{j}) + d({j},{k})")


class DuplicateLabel(VRGlueError):
    pass


class DisconnectedGraph(VRGlueError):
    pass


class NonIsometricA(VRGlueError):
    pass


class EmptyA(VRGlueError):
    pass


class UnknownBasepoint(VRGlueError):
    pass


class EmptyY0(VRGlueError):
    pass


class TooFewPoints(VRGlueError):
    pass


class UnknownLabel(VRGlueError):
    pass


# complexes
class UnknownLandmark(VRGlueError):
    pass


class VertexClash(VRGlueError):
    pass


class SimplexNotInComplex(VRGlueError):
    pass


class NotAFreeFace(VRGlueError):
    pass


class HypothesisViolation(VRGlueError):
    """A collapse lemma was called on an instance violating its hypotheses."""

    def __init__(self, condition: str, witness=None):
        self.condition = condition
        self.witness = witness
        msg = condition if witness is None else f"{condition}: {witness!r}"
        super().__init__(msg)


class SigmaNotCollapsible(VRGlueError):
    """Greedy collapse did not reduce the complex to a point (inconclusive)."""


class CertificateError(VRGlueError):
    """A certificate failed independent replay."""


# gluing
class PrecondDiameterExceeded(VRGlueError):
    pass


class InvalidSplit(VRGlueError):
    pass


class SubgraphNotInGraph(VRGlueError):
    pass


class NotAPath(VRGlueError):
    pass


class HypothesisFailed(VRGlueError):
    def __init__(self, message: str, report=None):
        self.report = report
        super().__init__(message)


# homology
class DimensionCapTooLow(VRGlueError):
    pass


class InvalidFiltration(VRGlueError):
    pass


class RecipeNotAdmissible(VRGlueError):
    def __init__(self, message: str, report=None):
        self.report = report
        super().__init__(message)


class InadmissibleStep(RecipeNotAdmissible):
    def __init__(self, step_index: int, message: str, report=None):
        self.step_index = step_index
        super().__init__(f"step {step_index}: {message}", report)
