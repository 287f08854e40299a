"""Exception hierarchy shared by all modules."""


class PtolemyError(Exception):
    """Base class for domain errors (CLI exit code 1)."""


class ParseError(PtolemyError):
    pass


# fatgraph
class Disconnected(PtolemyError):
    pass


class InvolutionFixedPoint(PtolemyError):
    pass


class MissingTail(PtolemyError):
    pass


class NotBordered(PtolemyError):
    pass


class NotTrivalent(PtolemyError):
    pass


class TailMove(PtolemyError):
    pass


# freegroup
class RankMismatch(PtolemyError):
    pass


class IndexOutOfRange(PtolemyError):
    pass


# sequences
class NonComposable(PtolemyError):
    pass


# chord diagrams
class NotReduced(PtolemyError):
    pass


class LetterMultiplicity(PtolemyError):
    pass


class NoNeighbor(PtolemyError):
    pass


# symplectic
class MarkingInvalid(PtolemyError):
    pass


class DegenerateForm(PtolemyError):
    pass


class NotNormalForm(PtolemyError):
    pass


class NotPrimitive(PtolemyError):
    pass


class BasisNotGeometric(PtolemyError):
    pass


class NotLagrangian(PtolemyError):
    pass
