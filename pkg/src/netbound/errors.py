"""Exception hierarchy shared by every netbound module."""


class NetboundError(Exception):
    """Base class for all errors raised by netbound."""


class NonSquare(NetboundError):
    pass


class Singular(NetboundError):
    pass


class IndexOutOfRange(NetboundError):
    pass


class UnknownNode(NetboundError):
    pass


class ParseError(NetboundError):
    pass


class SchemaError(NetboundError):
    pass


class InvalidCut(NetboundError):
    """A cut pair or chain violates its structural invariants.

    ``violations`` lists every failed clause in human-readable form.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations) or "invalid cut")


class InvalidChain(InvalidCut):
    pass


class TooLarge(NetboundError):
    pass


class WrongField(NetboundError):
    pass


class SingularPattern(NetboundError):
    pass


class NotDiagonalizable(NetboundError):
    pass


class ZeroGainOnSupport(NetboundError):
    pass


class DirectionCollision(NetboundError):
    pass


class IndexOutOfBox(NetboundError):
    pass
