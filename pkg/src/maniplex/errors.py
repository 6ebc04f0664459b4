"""Exception hierarchy.  Everything raised on bad input derives from ManiplexError."""


class ManiplexError(Exception):
    pass


class ValidationError(ManiplexError, ValueError):
    """Raw connection data does not describe a premaniplex."""


class NotInvolution(ValidationError):
    def __init__(self, color, flag, msg=None):
        self.color, self.flag = color, flag
        super().__init__(msg or f"connection {color} is not an involution at flag {flag}")


class CommutationFailure(ValidationError):
    def __init__(self, i, j, flag):
        self.i, self.j, self.flag = i, j, flag
        super().__init__(f"connections {i} and {j} do not commute at flag {flag}")


class Disconnected(ValidationError):
    def __init__(self, n_components):
        self.n_components = n_components
        super().__init__(f"flag graph has {n_components} connected components")


class BadParameter(ManiplexError, ValueError):
    pass


class RankMismatch(ManiplexError, ValueError):
    def __init__(self, *ranks):
        self.ranks = ranks
        super().__init__("rank mismatch: " + ", ".join(map(str, ranks)))


class EmptyInterval(ManiplexError, ValueError):
    pass


class OutOfRange(ManiplexError, IndexError):
    pass


class EmptyList(ManiplexError, ValueError):
    pass


class IImproper(BadParameter):
    pass


class NotASubgroup(ManiplexError, ValueError):
    pass


class NotAManiplex(ManiplexError, ValueError):
    pass


class ModePreconditionViolated(ManiplexError, ValueError):
    pass


class NotSggi(ManiplexError, ValueError):
    pass


class NotAdmissible(ManiplexError, ValueError):
    pass


class PreconditionViolated(ManiplexError, ValueError):
    def __init__(self, which, msg=None):
        self.which = which
        super().__init__(msg or f"precondition violated: {which}")


class NotTwoOrbit(ManiplexError, ValueError):
    pass


class NotPolytope(ManiplexError, ValueError):
    pass


class SchemaError(ManiplexError, ValueError):
    def __init__(self, path, msg):
        self.path = path
        super().__init__(f"{path}: {msg}" if path else msg)
