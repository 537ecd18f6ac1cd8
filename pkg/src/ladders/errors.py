"""Exception hierarchy shared by all modules.

The command line maps :class:`ParseError` to exit status 2,
:class:`PreconditionError` to 3 and :class:`InvariantError` to 4.
"""


class LadderError(Exception):
    pass


class ParseError(LadderError, ValueError):
    pass


class PreconditionError(LadderError, ValueError):
    pass


class UnknownElementError(PreconditionError, KeyError):
    def __init__(self, element):
        super().__init__(f"unknown element {element!r}")
        self.element = element

    def __str__(self):
        return self.args[0]


class NotALatticeError(PreconditionError):
    pass


class WindowError(PreconditionError):
    pass


class InfeasibleError(PreconditionError):
    def __init__(self, message, max_length=None):
        super().__init__(message)
        self.max_length = max_length


class IncompatibleError(PreconditionError):
    pass


class InvariantError(LadderError, AssertionError):
    pass
