"""Exception hierarchy shared by all modules."""


class NlcDimError(Exception):
    """Base class for every error raised by this package."""


class CycleInInput(NlcDimError):
    pass


class NotIncomparable(NlcDimError):
    pass


class BadParameter(NlcDimError):
    pass


class TooLarge(NlcDimError):
    pass


class TooSmall(NlcDimError):
    pass


class NotFound(NlcDimError):
    pass


class InvalidDecomposition(NlcDimError):
    pass


class SearchExhausted(NlcDimError):
    pass


class NotDecent(NlcDimError):
    pass


class NotForwardRamseyan(NlcDimError):
    pass


class WitnessNotFound(NlcDimError):
    pass


class ParseError(NlcDimError):
    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}: "
        elif where:
            where += " "
        super().__init__(where + message)
