"""Exception types shared by the set structures."""


class SetixError(Exception):
    pass


class CapacityError(SetixError):
    """A set would reach the family's size cap."""


class DuplicateElementError(SetixError, KeyError):
    pass


class ElementNotFoundError(SetixError, KeyError):
    pass


class UnknownSetError(SetixError, KeyError):
    pass


class FieldRangeError(SetixError, ValueError):
    """A value does not fit in a packed field."""


class LayoutMismatchError(SetixError, ValueError):
    pass


class GraphParseError(SetixError, ValueError):
    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno
