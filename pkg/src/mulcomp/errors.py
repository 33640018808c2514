"""Exception types shared by the library and mapped to CLI exit codes."""


class MulcompError(Exception):
    pass


class InvalidArgumentError(MulcompError, ValueError):
    pass


class OutOfRangeError(MulcompError, ValueError):
    pass


class ResourceLimitError(MulcompError):
    pass


class EmptyResultError(MulcompError):
    pass


class ParseError(InvalidArgumentError):
    """Descriptor text that does not parse; ``pos`` is a 0-based offset."""

    def __init__(self, message, text, pos):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}:\n  {text}\n  {' ' * pos}^")
