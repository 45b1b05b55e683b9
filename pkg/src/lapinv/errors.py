"""Exception hierarchy. Each class carries a stable machine-readable ``code``."""


class LapinvError(Exception):
    code = "error"


class DimensionError(LapinvError, ValueError):
    code = "dimension_mismatch"


class PreconditionError(LapinvError, ValueError):
    code = "precondition_failed"


class IndeterminateError(LapinvError):
    """A computation exhausted its budget before reaching a verdict."""

    code = "indeterminate"


class ParseError(LapinvError, ValueError):
    code = "parse_error"

    def __init__(self, message: str, text: str = "", position: int = 0):
        self.text = text
        self.position = position
        prefix = text[:position]
        self.line = prefix.count("\n") + 1
        self.column = position - (prefix.rfind("\n") + 1) + 1
        super().__init__(f"{message} at position {position} (line {self.line}, column {self.column})")
        self.message = message


class GroupCapExceeded(LapinvError):
    code = "group_cap_exceeded"
