"""Exception hierarchy shared by every module."""


class DelrefError(Exception):
    """Base class; ``exit_code`` drives the CLI exit status."""

    exit_code = 1


class InputError(DelrefError):
    exit_code = 2


class InvariantViolation(DelrefError):
    exit_code = 3


class IoError(DelrefError):
    exit_code = 4


class DegenerateTriangle(InputError):
    pass


class DegenerateSegment(InputError):
    pass


class DegenerateInput(InputError):
    pass


class DuplicateVertex(InputError):
    pass


class OutsideHull(InputError):
    pass


class NoFeaturePair(InputError):
    pass


class NoSuchSegment(InputError):
    pass


class OutOfRange(InputError):
    pass


class BelowFloor(InputError):
    pass


class EmptyMesh(InputError):
    pass


class ParseError(InputError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvalidDomain(InputError):
    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)


class ConfigError(InputError):
    pass


class RefinementStalled(InvariantViolation):
    pass


class PreprocessDiverged(InvariantViolation):
    pass


class NotSequentializable(InvariantViolation):
    def __init__(self, step, reason=""):
        self.step = step
        super().__init__(f"step {step}: {reason}" if reason else f"step {step}")
