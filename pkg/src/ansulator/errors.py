"""Exception hierarchy shared by all ansulator modules."""


class AnsulatorError(Exception):
    """Base class for every error raised by this package."""


class ZeroInverse(AnsulatorError, ZeroDivisionError):
    pass


class MalformedData(AnsulatorError, ValueError):
    pass


class UnsupportedSpec(AnsulatorError, ValueError):
    pass


class InconsistentPointedData(AnsulatorError, ValueError):
    pass


class NotModular(AnsulatorError):
    pass


class NotPointed(AnsulatorError):
    pass


class SchemaError(AnsulatorError, ValueError):
    """A file does not match its JSON schema; ``pointer`` locates the problem."""

    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer
        self.message = message


class ValidationError(AnsulatorError, ValueError):
    """Structurally sound data that violates one or more invariants."""

    def __init__(self, violations):
        self.violations = list(violations)
        names = sorted({v.invariant for v in self.violations})
        super().__init__("violated invariants: " + ", ".join(names))


class NotIsotropic(AnsulatorError, ValueError):
    pass


class CocycleObstruction(AnsulatorError, ValueError):
    pass


class NotASubgroup(AnsulatorError, ValueError):
    pass


class NotSpecial(AnsulatorError, ValueError):
    pass


class NotVerified(AnsulatorError, ValueError):
    pass


class CategoryMismatch(AnsulatorError, ValueError):
    pass


class BadParameters(AnsulatorError, ValueError):
    pass
