class NLabException(Exception):
    """Base error; `exit_code` is what the experiment runner returns for it."""

    exit_code = 2

    def __init__(self, message, *, witness=None):
        super().__init__(message)
        self.witness = witness or {}

    @property
    def message(self):
        return str(self)

    @property
    def errors(self):
        return {
            "message": str(self),
            "type": type(self).__name__,
            "exit_code": self.exit_code,
            "witness": self.witness,
        }


class ConfigError(NLabException):
    exit_code = 1


class NLabMissedArgument(ConfigError):
    def __init__(self, name):
        super().__init__("Missed argument: " + str(name))


class NLabInvalidArgumentType(ConfigError):
    def __init__(self, name, value):
        super().__init__("Invalid type of argument '" + str(name) + "': " + str(value))


class NLabInvEnvValue(ConfigError):
    def __init__(self, name, value):
        super().__init__("Invalid value of environment variable '" + str(name) + "': " + str(value))


class NLabUnknownKey(ConfigError):
    def __init__(self, section, keys):
        super().__init__("Unknown keys in '" + str(section) + "': " + ", ".join(sorted(keys)))


class DomainError(NLabException):
    """Input outside the domain of an operation (exit 2)."""

    exit_code = 2


class NumericalError(NLabException):
    exit_code = 2


class InternalError(NLabException):
    exit_code = 2


class PreconditionError(NLabException):
    """A theorem hypothesis does not hold for the given operator (exit 3)."""

    exit_code = 3


class ToleranceError(NLabException):
    exit_code = 4
