"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class TcorError(Exception):
    exit_code = 1


class InputError(TcorError):
    """Unreadable, malformed or non-finite input data."""

    exit_code = 3


class ConstantColumnError(TcorError):
    exit_code = 4

    def __init__(self, columns):
        self.columns = list(columns)
        shown = ", ".join(str(c) for c in self.columns[:10])
        more = "" if len(self.columns) <= 10 else f" (+{len(self.columns) - 10} more)"
        super().__init__(f"constant columns (0-based): {shown}{more}")


class AllColumnsConstantError(TcorError):
    exit_code = 5

    def __init__(self):
        super().__init__("every column is constant; nothing to correlate")


class ConvergenceError(TcorError):
    exit_code = 6

    def __init__(self, message, best_residual=None):
        self.best_residual = best_residual
        super().__init__(message)


class ConfigError(TcorError, ValueError):
    exit_code = 7


class SizeGuardError(TcorError):
    exit_code = 8
