class CFAError(Exception):
    """Base class for errors raised by cfafusion."""


class ParseError(CFAError, ValueError):
    """A score file does not follow the CSV grammar."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvalidTableError(CFAError, ValueError):
    """A ScoreTable failed structural validation."""

    def __init__(self, report):
        self.report = report
        super().__init__("; ".join(v.message for v in report.violations))


class ConfigError(CFAError, ValueError):
    """A fusion or run configuration is inconsistent."""


class UnknownSystemError(ConfigError, KeyError):
    def __init__(self, system_id: str):
        self.system_id = system_id
        super().__init__(f"unknown system {system_id}")

    def __str__(self) -> str:
        return self.args[0]
