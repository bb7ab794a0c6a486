from typing import Optional


class BlowupError(Exception):
    pass


class DomainError(BlowupError, ValueError):
    """
    Input outside the domain of an operation.
    """


class SingularPointError(DomainError):
    pass


class PoleError(DomainError):
    pass


class SolverError(BlowupError, RuntimeError):
    pass


class ConfigError(BlowupError, ValueError):
    def __init__(self, message: str, field_path: Optional[str] = None):
        self.field_path = field_path
        if field_path:
            message = f"{field_path}: {message}"
        super().__init__(message)
