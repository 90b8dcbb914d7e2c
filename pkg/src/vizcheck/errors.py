"""Engine error hierarchy.

Every error raised by the engine carries a stable machine-readable code so
the HTTP service and the CLI can map it onto one wire-format ApiError.
"""

from __future__ import annotations

from typing import Any


class EngineError(Exception):
    """Base class for all engine errors."""

    code = "internal"

    def __init__(self, message: str, detail: dict[str, Any] | None = None):
        super().__init__(message)
        self.message = message
        self.detail = detail or {}

    def to_payload(self) -> dict[str, Any]:
        return {"code": self.code, "message": self.message, "detail": self.detail}


class ParseError(EngineError):
    """Malformed input text: CSV structure or formula syntax."""

    code = "parse_error"

    def __init__(self, message: str, position: int | None = None,
                 detail: dict[str, Any] | None = None):
        detail = dict(detail or {})
        if position is not None:
            detail["position"] = position
        super().__init__(message, detail)
        self.position = position


class UnknownVariableError(EngineError):
    """A referenced column, dataset, or model id does not exist."""

    code = "unknown_variable"


class DomainError(EngineError):
    """Values outside an operation's domain (transforms, likelihood support)."""

    code = "domain_error"


class NotConvergedError(EngineError):
    """Operation requires a converged fit but the model did not converge."""

    code = "fit_not_converged"


class UnsupportedError(EngineError):
    """Valid input asking for functionality the engine deliberately rejects."""

    code = "unsupported"
