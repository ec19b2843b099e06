"""Exception hierarchy shared across the package.

Every error the library raises on purpose derives from CurvpruneError, so
callers (and the CLI) can distinguish our failures from genuine bugs.
"""

from __future__ import annotations

__all__ = [
    "CurvpruneError",
    "ConfigurationError",
    "ContractError",
    "DegenerateNetworkError",
    "DisconnectedSupportError",
    "EvaluationError",
    "OracleRefusal",
    "UndefinedMetricError",
]


class CurvpruneError(Exception):
    """Base class for all package-specific errors."""


class ConfigurationError(CurvpruneError, ValueError):
    """Invalid generator, experiment, or CLI configuration (exit code 2)."""


class ContractError(CurvpruneError, ValueError):
    """An operation was invoked outside its documented contract."""


class UndefinedMetricError(CurvpruneError, ValueError):
    """A metric denominator is zero, so the value does not exist."""


class DegenerateNetworkError(CurvpruneError, ValueError):
    """A network collapsed to something a ratio cannot be formed over."""


class DisconnectedSupportError(CurvpruneError, ValueError):
    """Two measures live in different graph components; no finite plan exists."""


class OracleRefusal(CurvpruneError, ValueError):
    """A brute-force oracle was asked for an instance above its size bounds."""


class EvaluationError(CurvpruneError, RuntimeError):
    """An evaluator failed: bad protocol line, dead child, timeout (exit code 3).

    ``diagnostics`` carries whatever context was salvageable (stderr tail,
    exit status, offending line); ``trace`` keeps any partially completed
    search trace so an aborted experiment is still inspectable.
    """

    def __init__(self, message: str, *, diagnostics: dict | None = None, trace: list | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
        self.trace = trace or []
