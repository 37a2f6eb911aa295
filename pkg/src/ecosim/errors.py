"""Exception hierarchy for the ecosim package.

``ConfigError`` covers bad run configuration, ``DataError`` covers problems
in user-supplied input files (stock tables, emission tables, overrides).
The CLI maps these onto distinct exit codes.
"""

from __future__ import annotations


class EcosimError(Exception):
    """Base class for all ecosim errors."""


class ConfigError(EcosimError):
    """A run configuration is malformed or inconsistent.

    ``field_errors`` maps field paths (e.g. ``"ranges.lifespan_threshold"``)
    to human-readable messages; empty when the problem is not field-specific.
    """

    def __init__(self, message: str, field_errors: dict[str, str] | None = None):
        super().__init__(message)
        self.field_errors = dict(field_errors or {})


class DataError(EcosimError):
    """Base class for errors in user-supplied data files."""


class MissingColumn(DataError):
    def __init__(self, column: str):
        super().__init__(f"required column {column!r} not found in header")
        self.column = column


class RowError(DataError):
    """A data row failed to parse or violated an invariant.

    ``row`` is the 1-based data row index (header excluded).
    """

    def __init__(self, row: int, reason: str):
        super().__init__(f"row {row}: {reason}")
        self.row = row
        self.reason = reason


class UnknownCode(DataError):
    def __init__(self, attribute: str, value: str):
        super().__init__(f"unknown {attribute} code {value!r}")
        self.attribute = attribute
        self.value = value


class InvalidThresholds(EcosimError):
    pass


class SampleTooLarge(DataError):
    def __init__(self, requested: int, available: int):
        super().__init__(f"sample of {requested} exceeds stock of {available} buildings")
        self.requested = requested
        self.available = available


class DuplicateArchetype(DataError):
    def __init__(self, code: str, row: int):
        super().__init__(f"row {row}: duplicate archetype code {code!r}")
        self.code = code
        self.row = row


class NegativeEmission(DataError):
    def __init__(self, code: str, stage: str, value: float):
        super().__init__(f"archetype {code!r} stage {stage}: negative emission {value}")
        self.code = code
        self.stage = stage
        self.value = value


class MalformedRow(DataError):
    def __init__(self, row: int, reason: str):
        super().__init__(f"row {row}: {reason}")
        self.row = row
        self.reason = reason


class MissingArchetype(DataError):
    def __init__(self, code: str):
        super().__init__(f"no emission record for archetype {code!r} and fallback is strict")
        self.code = code


class MissingCostEntry(DataError):
    def __init__(self, occupancy: str, action: str):
        super().__init__(f"no cost entry for ({occupancy}, {action})")
        self.occupancy = occupancy
        self.action = action


class RankDeficient(EcosimError):
    """The design matrix is (numerically) rank deficient."""

    def __init__(self, column: str):
        super().__init__(
            f"design matrix is rank deficient; column {column!r} is collinear "
            "with the preceding columns"
        )
        self.column = column


class EncodingMismatch(EcosimError):
    def __init__(self, missing: list[str]):
        super().__init__(f"cannot encode input for model columns: {', '.join(missing)}")
        self.missing = missing
