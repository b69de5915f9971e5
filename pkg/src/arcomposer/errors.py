"""Exception hierarchy for the solver.

Every error raised by the package derives from ArcError so callers can
catch broadly at pipeline boundaries (the eval harness must never let a
single bad task abort a batch).
"""


class ArcError(Exception):
    """Base class for all solver errors."""


# --- task parsing -----------------------------------------------------------

class MalformedJson(ArcError):
    """Input bytes are not valid JSON."""


class SchemaViolation(ArcError):
    """JSON parsed but does not match the ARC task schema (missing keys,
    ragged rows, wrong types)."""


class ColorOutOfRange(ArcError):
    """A cell value lies outside the 0-9 palette."""


class EmptyGrid(ArcError):
    """A grid has zero rows or zero columns."""


# --- rendering --------------------------------------------------------------

class PixelOutOfBounds(ArcError):
    """An object pixel falls outside the target frame during render."""


# --- pattern DSL ------------------------------------------------------------

class UnknownPattern(ArcError):
    """Pattern name not present in the registry."""


class IllegalParameter(ArcError):
    """Parameter name or value not allowed by the pattern schema."""

    def __init__(self, name: str, value: object, message: str = ""):
        self.name = name
        self.value = value
        super().__init__(message or f"illegal parameter {name}={value!r}")


class MissingBinding(ArcError):
    """A binding role required by the pattern is absent."""

    def __init__(self, role: str):
        self.role = role
        super().__init__(f"missing binding for role {role!r}")


class NotExecutable(ArcError):
    """The pattern is registered hint-only and has no executable semantics."""


class BindingResolutionFailed(ArcError):
    """A binding selector matched no object in the scene."""


class SemanticsViolation(ArcError):
    """The pattern's semantics cannot complete on this scene (e.g. a fill
    with no stop obstacle, or a parameter value pinned as non-executable)."""


class StepExecutionError(ArcError):
    """Wraps a step error with its position inside a program."""

    def __init__(self, step_index: int, cause: Exception):
        self.step_index = step_index
        self.cause = cause
        super().__init__(f"step {step_index}: {cause}")


# --- solution generation ----------------------------------------------------

class ExecutionFailed(ArcError):
    """Direct execution of the selected program failed on the test input."""


class NoOcclusion(ArcError):
    """Symmetry solver invoked on a grid with nothing to complete."""


class NoCandidates(ArcError):
    """Majority vote invoked with an empty candidate list."""


class Unsolvable(ArcError):
    """Every solution route failed for this task."""


# --- harness ----------------------------------------------------------------

class MissingGroundTruth(ArcError):
    """pass@2 scoring requested but the task carries no test outputs."""


# --- external adapters ------------------------------------------------------

class TransportFailure(ArcError):
    """External endpoint unreachable after the configured retries."""


class EmptyResponse(ArcError):
    """External endpoint answered with an empty or all-invalid payload."""
