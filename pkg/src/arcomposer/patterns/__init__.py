from .registry import (
    EXECUTABLE_NAMES,
    HINT_ONLY_NAMES,
    REGISTRY_ORDER,
    PatternSchema,
    get_schema,
    registry,
    registry_fingerprint,
)
from .types import (
    PatternInstance,
    Program,
    Selector,
    program_depth,
    required_roles,
    validate_instance,
    validate_program,
)

__all__ = [
    "PatternSchema",
    "registry",
    "get_schema",
    "registry_fingerprint",
    "EXECUTABLE_NAMES",
    "HINT_ONLY_NAMES",
    "REGISTRY_ORDER",
    "Selector",
    "PatternInstance",
    "Program",
    "program_depth",
    "required_roles",
    "validate_instance",
    "validate_program",
]
