"""Pattern instances, programs, and the object-selector vocabulary.

A PatternInstance fixes one schema, a (possibly partial) parameter
assignment, and bindings that resolve the schema's roles against a
concrete scene. Parameters left unset default to the first value of
their enum, so two instances that differ only in spelled-out defaults
share a canonical id.

Selectors are the only way programs point at objects. Multi-match
selectors (all / color / shape) bind for-each-match: kernels apply to
every resolved object. Extremal, size-rank, and id selectors resolve
to a single object.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..errors import (
    BindingResolutionFailed,
    IllegalParameter,
    MissingBinding,
    NotExecutable,
)
from ..scene import SceneGraph, GridObject, SHAPE_LABELS
from .registry import get_schema

EXTREMAL_KEYS = ("leftmost", "rightmost", "topmost", "bottommost")
SELECTOR_KINDS = ("all", "color", "shape", "extremal", "size_rank", "object_id")


@dataclass(frozen=True)
class Selector:
    """A deterministic object query against a SceneGraph."""

    kind: str
    value: int | str | None = None

    def __post_init__(self):
        if self.kind not in SELECTOR_KINDS:
            raise IllegalParameter("selector", self.kind)
        if self.kind == "all" and self.value is not None:
            raise IllegalParameter("selector", self.value)
        if self.kind == "color" and self.value not in range(10):
            raise IllegalParameter("selector.color", self.value)
        if self.kind == "shape" and self.value not in SHAPE_LABELS:
            raise IllegalParameter("selector.shape", self.value)
        if self.kind == "extremal" and self.value not in EXTREMAL_KEYS:
            raise IllegalParameter("selector.extremal", self.value)
        if self.kind in ("size_rank", "object_id") and not (
            isinstance(self.value, int) and self.value >= 0
        ):
            raise IllegalParameter(f"selector.{self.kind}", self.value)

    def resolve(self, scene: SceneGraph) -> list[GridObject]:
        """Matching objects in object_id order; raises when nothing matches."""
        # the same few selectors are resolved against the same scene by
        # every instance in a scan, so keep results on the scene
        cache = scene.__dict__.setdefault("_resolve_cache", {})
        key = (self.kind, self.value)
        out = cache.get(key)
        if out is None:
            objs = scene.objects
            if self.kind == "all":
                out = list(objs)
            elif self.kind == "color":
                out = [o for o in objs if o.main_color == self.value]
            elif self.kind == "shape":
                out = [o for o in objs if o.shape_label == self.value]
            elif self.kind == "extremal":
                out = [_extremal(objs, self.value)] if objs else []
            elif self.kind == "size_rank":
                ranked = sorted(objs, key=lambda o: (-o.size, o.object_id))
                out = [ranked[self.value]] if self.value < len(ranked) else []
            else:
                out = [o for o in objs if o.object_id == self.value]
            cache[key] = out
        if not out:
            raise BindingResolutionFailed(f"selector {self.to_json_dict()} matched nothing")
        return list(out)

    def to_json_dict(self) -> dict:
        if self.kind == "all":
            return {"kind": "all"}
        return {"kind": self.kind, "value": self.value}

    @staticmethod
    def from_json_dict(doc: dict) -> "Selector":
        return Selector(doc.get("kind", "all"), doc.get("value"))


def _extremal(objs, which: str) -> GridObject:
    if which == "leftmost":
        key = lambda o: (o.bbox[1], o.object_id)
    elif which == "rightmost":
        key = lambda o: (-o.bbox[3], o.object_id)
    elif which == "topmost":
        key = lambda o: (o.bbox[0], o.object_id)
    else:
        key = lambda o: (-o.bbox[2], o.object_id)
    return min(objs, key=key)


# Roles a schema needs before it can execute. Object roles hold a
# Selector; color roles hold a color code. Some roles only become
# required for particular parameter choices (a fill that stops at a
# "specific color" needs to know which one).
_OBJECT_ROLES: dict[str, tuple[str, ...]] = {
    "Horizontal Fill": ("source",),
    "Vertical Fill": ("source",),
    "Connecting Bridges": ("source", "target"),
    "Boundary Attachment Fill": ("source",),
    "Diagonal Fill": ("source",),
    "Find Objects in the Input Image and Color Them": ("source",),
    "Remove Objects from the Output in a Particular Sequence": ("source",),
    "Alternating Pattern Filling": (),
    "Cavity Fill": ("source",),
    "Add/Replace an Object": ("source",),
    "Falling Down (Gravity-Effect)": ("source",),
    "Object Translation Based on Goal": ("source", "goal"),
    "Symmetry-Based Pattern": (),
    "Ray-Cast / Ray-Trace Pattern": ("source",),
}

_CONDITIONAL_COLOR_ROLES: dict[str, tuple[tuple[str, str, str], ...]] = {
    # schema -> ((param, value, role), ...): role required when param == value
    "Horizontal Fill": (
        ("fill_color", "based on some different objects", "color"),
        ("stop_condition", "specific color", "stop_color"),
    ),
    "Vertical Fill": (("stop_condition", "specific color", "stop_color"),),
    "Find Objects in the Input Image and Color Them": (
        ("new_color", "constant throughout", "color"),
        ("new_color", "alternating pattern", "color"),
    ),
    "Cavity Fill": (("fill_color", "arbitrary", "color"),),
}

_ALWAYS_COLOR_ROLES: dict[str, tuple[str, ...]] = {
    "Alternating Pattern Filling": ("color_a", "color_b"),
}


@dataclass
class PatternInstance:
    """One parameterized Unit Pattern, optionally bound to scene roles."""

    schema_name: str
    params: dict[str, str] = field(default_factory=dict)
    bindings: dict[str, Selector | int] = field(default_factory=dict)

    def param(self, name: str) -> str:
        """Chosen value, or the enum's first value when unset."""
        if name in self.params:
            return self.params[name]
        schema = get_schema(self.schema_name)
        return schema.parameters[name][0]

    def full_params(self) -> dict[str, str]:
        schema = get_schema(self.schema_name)
        return {name: self.param(name) for name in schema.parameters}

    def objects(self, role: str, scene: SceneGraph) -> list[GridObject]:
        sel = self.bindings.get(role)
        if sel is None:
            raise BindingResolutionFailed(f"role {role!r} is unbound")
        if not isinstance(sel, Selector):
            raise BindingResolutionFailed(f"role {role!r} holds a color, not a selector")
        return sel.resolve(scene)

    def color(self, role: str) -> int:
        val = self.bindings.get(role)
        if not isinstance(val, int) or isinstance(val, bool) or val not in range(10):
            raise BindingResolutionFailed(f"role {role!r} holds no color code")
        return val

    def to_json_dict(self) -> dict:
        return {
            "pattern_name": self.schema_name,
            "params": dict(self.full_params()),
            "bindings": {
                role: (v.to_json_dict() if isinstance(v, Selector) else v)
                for role, v in sorted(self.bindings.items())
            },
        }

    @staticmethod
    def from_json_dict(doc: dict) -> "PatternInstance":
        bindings: dict[str, Selector | int] = {}
        for role, v in doc.get("bindings", {}).items():
            bindings[role] = Selector.from_json_dict(v) if isinstance(v, dict) else v
        return PatternInstance(doc["pattern_name"], dict(doc.get("params", {})), bindings)


def required_roles(inst: PatternInstance) -> dict[str, str]:
    """Role name -> kind ('object' | 'color') the instance must bind."""
    roles = {r: "object" for r in _OBJECT_ROLES.get(inst.schema_name, ())}
    for param, value, role in _CONDITIONAL_COLOR_ROLES.get(inst.schema_name, ()):
        if inst.param(param) == value:
            roles[role] = "color"
    for role in _ALWAYS_COLOR_ROLES.get(inst.schema_name, ()):
        roles[role] = "color"
    return roles


def validate_instance(inst: PatternInstance) -> PatternInstance:
    """Check schema membership, enum legality, and binding completeness."""
    schema = get_schema(inst.schema_name)  # raises UnknownPattern
    for name, value in inst.params.items():
        if name not in schema.parameters:
            raise IllegalParameter(name, value)
        if value not in schema.parameters[name]:
            raise IllegalParameter(name, value)
    if schema.executable:
        for role, kind in required_roles(inst).items():
            bound = inst.bindings.get(role)
            if bound is None:
                raise MissingBinding(role)
            if kind == "color" and not (
                isinstance(bound, int) and not isinstance(bound, bool) and bound in range(10)
            ):
                raise MissingBinding(role)
            if kind == "object" and not isinstance(bound, Selector):
                raise MissingBinding(role)
    return inst


@dataclass
class Program:
    """An ordered composition of pattern instances; depth = step count."""

    steps: list[PatternInstance]

    @property
    def depth(self) -> int:
        return len(self.steps)

    def canonical_id(self) -> str:
        doc = [step.to_json_dict() for step in self.steps]
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))

    def to_json_dict(self) -> list[dict]:
        return [step.to_json_dict() for step in self.steps]

    @staticmethod
    def from_json_dict(doc: list[dict]) -> "Program":
        return Program([PatternInstance.from_json_dict(d) for d in doc])


def validate_program(p: Program, for_execution: bool = True) -> Program:
    if not p.steps:
        raise NotExecutable("a program needs at least one step")
    for step in p.steps:
        validate_instance(step)
        if for_execution and not get_schema(step.schema_name).executable:
            raise NotExecutable(f"{step.schema_name!r} is hint-only")
    return p


def program_depth(p: Program) -> int:
    return p.depth
