"""Piecewise-constant radial potential families with two bound control parameters.

A potential is an ordered list of constant layers V_j on [r_{j-1}, r_j] with
V = 0 beyond the last layer.  Units: hbar^2/2m = 1, so energies are k^2.
Two (layer, field) slots may be bound to the control parameters (x1, x2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ConfigError, InvalidParameterError

_FIELDS = ("width", "height")


@dataclass(frozen=True)
class Layer:
    """One constant-potential shell: V = height on a radial interval of given width."""

    width: float
    height: float

    def __post_init__(self):
        if not (self.width > 0.0) or not math.isfinite(self.width):
            raise InvalidParameterError(f"layer width must be positive, got {self.width}")
        if not math.isfinite(self.height):
            raise InvalidParameterError(f"layer height must be finite, got {self.height}")


@dataclass(frozen=True)
class Binding:
    """Reference to one (layer index, field) slot played by a control parameter."""

    layer: int
    field: str

    def __post_init__(self):
        if self.field not in _FIELDS:
            raise ConfigError(f"binding field must be one of {_FIELDS}, got {self.field!r}")
        if self.layer < 0:
            raise ConfigError(f"binding layer index must be >= 0, got {self.layer}")


@dataclass(frozen=True)
class ParamPoint:
    """A value of the control-parameter pair (x1, x2)."""

    x1: float
    x2: float

    def __post_init__(self):
        if not (math.isfinite(self.x1) and math.isfinite(self.x2)):
            raise InvalidParameterError(f"parameter point must be finite, got {self}")

    def shifted(self, dx1: float, dx2: float) -> "ParamPoint":
        return ParamPoint(self.x1 + dx1, self.x2 + dx2)


@dataclass(frozen=True)
class PotentialSpec:
    """Layer list plus the bindings that realize the control parameters.

    ``layers`` holds the base values; bound slots are overridden at
    instantiation time.  An empty layer list is the free potential.
    """

    layers: tuple[Layer, ...]
    bindings: tuple[Binding, ...] = ()
    name: str = "potential"

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        object.__setattr__(self, "bindings", tuple(self.bindings))
        if len(self.bindings) > 2:
            raise ConfigError("at most two bindings are supported")
        slots = {(b.layer, b.field) for b in self.bindings}
        if len(slots) != len(self.bindings):
            raise ConfigError("bindings must refer to distinct (layer, field) slots")
        for b in self.bindings:
            if b.layer >= len(self.layers):
                raise ConfigError(
                    f"binding refers to layer {b.layer} but only {len(self.layers)} layers exist"
                )

    @property
    def total_radius(self) -> float:
        return sum(layer.width for layer in self.layers)


def instantiate(spec: PotentialSpec, p: ParamPoint) -> list[Layer]:
    """Concrete layer list at parameter point p (bound slots replaced by x1, x2).

    Deterministic and side-effect free.  Raises InvalidParameterError if a
    bound width becomes non-positive.
    """
    values = [[layer.width, layer.height] for layer in spec.layers]
    xs = (p.x1, p.x2)
    for b, x in zip(spec.bindings, xs):
        values[b.layer][_FIELDS.index(b.field)] = x
    out = []
    for i, (w, h) in enumerate(values):
        if not (w > 0.0):
            raise InvalidParameterError(f"layer {i}: width {w} is not positive at p = {p}")
        out.append(Layer(w, h))
    return out


def binding_sensitivities(spec: PotentialSpec) -> list[tuple[float, float, float, float]]:
    """Per-layer derivatives (dw/dx1, dh/dx1, dw/dx2, dh/dx2) of the layer slots."""
    sens = [[0.0, 0.0, 0.0, 0.0] for _ in spec.layers]
    for which, b in enumerate(spec.bindings):
        col = 2 * which + (0 if b.field == "width" else 1)
        sens[b.layer][col] = 1.0
    return [tuple(s) for s in sens]


def load_config(path) -> PotentialSpec:
    """Parse a declarative potential config.

    Format (one ``key = value`` per line, ``#`` comments allowed)::

        name = double_barrier
        layer = 1.0 5.0        # width height, repeated in radial order
        x1 = layer[0].height
        x2 = layer[2].height

    Unknown keys are rejected.
    """
    name = "potential"
    layers: list[Layer] = []
    bindings: dict[str, Binding] = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc

    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key == "name":
            name = value
        elif key == "layer":
            parts = value.split()
            if len(parts) != 2:
                raise ConfigError(f"{path}:{lineno}: layer needs 'width height', got {value!r}")
            try:
                w, h = float(parts[0]), float(parts[1])
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: bad layer numbers {value!r}") from exc
            try:
                layers.append(Layer(w, h))
            except InvalidParameterError as exc:
                raise ConfigError(f"{path}:{lineno}: {exc}") from exc
        elif key in ("x1", "x2"):
            bindings[key] = _parse_binding(value, f"{path}:{lineno}")
        else:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")

    if set(bindings) == {"x2"}:
        raise ConfigError(f"{path}: x2 bound without x1")
    ordered = tuple(bindings[k] for k in ("x1", "x2") if k in bindings)
    try:
        return PotentialSpec(tuple(layers), ordered, name=name)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _parse_binding(value: str, where: str) -> Binding:
    # accepted form: layer[<index>].<width|height>
    value = value.strip()
    if not (value.startswith("layer[") and "]." in value):
        raise ConfigError(f"{where}: binding must look like 'layer[i].height', got {value!r}")
    idx_str, fieldname = value[len("layer["):].split("].", 1)
    try:
        idx = int(idx_str)
    except ValueError as exc:
        raise ConfigError(f"{where}: bad layer index {idx_str!r}") from exc
    if fieldname not in _FIELDS:
        raise ConfigError(f"{where}: binding field must be width or height, got {fieldname!r}")
    return Binding(idx, fieldname)
