# Copyright (c) 2025 Benoît Pelletier
# SPDX-License-Identifier: MPL-2.0
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""
Instance files.

    {
        "version": 1,
        "families": [
            {"name": "F1", "shapes": [
                {"kind": "polygon", "vertices": [[0, 0], [1, 0], [0, 1]]},
                {"kind": "disk", "center": [2, 2], "radius": 0.5},
                {"kind": "points", "points": [[3, 3]]}
            ]}
        ],
        "metadata": {"color.1": "teal"}
    }

Polygons and point sets are taken as their convex hull, disks become
circumscribed 64-gons. Errors carry a code and the JSON path of the
offending field.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence
import json
import math

from pierce import filehelper, log
from pierce.errors import InstanceError
from pierce.geometry import ConvexBody, Point, regular_polygon
from pierce.transversal import MAX_FAMILIES

FORMAT_VERSION: int = 1
DISK_SIDES: int = 64
SHAPE_KINDS: tuple[str, ...] = ("polygon", "disk", "points")

# Error codes
MALFORMED_JSON = "MalformedJson"
UNSUPPORTED_VERSION = "UnsupportedVersion"
NO_FAMILIES = "NoFamilies"
TOO_MANY_FAMILIES = "TooManyFamilies"
UNKNOWN_SHAPE_KIND = "UnknownShapeKind"
EMPTY_SHAPE = "EmptyShape"
NON_FINITE = "NonFinite"
BAD_FIELD = "BadField"
NOT_FOUND = "NotFound"

Coord = tuple[float, float]

@dataclass(frozen=True)
class ShapeRecord:
    kind: str
    points: tuple[Coord, ...] = ()
    center: Coord | None = None
    radius: float | None = None

    def to_body(self) -> ConvexBody:
        if self.kind == "disk":
            # Circumscribed and inscribed polygons averaged: vertices within 0.1% of the radius
            r = self.radius * (1.0 + 1.0 / math.cos(math.pi / DISK_SIDES)) / 2.0
            return ConvexBody.of(regular_polygon(Point(*self.center), r, DISK_SIDES))
        return ConvexBody.of(self.points)

    def to_dict(self) -> dict[str, Any]:
        if self.kind == "disk":
            return {"kind": "disk", "center": list(self.center), "radius": self.radius}
        key = "vertices" if self.kind == "polygon" else "points"
        return {"kind": self.kind, key: [list(p) for p in self.points]}

@dataclass(frozen=True)
class FamilyRecord:
    name: str
    shapes: tuple[ShapeRecord, ...]

@dataclass(frozen=True)
class InstanceFile:
    families: tuple[FamilyRecord, ...]
    metadata: dict[str, str] = field(default_factory=dict)
    version: int = FORMAT_VERSION

    def bodies(self) -> list[list[ConvexBody]]:
        return [[shape.to_body() for shape in family.shapes] for family in self.families]

    def to_dict(self) -> dict[str, Any]:
        return {
            "version": self.version,
            "families": [{"name": f.name, "shapes": [s.to_dict() for s in f.shapes]} for f in self.families],
            "metadata": dict(self.metadata),
        }

    @classmethod
    def from_bodies(cls, families: Sequence[Sequence[ConvexBody]], metadata: dict[str, str] | None = None) -> "InstanceFile":
        records = tuple(
            FamilyRecord(f"F{k + 1}", tuple(ShapeRecord("polygon", tuple(p.as_tuple() for p in body.vertices))
                                           for body in family))
            for k, family in enumerate(families)
        )
        return cls(records, dict(metadata or {}))

# --- Parsing ---

def _reject_constant(token: str) -> float:
    raise InstanceError(NON_FINITE, f"Non-finite number `{token}`")

def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InstanceError(BAD_FIELD, f"Expected a number, got {type(value).__name__}", path)
    value = float(value)
    if not math.isfinite(value):
        raise InstanceError(NON_FINITE, f"Non-finite number {value}", path)
    return value

def _coord(value: Any, path: str) -> Coord:
    if not isinstance(value, list) or len(value) != 2:
        raise InstanceError(BAD_FIELD, "Expected a coordinate pair [x, y]", path)
    return (_number(value[0], f"{path}[0]"), _number(value[1], f"{path}[1]"))

def _coords(value: Any, path: str) -> tuple[Coord, ...]:
    if not isinstance(value, list):
        raise InstanceError(BAD_FIELD, "Expected a list of coordinates", path)
    if len(value) == 0:
        raise InstanceError(EMPTY_SHAPE, "A shape needs at least one vertex", path)
    return tuple(_coord(v, f"{path}[{k}]") for k, v in enumerate(value))

def _field(record: dict, key: str, path: str) -> Any:
    if key not in record:
        raise InstanceError(BAD_FIELD, f"Missing field `{key}`", path)
    return record[key]

def _shape(record: Any, path: str) -> ShapeRecord:
    if not isinstance(record, dict):
        raise InstanceError(BAD_FIELD, "Expected a shape object", path)
    kind = _field(record, "kind", path)
    if kind not in SHAPE_KINDS:
        raise InstanceError(UNKNOWN_SHAPE_KIND, f"Unknown shape kind `{kind}`, expected one of {', '.join(SHAPE_KINDS)}", f"{path}.kind")
    if kind == "disk":
        center = _coord(_field(record, "center", path), f"{path}.center")
        radius = _number(_field(record, "radius", path), f"{path}.radius")
        if radius < 0:
            raise InstanceError(BAD_FIELD, f"Negative radius {radius}", f"{path}.radius")
        return ShapeRecord("disk", center=center, radius=radius)
    key = "vertices" if kind == "polygon" else "points"
    return ShapeRecord(kind, _coords(_field(record, key, path), f"{path}.{key}"))

def _family(record: Any, path: str) -> FamilyRecord:
    if not isinstance(record, dict):
        raise InstanceError(BAD_FIELD, "Expected a family object", path)
    name = record.get("name", "")
    if not isinstance(name, str):
        raise InstanceError(BAD_FIELD, "Family name must be a string", f"{path}.name")
    shapes = _field(record, "shapes", path)
    if not isinstance(shapes, list) or len(shapes) == 0:
        raise InstanceError(EMPTY_SHAPE, "A family needs at least one shape", f"{path}.shapes")
    return FamilyRecord(name, tuple(_shape(s, f"{path}.shapes[{k}]") for k, s in enumerate(shapes)))

def parse_instance(text: str) -> InstanceFile:
    try:
        data = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as e:
        raise InstanceError(MALFORMED_JSON, e.msg, "$", e.lineno)
    if not isinstance(data, dict):
        raise InstanceError(BAD_FIELD, "Expected a JSON object")

    version = data.get("version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise InstanceError(UNSUPPORTED_VERSION, f"Unsupported version {version}", "$.version")

    families = _field(data, "families", "$")
    if not isinstance(families, list):
        raise InstanceError(BAD_FIELD, "Expected a list of families", "$.families")
    if len(families) == 0:
        raise InstanceError(NO_FAMILIES, "An instance needs at least one family", "$.families")
    if len(families) > MAX_FAMILIES:
        raise InstanceError(TOO_MANY_FAMILIES, f"{len(families)} families, at most {MAX_FAMILIES} are supported", "$.families")

    metadata = data.get("metadata", {})
    if not isinstance(metadata, dict) or not all(isinstance(v, str) for v in metadata.values()):
        raise InstanceError(BAD_FIELD, "Metadata must map strings to strings", "$.metadata")

    instance = InstanceFile(tuple(_family(f, f"$.families[{k}]") for k, f in enumerate(families)), dict(metadata), version)
    log.debug(f"Parsed instance with {len(instance.families)} families and {sum(len(f.shapes) for f in instance.families)} shapes")
    return instance

def serialize_instance(instance: InstanceFile) -> str:
    return filehelper.dumpJson(instance.to_dict())

def load_instance(path: str | Path) -> InstanceFile:
    try:
        text = filehelper.readText(path)
    except FileNotFoundError:
        raise InstanceError(NOT_FOUND, f"No such file `{path}`")
    except UnicodeDecodeError as e:
        raise InstanceError(MALFORMED_JSON, f"Not UTF-8 text: {e.reason}")
    return parse_instance(text)

def save_instance(path: str | Path, instance: InstanceFile) -> None:
    filehelper.writeText(path, serialize_instance(instance))
