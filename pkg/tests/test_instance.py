# Copyright (c) 2025 Benoît Pelletier
# SPDX-License-Identifier: MPL-2.0
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

import json
import math

import numpy as np
import pytest

from pierce.errors import InstanceError
from pierce.instance import (BAD_FIELD, EMPTY_SHAPE, MALFORMED_JSON, NO_FAMILIES, NON_FINITE, NOT_FOUND,
                             TOO_MANY_FAMILIES, UNKNOWN_SHAPE_KIND, UNSUPPORTED_VERSION, InstanceFile, load_instance,
                             parse_instance, save_instance, serialize_instance)
from shapes import dot, square

def document(*families, **extra) -> str:
    data = {"version": 1, "families": [{"name": f"F{k + 1}", "shapes": list(shapes)} for k, shapes in enumerate(families)]}
    data.update(extra)
    return json.dumps(data)

POLYGON = {"kind": "polygon", "vertices": [[0, 0], [1, 0], [0, 1]]}

def parse_error(text: str) -> InstanceError:
    with pytest.raises(InstanceError) as info:
        parse_instance(text)
    return info.value

class TestParse:
    def test_minimal(self):
        instance = parse_instance(document([POLYGON, {"kind": "points", "points": [[3, 3], [4, 4], [3, 4]]}]))
        assert len(instance.families) == 1
        bodies = instance.bodies()
        assert len(bodies[0]) == 2
        assert len(bodies[0][0]) == 3
        assert instance.metadata == {}

    def test_polygon_is_its_hull(self):
        shape = {"kind": "polygon", "vertices": [[0, 0], [2, 0], [1, 0.5], [2, 2], [0, 2]]}
        body = parse_instance(document([shape])).bodies()[0][0]
        assert len(body) == 4

    def test_disk_approximation(self):
        shape = {"kind": "disk", "center": [1.0, -2.0], "radius": 3.0}
        body = parse_instance(document([shape])).bodies()[0][0]
        assert len(body) == 64
        V = body.array - np.array([1.0, -2.0])
        ratios = np.hypot(V[:, 0], V[:, 1]) / 3.0
        assert ratios.min() >= 0.999
        assert ratios.max() <= 1.001
        # Edge midpoints stay close to the circle too
        mids = (V + np.roll(V, -1, axis=0)) / 2.0
        assert (np.hypot(mids[:, 0], mids[:, 1]) / 3.0).min() >= 0.999

    def test_metadata(self):
        instance = parse_instance(document([POLYGON], metadata={"color.1": "teal"}))
        assert instance.metadata == {"color.1": "teal"}
        error = parse_error(document([POLYGON], metadata={"color.1": 3}))
        assert error.code == BAD_FIELD
        assert error.path == "$.metadata"

    def test_version(self):
        assert parse_instance(json.dumps({"families": [{"shapes": [POLYGON]}]})).version == 1
        assert parse_error(document([POLYGON], version=2)).code == UNSUPPORTED_VERSION

class TestErrors:
    def test_malformed_json_line(self):
        error = parse_error('{\n"version": 1,\n"families": [}\n')
        assert error.code == MALFORMED_JSON
        assert error.line == 3
        assert "(line 3)" in str(error)

    def test_family_count(self):
        assert parse_error(document()).code == NO_FAMILIES
        error = parse_error(document(*[[POLYGON]] * 7))
        assert error.code == TOO_MANY_FAMILIES
        assert error.exit_code == 2

    def test_unknown_kind(self):
        error = parse_error(document([POLYGON, {"kind": "ellipse"}]))
        assert error.code == UNKNOWN_SHAPE_KIND
        assert error.path == "$.families[0].shapes[1].kind"

    def test_empty_shapes(self):
        assert parse_error(document([{"kind": "polygon", "vertices": []}])).code == EMPTY_SHAPE
        assert parse_error(document([])).code == EMPTY_SHAPE

    @pytest.mark.parametrize("token", ["NaN", "Infinity", "-Infinity", "1e999"])
    def test_non_finite(self, token):
        text = '{"families": [{"shapes": [{"kind": "points", "points": [[0, %s]]}]}]}' % token
        assert parse_error(text).code == NON_FINITE

    def test_bad_fields(self):
        error = parse_error(document([{"kind": "disk", "center": [0, 0]}]))
        assert error.code == BAD_FIELD
        assert "radius" in str(error)
        error = parse_error(document([{"kind": "points", "points": [[0, "1"]]}]))
        assert error.path == "$.families[0].shapes[0].points[0][1]"
        assert parse_error(document([{"kind": "disk", "center": [0, 0], "radius": -1}])).code == BAD_FIELD
        assert parse_error("[1, 2]").code == BAD_FIELD

    def test_missing_file(self, tmp_path):
        with pytest.raises(InstanceError) as info:
            load_instance(tmp_path / "missing.json")
        assert info.value.code == NOT_FOUND

class TestSerialize:
    def test_round_trip(self, tmp_path):
        text = document([POLYGON, {"kind": "disk", "center": [2, 2], "radius": 0.5}],
                        [{"kind": "points", "points": [[3, 3]]}], metadata={"note": "x"})
        instance = parse_instance(text)
        path = tmp_path / "instance.json"
        save_instance(path, instance)
        assert load_instance(path) == instance
        assert serialize_instance(load_instance(path)) == serialize_instance(instance)

    def test_from_bodies(self):
        instance = InstanceFile.from_bodies([[square(0, 0)], [dot(1, 2)]], {"seed": "3"})
        assert [f.name for f in instance.families] == ["F1", "F2"]
        again = parse_instance(serialize_instance(instance))
        assert again.bodies() == [[square(0, 0)], [dot(1, 2)]]
        assert again.metadata == {"seed": "3"}

    def test_stable_text(self):
        instance = InstanceFile.from_bodies([[dot(0.5, math.pi)]])
        text = serialize_instance(instance)
        assert text.endswith("\n")
        assert text == serialize_instance(parse_instance(text))
