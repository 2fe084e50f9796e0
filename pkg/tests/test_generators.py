# Copyright (c) 2025 Benoît Pelletier
# SPDX-License-Identifier: MPL-2.0
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

import pytest

from pierce.generators import GENERATORS, VIOLATING_POINTS, generate, generator_params
from pierce.geometry import Point
from pierce.instance import serialize_instance
from pierce.kwargparse import UnexpectedToken
from pierce.transversal import (check_colorful_t4, check_colorful_tight, check_T_r, common_transversal, replicate)

SEEDS = [0, 1, 2]

def flat(families):
    return [body for family in families for body in family]

@pytest.mark.parametrize("seed", SEEDS)
def test_stabbed(seed):
    families = generate("stabbed", {"n": 12, "families": 3}, seed).bodies()
    assert [len(f) for f in families] == [4, 4, 4]
    assert common_transversal(flat(families)) is not None

@pytest.mark.parametrize("seed", SEEDS)
def test_planted3(seed):
    families = generate("planted3", {"n": 9}, seed).bodies()
    assert len(families) == 1
    assert check_T_r(families[0], 3).holds

@pytest.mark.parametrize("seed", SEEDS)
def test_planted_chords(seed):
    three = generate("plantedChords", {"n": 2}, seed).bodies()
    assert len(three) == 6
    assert check_colorful_tight(three).holds
    two = generate("plantedChords", {"n": 2, "families": 4, "lines": 2}, seed).bodies()
    assert check_colorful_t4(two).holds

@pytest.mark.parametrize("seed", SEEDS)
def test_tight_random(seed):
    families = generate("tightRandom", {"n": 6, "families": 2}, seed).bodies()
    assert check_colorful_tight(replicate(families, 6)).holds

@pytest.mark.parametrize("seed", SEEDS)
def test_violator(seed):
    families = generate("violator", {"n": 5}, seed).bodies()
    assert len(families) == 3
    assert all(families)
    assert not check_colorful_tight(replicate(families, 6)).holds
    points = {body.vertices[0] for body in flat(families) if len(body) == 1}
    assert {Point(*p) for p in VIOLATING_POINTS} <= points

def test_deterministic():
    first = serialize_instance(generate("tightRandom", {"n": 5}, 42))
    assert first == serialize_instance(generate("tightRandom", {"n": 5}, 42))
    assert first != serialize_instance(generate("tightRandom", {"n": 5}, 43))

def test_metadata():
    instance = generate("stabbed", {"n": 4}, 7)
    assert instance.metadata == {"generator": "stabbed", "seed": "7", "param.n": "4"}

def test_unknown_kind_and_param():
    with pytest.raises(ValueError):
        generate("spiral")
    with pytest.raises(UnexpectedToken):
        generate("stabbed", {"count": 3})
    with pytest.raises(ValueError):
        generate("stabbed", {"n": 2, "families": 3})

def test_params_listing():
    assert set(GENERATORS) == {"stabbed", "planted3", "plantedChords", "tightRandom", "violator"}
    assert generator_params("plantedChords") == ["n", "families", "lines", "width"]
