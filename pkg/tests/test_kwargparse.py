# Copyright (c) 2025 Benoît Pelletier
# SPDX-License-Identifier: MPL-2.0
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

import pytest

from pierce.kwargparse import UnexpectedToken, coerce, parse_kwargs, show_index

@pytest.mark.parametrize("text,expected", [
    ("", {}),
    ("n=3", {"n": "3"}),
    ("n=3 size=0.2", {"n": "3", "size": "0.2"}),
    ("  n=3   size=0.2", {"n": "3", "size": "0.2"}),
    ('name="two words"', {"name": "two words"}),
    ('q="say \\"hi\\""', {"q": 'say "hi"'}),
    ("a=", {"a": ""}),
])
def test_parse(text, expected):
    assert parse_kwargs(text) == expected

@pytest.mark.parametrize("text", ["n", "=3", "n 3", 'n="open', 'n=a"b', 'k"ey=1', "a= b=2"])
def test_unexpected_tokens(text):
    with pytest.raises(UnexpectedToken):
        parse_kwargs(text)

def test_exit_code():
    assert UnexpectedToken("x").exit_code == 2

def test_show_index():
    assert show_index("abc", 1) == "\nabc\n-^-"

def test_coerce():
    assert coerce("3") == 3 and isinstance(coerce("3"), int)
    assert coerce("0.5") == 0.5
    assert coerce("1e-3") == 0.001
    assert coerce("teal") == "teal"

def test_error_points_at_offending_character():
    with pytest.raises(UnexpectedToken) as info:
        parse_kwargs('n=3 k"ey=1')
    assert info.value.index == 5
    assert str(info.value).endswith("-----^----")

def test_quoted_empty_value():
    assert parse_kwargs('name="" n=2') == {"name": "", "n": "2"}
