# Copyright (c) 2025 Benoît Pelletier
# SPDX-License-Identifier: MPL-2.0
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

from enum import Enum, auto

from pierce import log
from pierce.errors import EXIT_PARSE, PierceError

class UnexpectedToken(PierceError):
    exit_code = EXIT_PARSE

    def __init__(self, message: str, text: str = "", index: int | None = None):
        if index is not None:
            message += show_index(text, index)
        super().__init__(message)
        self.index = index

def show_index(string: str, index: int) -> str:
    cursor = '-' * index + '^' + '-' * max(0, len(string) - 1 - index)
    return f"\n{string}\n{cursor}"

class _State(Enum):
    KEY = auto()
    VALUE = auto()
    QUOTED = auto()
    ESCAPED = auto()

class _Scanner:
    """Character state machine behind `parse_kwargs`."""
    def __init__(self, text: str) -> None:
        self.text = text
        self.state = _State.KEY
        self.key = ""
        self.value = ""
        self.quoted = False
        self.result: dict[str, str] = {}

    def fail(self, message: str, index: int) -> UnexpectedToken:
        return UnexpectedToken(message, self.text, index)

    def flush(self) -> None:
        self.result[self.key] = self.value
        self.key, self.value, self.quoted = "", "", False
        self.state = _State.KEY

    def feed(self, i: int, c: str) -> None:
        match self.state:
            case _State.KEY:
                if c == ' ':
                    if self.key:
                        raise self.fail("Found a space token when token `=` was expected.", i)
                elif c == '=':
                    if not self.key:
                        raise self.fail("Found token `=` but key is empty.", i)
                    self.state = _State.VALUE
                elif c == '"':
                    raise self.fail("Found token `\"` in key. This is not supported.", i)
                else:
                    self.key += c
            case _State.VALUE:
                if c == ' ':
                    if not self.value and not self.quoted:
                        raise self.fail("Found a space token while value is empty.", i)
                    self.flush()
                elif c == '"':
                    if self.value or self.quoted:
                        raise self.fail("Found token `\"` in middle of the value. Consider escaping it `\\\"` if it's part of the value.", i)
                    self.quoted = True
                    self.state = _State.QUOTED
                else:
                    self.value += c
            case _State.QUOTED:
                if c == '\\':
                    self.state = _State.ESCAPED
                elif c == '"':
                    self.state = _State.VALUE
                else:
                    self.value += c
            case _State.ESCAPED:
                self.value += c
                self.state = _State.QUOTED

    def finish(self) -> dict[str, str]:
        end = len(self.text)
        if self.state in (_State.QUOTED, _State.ESCAPED):
            raise self.fail("Missing token `\"` at the end of value", end)
        if self.state is _State.KEY and self.key:
            raise self.fail(f"Missing token `=` after key `{self.key}`", end)
        if self.state is _State.VALUE:
            self.flush()
        return self.result

def parse_kwargs(kwargs: str) -> dict[str, str]:
    """
    Parse a `key=value key2="quoted value"` string, as used by `gen --params`.
    Inside quotes a backslash escapes the next character. Raises
    UnexpectedToken with a caret under the offending character.
    """
    scanner = _Scanner(kwargs)
    for i, c in enumerate(kwargs):
        scanner.feed(i, c)
    result = scanner.finish()
    log.debug(f"Parsed parameters: {result}")
    return result

def coerce(value: str) -> int | float | str:
    """Best effort numeric conversion of a parsed value."""
    for cast in (int, float):
        try:
            return cast(value)
        except ValueError:
            pass
    return value
