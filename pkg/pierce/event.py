# Copyright (c) 2025 Benoît Pelletier
# SPDX-License-Identifier: MPL-2.0
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""
Typed progress hooks. An event is declared from a prototype function; handlers
must carry the same annotations and every dispatch is checked against it.
"""

from contextlib import contextmanager
from typing import Any, Callable, Iterator, get_type_hints
import inspect

from pierce import log

Handler = Callable[..., None]

class Event:
    def __init__(self, prototype: Handler) -> None:
        self.name = prototype.__name__
        self._prototype = inspect.signature(prototype)
        self.parameters = get_type_hints(prototype)
        self._handlers: list[Handler] = []

    def __len__(self) -> int:
        return len(self._handlers)

    def register(self, handler: Handler) -> bool:
        """
        Add a handler once. Returns False when it was already registered.
        Raises TypeError when its annotations differ from the prototype.
        """
        hints = get_type_hints(handler)
        if hints != self.parameters:
            raise TypeError(f"Handler `{handler.__name__}` has hints {hints}, event `{self.name}` expects {self.parameters}")
        if handler in self._handlers:
            return False
        self._handlers.append(handler)
        return True

    def unregister(self, handler: Handler) -> bool:
        try:
            self._handlers.remove(handler)
        except ValueError:
            return False
        return True

    @contextmanager
    def listening(self, *handlers: Handler) -> Iterator[None]:
        """Handlers registered for the duration of the block only."""
        added = [h for h in handlers if self.register(h)]
        try:
            yield
        finally:
            for handler in added:
                self.unregister(handler)

    def dispatch(self, *args: Any, **kwargs: Any) -> None:
        try:
            self._prototype.bind(*args, **kwargs)
        except TypeError as e:
            raise TypeError(f"Bad arguments for event `{self.name}`: {e}") from e

        # Iterate a snapshot, handlers may unregister themselves
        for handler in tuple(self._handlers):
            handler(*args, **kwargs)
        if self._handlers:
            log.debug(f"Event `{self.name}` reached {len(self._handlers)} handler(s)")

    def clear(self) -> None:
        self._handlers.clear()


class SolverEvents:
    """
    Progress of the piercing-line solver.

    Attributes:
        on_phase: a search phase (`grid`, `descent`, `dual`) ended, with its duration.
        on_start: one descent start ended, with the residual it reached.
    """
    def on_phase(name: str, elapsed_ms: float) -> None: pass
    def on_start(index: int, residual: float) -> None: pass
    on_phase = Event(on_phase)
    on_start = Event(on_start)

    @staticmethod
    def all() -> tuple[Event, ...]:
        return (SolverEvents.on_phase, SolverEvents.on_start)

    @staticmethod
    def clear() -> None:
        for event in SolverEvents.all():
            event.clear()
