# Copyright (c) 2025 Benoît Pelletier
# SPDX-License-Identifier: MPL-2.0
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

import functools
import time
from pierce import log
from pierce.errors import EXIT_INTERNAL, PierceError

class Stopwatch:
    """Accumulates per-phase wall time in milliseconds."""
    def __init__(self) -> None:
        self.timings: dict[str, float] = {}

    def add(self, phase: str, elapsed_ms: float) -> None:
        self.timings[phase] = self.timings.get(phase, 0.0) + elapsed_ms

    def phase(self, name: str):
        return _Phase(self, name)

class _Phase:
    def __init__(self, watch: Stopwatch, name: str) -> None:
        self.watch = watch
        self.name = name
        self.elapsed_ms = 0.0

    def __enter__(self):
        self._start = time.perf_counter()
        return self

    def __exit__(self, *exc) -> bool:
        self.elapsed_ms = (time.perf_counter() - self._start) * 1000.0
        self.watch.add(self.name, self.elapsed_ms)
        return False

def exit_codes(func):
    """
    Maps errors escaping a CLI handler onto the exit code contract.
    """
    @functools.wraps(func)
    def wrapper(*args, **kwargs) -> int:
        try:
            return func(*args, **kwargs)
        except PierceError as e:
            log.failure(str(e))
            return e.exit_code
        except Exception as e:
            log.failure(f"An unexpected error occurred: {e}", stacktrace=True)
            return EXIT_INTERNAL
    return wrapper
