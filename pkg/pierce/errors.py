# Copyright (c) 2025 Benoît Pelletier
# SPDX-License-Identifier: MPL-2.0
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

from typing import Any

EXIT_PARSE: int = 2
EXIT_HYPOTHESIS: int = 3
EXIT_INCONCLUSIVE: int = 4
EXIT_INTERNAL: int = 5

class PierceError(Exception):
    """Base of every error raised by the package, carries the CLI exit code."""
    exit_code: int = EXIT_INTERNAL

    def __init__(self, message: str):
        super().__init__(message)

class EmptyInput(PierceError):
    def __init__(self, what: str = "input"):
        super().__init__(f"Empty {what}")

class UnsupportedR(PierceError):
    def __init__(self, r: int):
        self.r = r
        super().__init__(f"Property T({r}) is not supported, use r in {{3, 4}}")

class BadArity(PierceError):
    def __init__(self, expected: int, got: int):
        self.expected = expected
        self.got = got
        super().__init__(f"Expected exactly {expected} families, got {got}")

class FamilyTooLarge(PierceError):
    def __init__(self, size: int, cap: int):
        self.size = size
        self.cap = cap
        super().__init__(f"Family of {size} bodies exceeds the exhaustive check cap of {cap}, pass --allow-large to force it")

class KkmConditionViolated(PierceError):
    def __init__(self, cover: int, point: Any):
        self.cover = cover
        self.point = point
        super().__init__(f"Cover {cover} misses grid vertex {point}")

class HypothesisViolated(PierceError):
    exit_code = EXIT_HYPOTHESIS

    def __init__(self, report: Any):
        self.report = report
        super().__init__(f"Hypothesis {report.property.value} does not hold, witness {report.witness_tuples()}")

class Inconclusive(PierceError):
    exit_code = EXIT_INCONCLUSIVE

    def __init__(self, best_residual: float, detail: str = ""):
        self.best_residual = best_residual
        super().__init__(f"No certificate found within budget (best residual {best_residual:.3e}){f': {detail}' if detail else ''}")

class InstanceError(PierceError):
    exit_code = EXIT_PARSE

    def __init__(self, code: str, message: str, path: str = "$", line: int | None = None):
        self.code = code
        self.path = path
        self.line = line
        where = f"{path}" + (f" (line {line})" if line is not None else "")
        super().__init__(f"[{code}] {where}: {message}")

class GeneratorExhausted(PierceError):
    def __init__(self, kind: str, attempts: int):
        self.kind = kind
        self.attempts = attempts
        super().__init__(f"Generator `{kind}` gave up after {attempts} attempts")

class InvalidCertificate(PierceError):
    def __init__(self, message: str = "Certificate does not re-verify"):
        super().__init__(message)

class NumericalFailure(PierceError):
    def __init__(self, message: str):
        super().__init__(message)
