# Copyright (c) 2025 Benoît Pelletier
# SPDX-License-Identifier: MPL-2.0
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any
import math

from pierce import filehelper
from pierce.errors import HypothesisViolated, Inconclusive
from pierce.solver import DualWitness, Outcome, PiercingCertificate, SolveResult
from pierce.transversal import HypothesisReport

@dataclass(frozen=True)
class RunReport:
    """What `solve` writes: the outcome, its payload and how it was reached."""
    outcome: Outcome
    seed: int
    lines: int
    hypothesis: HypothesisReport | None = None
    certificate: PiercingCertificate | None = None
    dual_witness: DualWitness | None = None
    best_residual: float | None = None
    evaluations: int = 0
    timings: dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if (self.outcome is Outcome.CERTIFICATE) != (self.certificate is not None):
            raise ValueError("A certificate report carries exactly one certificate")
        if (self.outcome is Outcome.DUAL_WITNESS) != (self.dual_witness is not None):
            raise ValueError("A dual witness report carries exactly one dual witness")

    @classmethod
    def from_result(cls, result: SolveResult, seed: int, lines: int) -> "RunReport":
        return cls(result.outcome, seed, lines, result.hypothesis, result.certificate, result.dual_witness,
                   result.best_residual, result.evaluations, dict(result.timings))

    @classmethod
    def from_error(cls, error: HypothesisViolated | Inconclusive, seed: int, lines: int) -> "RunReport":
        if isinstance(error, HypothesisViolated):
            return cls(Outcome.HYPOTHESIS_VIOLATED, seed, lines, hypothesis=error.report)
        return cls(Outcome.INCONCLUSIVE, seed, lines, best_residual=error.best_residual)

    def to_dict(self, timings: bool = True) -> dict[str, Any]:
        residual = self.best_residual
        data: dict[str, Any] = {
            "outcome": self.outcome.value,
            "seed": self.seed,
            "lines": self.lines,
            "hypothesis": self.hypothesis.to_dict() if self.hypothesis else None,
            "certificate": self.certificate.to_dict() if self.certificate else None,
            "dual_witness": self.dual_witness.to_dict() if self.dual_witness else None,
            # JSON has no infinity
            "best_residual": residual if residual is not None and math.isfinite(residual) else None,
            "evaluations": self.evaluations,
        }
        if timings:
            data["timings"] = dict(self.timings)
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunReport":
        return cls(
            Outcome(data["outcome"]),
            int(data["seed"]),
            int(data["lines"]),
            HypothesisReport.from_dict(data["hypothesis"]) if data.get("hypothesis") else None,
            PiercingCertificate.from_dict(data["certificate"]) if data.get("certificate") else None,
            DualWitness.from_dict(data["dual_witness"]) if data.get("dual_witness") else None,
            data.get("best_residual"),
            int(data.get("evaluations", 0)),
            dict(data.get("timings", {})),
        )

    def to_json(self, timings: bool = True) -> str:
        return filehelper.dumpJson(self.to_dict(timings))

def save_report(path: str | Path, report: RunReport) -> None:
    filehelper.writeText(path, report.to_json())

def load_report(path: str | Path) -> RunReport:
    return RunReport.from_dict(filehelper.parseJson(filehelper.readText(path)))
