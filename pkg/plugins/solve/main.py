# Copyright (c) 2025 Benoît Pelletier
# SPDX-License-Identifier: MPL-2.0
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

import argparse
from pierce import decorators, filehelper, log, utils
from pierce.errors import EXIT_HYPOTHESIS, HypothesisViolated, Inconclusive, InvalidCertificate
from pierce.event import SolverEvents
from pierce.render import render_svg
from pierce.report import RunReport, save_report
from pierce.solver import Outcome, chords_from_simplex, solve_three_lines, solve_two_lines, verify_certificate

def setup(subparsers) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("solve", help="Search lines piercing one of the families",
                                   description="Exits 0 iff a certificate is found and re-verified.")
    parser.add_argument("file", help="Instance JSON file")
    parser.add_argument("--lines", type=int, choices=(2, 3), default=3)
    parser.add_argument("--waive-hypothesis", action="store_true", help="Skip the colorful hypothesis check")
    parser.add_argument("--allow-large", action="store_true", help="Lift the size cap of the hypothesis check")
    parser.add_argument("--seed", type=int, default=None, help="Seed of the descent starts (PIERCE_SEED wins)")
    parser.add_argument("--budget", type=int, default=None, help="Objective evaluations per descent start")
    parser.add_argument("--tol", type=float, default=None, help="Residual accepted as zero")
    parser.add_argument("--starts", type=int, default=None, help="Number of descent starts")
    parser.add_argument("--out", default=None, help="Write the run report JSON there")
    parser.add_argument("--svg", default=None, help="Write a picture of the solution there")
    parser.add_argument("--verbose", action="store_true", help="Log solver progress")
    return parser

def on_phase(name: str, elapsed_ms: float) -> None:
    log.info(f"Phase `{name}` done in {elapsed_ms:.1f} ms")

def on_start(index: int, residual: float) -> None:
    log.debug(f"Descent start {index} reached residual {residual:.3e}")

def _emit(report: RunReport, args: argparse.Namespace) -> None:
    utils.print_json(report.to_dict())
    if args.out:
        save_report(args.out, report)

@decorators.exit_codes
def run(args: argparse.Namespace) -> int:
    instance_file, families = utils.load_bodies(args.file)
    seed = utils.resolve_seed(args.seed)
    options = utils.solver_options(
        args, lines=args.lines, seed=seed, waive_hypothesis=True if args.waive_hypothesis else None,
        allow_large=True if args.allow_large else None,
        max_evaluations=args.budget, tol_residual=args.tol, starts=args.starts,
    )
    solve = solve_three_lines if args.lines == 3 else solve_two_lines

    phases = (on_phase,) if args.verbose else ()
    starts = (on_start,) if args.verbose else ()
    try:
        with SolverEvents.on_phase.listening(*phases), SolverEvents.on_start.listening(*starts):
            result = solve(families, options)
    except (HypothesisViolated, Inconclusive) as e:
        _emit(RunReport.from_error(e, seed, args.lines), args)
        log.failure(str(e))
        return e.exit_code

    if result.certificate is not None and not verify_certificate(result.instance, result.certificate):
        raise InvalidCertificate()
    _emit(RunReport.from_result(result, seed, args.lines), args)

    if args.svg:
        config = chords_from_simplex(result.certificate.witness) if result.certificate else None
        filehelper.writeText(args.svg, render_svg(result.instance, result.certificate, config, instance_file.metadata))

    if result.outcome is Outcome.CERTIFICATE:
        log.info(f"Certificate for family {result.certificate.family.index} with residual {result.certificate.residual:.3e}")
        return 0
    log.failure(f"Hypothesis fails: obstruction {[ref.as_tuple() for ref in result.dual_witness.obstruction]}")
    return EXIT_HYPOTHESIS
