# Copyright (c) 2025 Benoît Pelletier
# SPDX-License-Identifier: MPL-2.0
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

import argparse
from pierce import decorators, log, utils
from pierce.geometry import ConvexBody
from pierce.transversal import (HypothesisReport, SetRef, check_colorful_t4, check_colorful_tight,
                                check_T_r, check_tight_family, replicate)

PROPERTIES: tuple[str, ...] = ("t3", "t4", "tight", "colorful-tight", "colorful-t4")

def setup(subparsers) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("check", help="Decide a transversal hypothesis on an instance",
                                   description="Prints the hypothesis report as JSON, exits 0 iff it holds.")
    parser.add_argument("--property", required=True, choices=PROPERTIES)
    parser.add_argument("--allow-large", action="store_true", help="Lift the size cap of exhaustive checks")
    parser.add_argument("file", help="Instance JSON file")
    return parser

def _remap(report: HypothesisReport, owners: list[SetRef]) -> HypothesisReport:
    """Translate witness positions back to (family, index) of the instance."""
    if report.witness_violation is None:
        return report
    witness = tuple(owners[ref.index] for ref in report.witness_violation)
    return HypothesisReport(report.property, report.holds, witness)

def check_property(prop: str, families: list[list[ConvexBody]], allow_large: bool = False) -> HypothesisReport:
    if prop in ("colorful-tight", "colorful-t4"):
        m = 6 if prop == "colorful-tight" else 4
        replicas = replicate(families, m)
        report = check_colorful_tight(replicas, allow_large) if m == 6 else check_colorful_t4(replicas, allow_large)
        if report.witness_violation is None:
            return report
        # Replica slots back to the families they copy
        witness = tuple(SetRef.of((ref.family.index - 1) % len(families) + 1, ref.index) for ref in report.witness_violation)
        return HypothesisReport(report.property, report.holds, witness)

    union = [body for family in families for body in family]
    owners = [SetRef.of(f + 1, i) for f, family in enumerate(families) for i in range(len(family))]
    if prop == "tight":
        report = check_tight_family(union, allow_large)
    else:
        report = check_T_r(union, 3 if prop == "t3" else 4, allow_large)
    return _remap(report, owners)

@decorators.exit_codes
def run(args: argparse.Namespace) -> int:
    _, families = utils.load_bodies(args.file)
    report = check_property(args.property, families, args.allow_large)
    log.info(f"Property `{args.property}` on `{args.file}`: {'holds' if report.holds else 'fails'}")
    utils.print_json(report.to_dict())
    return 0 if report.holds else 1
