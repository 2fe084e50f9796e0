# Copyright (c) 2025 Benoît Pelletier
# SPDX-License-Identifier: MPL-2.0
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

import argparse
from pierce import decorators, filehelper, log, utils
from pierce.errors import InstanceError
from pierce.kkm import SimplexPoint
from pierce.render import render_svg
from pierce.report import load_report
from pierce.solver import Instance, chords_from_simplex

def setup(subparsers) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("render", help="Draw an instance as SVG",
                                   description="Draws the normalized instance, with the lines of a report or the chords of a simplex point.")
    parser.add_argument("file", help="Instance JSON file")
    parser.add_argument("--cert", default=None, help="Report JSON holding a certificate")
    parser.add_argument("--simplex", default=None, help="Comma separated simplex point whose chords are drawn")
    parser.add_argument("--out", required=True)
    return parser

@decorators.exit_codes
def run(args: argparse.Namespace) -> int:
    instance_file, families = utils.load_bodies(args.file)
    instance = Instance.from_families(families)

    certificate = None
    config = None
    if args.cert:
        report = load_report(args.cert)
        if report.certificate is None:
            raise InstanceError("NoCertificate", f"Report holds no certificate (outcome {report.outcome.value})", args.cert)
        certificate = report.certificate
        config = chords_from_simplex(certificate.witness)
    if args.simplex:
        config = chords_from_simplex(SimplexPoint(tuple(float(v) for v in args.simplex.split(","))))

    filehelper.writeText(args.out, render_svg(instance, certificate, config, instance_file.metadata))
    log.success(f"Picture written to `{args.out}`")
    return 0
