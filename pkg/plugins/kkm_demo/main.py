# Copyright (c) 2025 Benoît Pelletier
# SPDX-License-Identifier: MPL-2.0
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

import argparse
import csv
import io
from pierce import decorators, filehelper, log, utils
from pierce.errors import EXIT_INCONCLUSIVE, KkmConditionViolated
from pierce.kkm import CoverOracle, KuhnGrid, find_colorful_witness, membership_header, membership_rows, threshold_cover
from pierce.solver import Instance, induced_cover
from pierce.transversal import replicate

def setup(subparsers) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("kkm-demo", help="Search a colorful witness of a family of KKM covers",
                                   description="Covers are analytic thresholds or the ones induced by an instance.")
    parser.add_argument("--n", type=int, choices=(4, 6), default=6)
    parser.add_argument("--cover", default="threshold", help="`threshold` or `instance:FILE`")
    parser.add_argument("--thresholds", default=None, help="Comma separated thresholds of the threshold covers")
    parser.add_argument("--resolution", type=int, default=16, help="Finest grid resolution scanned")
    parser.add_argument("--csv", default=None, help="Dump the membership bits of the grid at --resolution")
    return parser

def build_oracle(args: argparse.Namespace) -> CoverOracle:
    if args.cover == "threshold":
        if args.thresholds:
            thresholds = [float(t) for t in args.thresholds.split(",")]
        else:
            thresholds = [1.0 / (args.n + 1)] * args.n
        return threshold_cover(args.n, thresholds)
    if args.cover.startswith("instance:"):
        _, families = utils.load_bodies(args.cover.removeprefix("instance:"))
        instance = Instance.from_families(families)
        return induced_cover(replicate(instance.normalized, args.n), args.n)
    raise ValueError(f"Unknown cover `{args.cover}`, use `threshold` or `instance:FILE`")

def write_csv(path: str, oracle: CoverOracle, resolution: int) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(membership_header(oracle.n))
    writer.writerows(membership_rows(oracle, KuhnGrid(oracle.n, resolution)))
    filehelper.writeText(path, buffer.getvalue())

@decorators.exit_codes
def run(args: argparse.Namespace) -> int:
    oracle = build_oracle(args)
    if args.csv:
        write_csv(args.csv, oracle, args.resolution)

    try:
        witness = find_colorful_witness(oracle, max_resolution=args.resolution)
    except KkmConditionViolated as e:
        utils.print_json({"kkm_condition": False, "cover": e.cover, "point": list(e.point.coords)})
        log.failure(str(e))
        return 1

    if witness is None:
        utils.print_json({"kkm_condition": True, "witness": None})
        log.failure(f"No colorful witness up to resolution {args.resolution}")
        return EXIT_INCONCLUSIVE
    utils.print_json({
        "kkm_condition": True,
        "witness": {
            "point": list(witness.point.coords),
            "permutation": list(witness.permutation),
            "margins": list(witness.margins),
            "resolution": witness.resolution,
            "verified": witness.verify(oracle),
        },
    })
    return 0
