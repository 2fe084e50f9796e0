# Copyright (c) 2025 Benoît Pelletier
# SPDX-License-Identifier: MPL-2.0
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

import argparse
from pierce import decorators, log, utils
from pierce.solver import deep_line

def setup(subparsers) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("deep-line", help="Find a line hitting at least a third of a family",
                                   description="Merges all families into one, exits 0 iff the line hits ceil(n/3) of them.")
    parser.add_argument("file", help="Instance JSON file")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--waive-hypothesis", action="store_true")
    parser.add_argument("--allow-large", action="store_true", help="Lift the size cap of the hypothesis check")
    return parser

@decorators.exit_codes
def run(args: argparse.Namespace) -> int:
    _, families = utils.load_bodies(args.file)
    family = [body for f in families for body in f]
    options = utils.solver_options(args, seed=utils.resolve_seed(args.seed),
                                   waive_hypothesis=True if args.waive_hypothesis else None,
                                   allow_large=True if args.allow_large else None)
    result = deep_line(family, options)
    utils.print_json({
        "line": list(result.line.as_tuple()),
        "count": result.count,
        "size": result.size,
        "guaranteed": result.guaranteed,
    })
    if result.count < result.guaranteed:
        log.failure(f"Deep line hits {result.count} bodies, fewer than {result.guaranteed}")
        return 1
    return 0
