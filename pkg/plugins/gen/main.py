# Copyright (c) 2025 Benoît Pelletier
# SPDX-License-Identifier: MPL-2.0
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

import argparse
from pierce import decorators, log, utils
from pierce.generators import GENERATORS, generate
from pierce.instance import save_instance, serialize_instance
from pierce.kwargparse import coerce, parse_kwargs

def setup(subparsers) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("gen", help="Generate a seeded instance",
                                   description="Generators check their advertised hypothesis before writing.")
    parser.add_argument("--kind", required=True, choices=tuple(GENERATORS))
    parser.add_argument("--n", type=int, default=None, help="Number of bodies (per family for plantedChords)")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--params", default="", help='Extra generator parameters, e.g. "families=3 size=0.2"')
    parser.add_argument("--out", default=None, help="Output file, stdout when omitted")
    return parser

@decorators.exit_codes
def run(args: argparse.Namespace) -> int:
    params = {key: coerce(value) for key, value in parse_kwargs(args.params).items()}
    if args.n is not None:
        params["n"] = args.n
    seed = utils.resolve_seed(args.seed)
    instance = generate(args.kind, params, seed)
    if args.out:
        save_instance(args.out, instance)
        log.success(f"Instance `{args.kind}` written to `{args.out}`")
    else:
        log.client(serialize_instance(instance).rstrip("\n"))
    return 0
