# Copyright (c) 2025 Benoît Pelletier
# SPDX-License-Identifier: MPL-2.0
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

import argparse
import os
from typing import Any

from pierce import filehelper, log
from pierce.errors import InstanceError
from pierce.geometry import ConvexBody
from pierce.instance import InstanceFile, load_instance
from pierce.solver import SolverOptions

def resolve_seed(seed: int | None) -> int:
    """`PIERCE_SEED` wins over the command line."""
    env = os.getenv("PIERCE_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InstanceError("BadSeed", f"PIERCE_SEED must be an integer, got `{env}`", "env")
    return seed if seed is not None else 0

def load_bodies(path: str) -> tuple[InstanceFile, list[list[ConvexBody]]]:
    instance = load_instance(path)
    return instance, instance.bodies()

def solver_options(args: argparse.Namespace, **overrides: Any) -> SolverOptions:
    """Solver defaults, then config.json `solver` section, then command line flags."""
    config = getattr(args, "config", None) or {}
    return SolverOptions.from_config(config.get("solver", {}), **overrides)

def print_json(data: Any) -> None:
    log.client(filehelper.dumpJson(data).rstrip("\n"))
