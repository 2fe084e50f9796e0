# Copyright (c) 2025 Benoît Pelletier
# SPDX-License-Identifier: MPL-2.0
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

import argparse
import importlib
import os
import sys
from types import ModuleType
from dotenv import load_dotenv
from pierce import log, filehelper
from pierce.errors import EXIT_INTERNAL, EXIT_PARSE

PLUGINS_DIR: str = os.path.join(os.path.dirname(os.path.abspath(__file__)), "plugins")

####                        ####
#       Module Management      #
####                        ####

def getAllModules() -> list[str]:
    """
    Get all available modules in the `plugins` directory
    """
    available_modules: list[str] = []
    for dir in sorted(os.listdir(PLUGINS_DIR)):
        if os.path.isfile(os.path.join(PLUGINS_DIR, dir, "main.py")):
            available_modules.append(dir)
    return available_modules

def getEnabledModules(config: dict) -> list[str]:
    """
    Modules listed in config.json `modules`, or every available module when absent
    """
    available = getAllModules()
    enabled = config.get("modules")
    if not enabled:
        return available
    for module in enabled:
        if module not in available:
            log.warning(f"Module `{module}` is enabled in config but does not exist")
    return [module for module in enabled if module in available]

def loadModule(module: str) -> ModuleType:
    return importlib.import_module(f"plugins.{module}.main")

def build_parser(config: dict) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pierce", description="Line transversals, tight triples and piercing-line certificates.")
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="<command>")
    for module in getEnabledModules(config):
        try:
            plugin = loadModule(module)
            subparser = plugin.setup(subparsers)
            subparser.set_defaults(handler=plugin.run)
            log.debug(f"Module `{module}` successfully loaded.")
        except Exception as e:
            log.error(f"Failed to load module `{module}`: {e}")
    return parser

####                   ####
#       Entry point       #
####                   ####

def cli(argv: list[str] | None = None) -> int:
    load_dotenv()
    log.setup_from_env()

    config = filehelper.openConfig()
    parser = build_parser(config)
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse already printed the usage or the help
        return EXIT_PARSE if e.code else 0
    args.config = config

    log.info(f"Running `{args.command}`")
    try:
        return args.handler(args)
    except KeyboardInterrupt:
        log.failure("Interrupted")
        return EXIT_INTERNAL

if __name__ == "__main__":
    sys.exit(cli())
