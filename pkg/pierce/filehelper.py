# Copyright (c) 2025 Benoît Pelletier
# SPDX-License-Identifier: MPL-2.0
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

from pathlib import Path
import json
from pierce import log
import os

config_dir: str = None

def getConfigDir() -> str:
    global config_dir
    if not config_dir:
        config_dir = os.getenv('CONFIG_DIR') or "config"
        log.debug(f"Config directory has been set to `{config_dir}`")
    return config_dir

def ensure_directory(dir_path: str | Path) -> None:
    Path(dir_path).mkdir(parents=True, exist_ok=True)

def readText(path: str | Path) -> str:
    with open(path, "r", encoding="utf-8") as file:
        return file.read()

def writeText(path: str | Path, text: str) -> None:
    path = Path(path)
    if path.parent != Path(""):
        ensure_directory(path.parent)
    with open(path, "w", encoding="utf-8", newline="\n") as file:
        file.write(text)
    log.info(f"Wrote `{path}` ({len(text)} bytes)")

def dumpJson(data) -> str:
    """Stable JSON text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(data, indent=4, sort_keys=True, allow_nan=False) + "\n"

def parseJson(text: str):
    return json.loads(text)

def openJson(path: str | Path):
    data = None
    try:
        with open(path, "r", encoding="utf-8") as file:
            data = json.load(file)
    except FileNotFoundError:
        log.debug(f"No json file at '{path}'")
    except Exception as e:
        log.error(f"Failed to load json file '{path}': {e}")
    return data

def getConfigFilename(module: str = None) -> str:
    return f"config{f'.{module}' if module else ''}.json"

def openConfig(module: str = None) -> dict:
    return openJson(Path(getConfigDir()) / getConfigFilename(module)) or dict()
