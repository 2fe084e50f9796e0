# Copyright (c) 2025 Benoît Pelletier
# SPDX-License-Identifier: MPL-2.0
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

import os

# Before any pierce import: no log file, no user config, no seed override
os.environ["LOG_FILE"] = ""
os.environ["CONFIG_DIR"] = os.path.join(os.path.dirname(__file__), "no-config")
os.environ.pop("PIERCE_SEED", None)

import numpy as np
import pytest

from pierce.event import SolverEvents
from pierce.solver import SolverOptions

@pytest.fixture(autouse=True)
def clear_solver_events():
    yield
    SolverEvents.clear()

@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)

@pytest.fixture
def quick_options() -> SolverOptions:
    """Small budgets for runs expected to fail."""
    return SolverOptions(starts=3, max_evaluations=150, kkm_max_resolution=8)
