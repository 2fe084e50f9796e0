# Copyright (c) 2025 Benoît Pelletier
# SPDX-License-Identifier: MPL-2.0
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""
Discrete engine for the colorful KKM theorem: lattice points of the
simplex, the boundary condition of a family of covers, and the search for
a point lying in one set of every cover with distinct set indices.

Indices of covers and sets are 1-based in the public API, like the
simplex vertices e_1..e_n they are attached to.
"""

from dataclasses import dataclass, field
from itertools import permutations
from math import comb
from typing import Callable, Iterator, Sequence

import networkx as nx
import numpy as np
from networkx.algorithms import bipartite

from pierce import log
from pierce.errors import KkmConditionViolated

SUM_TOLERANCE: float = 1e-12
DEFAULT_START_RESOLUTION: int = 8
DEFAULT_MAX_RESOLUTION: int = 64

@dataclass(frozen=True)
class SimplexPoint:
    coords: tuple[float, ...]

    def __post_init__(self) -> None:
        coords = tuple(float(c) for c in self.coords)
        if len(coords) == 0:
            raise ValueError("A simplex point needs at least one coordinate")
        if any(not c >= 0.0 for c in coords):
            raise ValueError(f"Negative or undefined coordinate in {coords}")
        if abs(sum(coords) - 1.0) > SUM_TOLERANCE:
            raise ValueError(f"Coordinates {coords} do not sum to 1")
        object.__setattr__(self, "coords", coords)

    @property
    def n(self) -> int:
        return len(self.coords)

    @classmethod
    def vertex(cls, n: int, j: int) -> "SimplexPoint":
        """The simplex vertex e_j (1-based)."""
        return cls(tuple(1.0 if i == j - 1 else 0.0 for i in range(n)))

    @classmethod
    def barycenter(cls, n: int) -> "SimplexPoint":
        return cls.from_composition((1,) * n, n)

    @classmethod
    def from_composition(cls, parts: Sequence[int], k: int) -> "SimplexPoint":
        return cls(tuple(p / k for p in parts))

    @classmethod
    def from_array(cls, x: np.ndarray) -> "SimplexPoint":
        """Clamp tiny negatives and renormalize a numerically computed point."""
        x = np.maximum(np.asarray(x, dtype=float), 0.0)
        return cls(tuple(float(v) for v in x / x.sum()))

    def support(self) -> tuple[int, ...]:
        """1-based indices of the positive coordinates (the face containing the point)."""
        return tuple(i + 1 for i, c in enumerate(self.coords) if c > 0.0)

    def array(self) -> np.ndarray:
        return np.array(self.coords)

Membership = Callable[[int, int, SimplexPoint], bool]
Margin = Callable[[int, int, SimplexPoint], float]
Bitmap = Callable[[SimplexPoint], np.ndarray]

@dataclass(frozen=True)
class CoverOracle:
    """
    n covers of the simplex, each made of n open sets. `membership(i, j, x)`
    tells whether x lies in set j of cover i. An optional `bitmap(x)` answers
    all n*n memberships at once as a boolean matrix indexed [cover-1, set-1].
    """
    n: int
    membership: Membership
    margin: Margin | None = None
    bitmap: Bitmap | None = None

    def memberships(self, point: SimplexPoint) -> np.ndarray:
        if self.bitmap is not None:
            return np.asarray(self.bitmap(point), dtype=bool)
        return np.array([[self.membership(i, j, point) for j in range(1, self.n + 1)]
                         for i in range(1, self.n + 1)], dtype=bool)

@dataclass(frozen=True)
class ColorfulWitness:
    """`permutation[i-1]` is the set index pi(i) matched to cover i."""
    permutation: tuple[int, ...]
    point: SimplexPoint
    margins: tuple[float, ...]
    resolution: int = 0

    def verify(self, oracle: CoverOracle) -> bool:
        n = oracle.n
        if sorted(self.permutation) != list(range(1, n + 1)):
            return False
        return all(oracle.membership(i, self.permutation[i - 1], self.point) for i in range(1, n + 1))

@dataclass(frozen=True)
class KuhnGrid:
    """Lattice points of the simplex with coordinates multiple of 1/resolution."""
    n: int
    resolution: int

    def __post_init__(self) -> None:
        if self.n < 1 or self.resolution < 1:
            raise ValueError(f"Invalid grid n={self.n}, resolution={self.resolution}")

    @property
    def vertex_count(self) -> int:
        return comb(self.resolution + self.n - 1, self.n - 1)

@dataclass(frozen=True)
class KkmCheck:
    holds: bool
    cover: int | None = None
    point: SimplexPoint | None = field(default=None)

    def __bool__(self) -> bool:
        return self.holds

def compositions(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Compositions of k into n nonnegative parts, largest first part first."""
    if n == 1:
        yield (k,)
        return
    for first in range(k, -1, -1):
        for rest in compositions(n - 1, k - first):
            yield (first,) + rest

def enumerate_grid(grid: KuhnGrid) -> Iterator[SimplexPoint]:
    for parts in compositions(grid.n, grid.resolution):
        yield SimplexPoint.from_composition(parts, grid.resolution)

def check_kkm_condition(oracle: CoverOracle, grid: KuhnGrid) -> KkmCheck:
    """
    Every grid vertex lies, for every cover, in one of the sets attached to
    the vertices of its face. A grid-level check: evidence, not proof.
    """
    for point in enumerate_grid(grid):
        bits = oracle.memberships(point)
        support = [j - 1 for j in point.support()]
        for i in range(oracle.n):
            if not bits[i, support].any():
                log.debug(f"KKM condition fails for cover {i + 1} at {point.coords}")
                return KkmCheck(False, i + 1, point)
    return KkmCheck(True)

def perfect_matching(bits: np.ndarray) -> tuple[int, ...] | None:
    """
    Hopcroft-Karp on the cover/set membership graph of one point.
    Returns the 0-based set matched to each cover, or None.
    """
    n = bits.shape[0]
    if not bits.any(axis=1).all() or not bits.any(axis=0).all():
        return None
    graph = nx.Graph()
    covers = [("cover", i) for i in range(n)]
    graph.add_nodes_from(covers, bipartite=0)
    graph.add_nodes_from([("set", j) for j in range(n)], bipartite=1)
    graph.add_edges_from((("cover", i), ("set", int(j))) for i in range(n) for j in np.flatnonzero(bits[i]))
    matching = bipartite.hopcroft_karp_matching(graph, top_nodes=covers)
    if not all(c in matching for c in covers):
        return None
    return tuple(matching[c][1] for c in covers)

def brute_force_permutation(bits: np.ndarray) -> tuple[int, ...] | None:
    """First permutation (0-based) whose diagonal is all true, trying all n!."""
    n = bits.shape[0]
    for perm in permutations(range(n)):
        if all(bits[i, perm[i]] for i in range(n)):
            return perm
    return None

def _witness(oracle: CoverOracle, point: SimplexPoint, bits: np.ndarray, resolution: int) -> ColorfulWitness | None:
    match = perfect_matching(bits)
    if match is None:
        return None
    perm = tuple(j + 1 for j in match)
    if oracle.margin is not None:
        margins = tuple(float(oracle.margin(i, perm[i - 1], point)) for i in range(1, oracle.n + 1))
    else:
        margins = (0.0,) * oracle.n
    return ColorfulWitness(perm, point, margins, resolution)

def find_colorful_witness(
    oracle: CoverOracle,
    max_resolution: int = DEFAULT_MAX_RESOLUTION,
    start_resolution: int = DEFAULT_START_RESOLUTION
) -> ColorfulWitness | None:
    """
    Scan lattice points at resolutions start, 2*start, ... up to
    max_resolution, barycenter first, and return the first point where the
    covers admit a system of distinct representatives. None means "not
    found up to max_resolution", never nonexistence.
    """
    check = check_kkm_condition(oracle, KuhnGrid(oracle.n, start_resolution))
    if not check:
        raise KkmConditionViolated(check.cover, check.point)

    center = SimplexPoint.barycenter(oracle.n)
    witness = _witness(oracle, center, oracle.memberships(center), 0)
    if witness is not None:
        log.debug("Colorful witness found at the barycenter")
        return witness

    k = start_resolution
    scanned = 0
    while k <= max_resolution:
        for parts in compositions(oracle.n, k):
            # Already visited at the previous (half) resolution
            if k > start_resolution and all(p % 2 == 0 for p in parts):
                continue
            point = SimplexPoint.from_composition(parts, k)
            scanned += 1
            witness = _witness(oracle, point, oracle.memberships(point), k)
            if witness is not None:
                log.debug(f"Colorful witness found at resolution {k} after {scanned} points")
                return witness
        log.debug(f"No colorful witness at resolution {k} ({scanned} points so far)")
        k *= 2
    log.info(f"No colorful witness up to resolution {max_resolution}")
    return None

def membership_rows(oracle: CoverOracle, grid: KuhnGrid) -> Iterator[list[float | int]]:
    """CSV rows: vertex coordinates then the n*n membership bits, cover-major."""
    for point in enumerate_grid(grid):
        bits = oracle.memberships(point)
        yield list(point.coords) + [int(b) for b in bits.flatten()]

def membership_header(n: int) -> list[str]:
    return [f"x{i}" for i in range(1, n + 1)] + [f"A{j}^{i}" for i in range(1, n + 1) for j in range(1, n + 1)]

def threshold_cover(n: int, thresholds: Sequence[float]) -> CoverOracle:
    """Analytic covers: set j of cover i is {x : x_j > thresholds[i-1]}."""
    if len(thresholds) != n:
        raise ValueError(f"Expected {n} thresholds, got {len(thresholds)}")
    t = tuple(float(v) for v in thresholds)

    def membership(i: int, j: int, x: SimplexPoint) -> bool:
        return x.coords[j - 1] > t[i - 1]

    def margin(i: int, j: int, x: SimplexPoint) -> float:
        return x.coords[j - 1] - t[i - 1]

    def bitmap(x: SimplexPoint) -> np.ndarray:
        return np.array(x.coords)[None, :] > np.array(t)[:, None]

    return CoverOracle(n, membership, margin, bitmap)
