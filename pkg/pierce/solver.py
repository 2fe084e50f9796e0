# Copyright (c) 2025 Benoît Pelletier
# SPDX-License-Identifier: MPL-2.0
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""
Piercing-line search.

A point x of the simplex (6 or 4 coordinates) places points f_1..f_n on
the unit circle at the cumulative angles 2*pi*(x_1 + ... + x_i); opposite
points are joined by chords (3 or 2 of them). The regions of the chord
arrangement next to each arc induce a family of KKM covers of the simplex.
A point x where some family has no member inside any region gives the
piercing lines; otherwise the covers yield a colorful witness and an
obstruction to the hypothesis.

The search is numerical (grid seeding then projected Nelder-Mead on the
simplex), every emitted certificate is re-verified with closed line hits.
"""

from dataclasses import dataclass, field, fields, replace
from enum import Enum
from functools import cached_property
from typing import Any, Callable, Sequence
import math

import numpy as np

from pierce import log
from pierce.decorators import Stopwatch
from pierce.errors import BadArity, EmptyInput, HypothesisViolated, Inconclusive, KkmConditionViolated
from pierce.event import SolverEvents
from pierce.geometry import (EPS_GEOM, AffineMap, Chord, ConvexBody, LineEq, Point, body_line_hit,
                             body_segment_distance, clip_polygon, normalize_to_disk, polygon_area,
                             regular_polygon, segment_segment_distance)
from pierce.kkm import (ColorfulWitness, CoverOracle, SimplexPoint, compositions, find_colorful_witness)
from pierce.transversal import (FamilyId, HypothesisReport, SetRef, check_colorful_t4, check_colorful_tight,
                                common_transversal, replicate, tight_triple)

ARC_PULL: float = 1e-6
REGION_POLYGON_SIDES: int = 64
_CHUNK: int = 512

# --- Chord configurations ---

@dataclass(frozen=True)
class Halfplanes:
    """Arc-side halfplanes of a configuration: region i is {sign[i] * (normals @ p - offsets) > 0} in the disk."""
    normals: np.ndarray   # (C, 2)
    offsets: np.ndarray   # (C,)
    signs: np.ndarray     # (n, C)
    valid: np.ndarray     # (n,) regions that can be nonempty

@dataclass(frozen=True)
class ChordConfig:
    n: int
    x: SimplexPoint
    anchors: tuple[Point, ...]
    chords: tuple[Chord, ...]

    def cumulative(self, i: int) -> float:
        """s_i = x_1 + ... + x_i, with s_0 = 0 and s_n = 1."""
        if i <= 0:
            return 0.0
        if i >= self.n:
            return 1.0
        return min(1.0, math.fsum(self.x.coords[:i]))

    def arc_midpoint(self, i: int, pull: float = ARC_PULL) -> Point:
        """Midpoint of the arc from f_{i-1} to f_i, pulled inward to radius 1 - pull."""
        s = self.cumulative(i - 1) + self.x.coords[i - 1] / 2.0
        return Point.polar(2.0 * math.pi * s, 1.0 - pull)

    @cached_property
    def halfplanes(self) -> Halfplanes:
        lines = [chord.line() for chord in self.chords if not chord.is_degenerate()]
        normals = np.array([[l.a, l.b] for l in lines], dtype=float).reshape(-1, 2)
        offsets = np.array([l.c for l in lines], dtype=float)
        signs = np.zeros((self.n, len(lines)))
        valid = np.zeros(self.n, dtype=bool)
        for i in range(1, self.n + 1):
            if self.x.coords[i - 1] <= 0.0:
                continue
            m = self.arc_midpoint(i)
            values = normals @ np.array(m.as_tuple()) - offsets
            if np.any(np.abs(values) <= EPS_GEOM):
                continue
            signs[i - 1] = np.sign(values)
            valid[i - 1] = True
        return Halfplanes(normals, offsets, signs, valid)

    def lines(self) -> list[LineEq]:
        return [chord.line() for chord in self.chords]

def chords_from_simplex(x: SimplexPoint, n: int | None = None) -> ChordConfig:
    n = x.n if n is None else n
    if n not in (4, 6) or x.n != n:
        raise ValueError(f"Chord configurations need a point of dimension 4 or 6, got {x.n} for n={n}")
    anchors: list[Point] = []
    s = 0.0
    for i in range(n - 1):
        s = min(1.0, s + x.coords[i])
        anchors.append(Point.polar(2.0 * math.pi * s))
    anchors.append(Point(1.0, 0.0))
    half = n // 2
    chords = tuple(Chord(anchors[k], anchors[k + half]) for k in range(half))
    return ChordConfig(n, x, tuple(anchors), chords)

def region_mask(config: ChordConfig, i: int, X: np.ndarray) -> np.ndarray:
    """Vectorized `region_contains` over points X of shape (k, 2)."""
    X = np.asarray(X, dtype=float).reshape(-1, 2)
    hp = config.halfplanes
    if not hp.valid[i - 1]:
        return np.zeros(len(X), dtype=bool)
    inside = np.hypot(X[:, 0], X[:, 1]) < 1.0 - EPS_GEOM
    if len(hp.offsets) == 0:
        return inside
    values = (X @ hp.normals.T - hp.offsets) * hp.signs[i - 1]
    return inside & np.all(values > EPS_GEOM, axis=1)

def region_contains(config: ChordConfig, i: int, p: Point) -> bool:
    return bool(region_mask(config, i, np.array([p.as_tuple()]))[0])

def body_in_region(config: ChordConfig, i: int, F: ConvexBody) -> bool:
    # Regions are convex, the vertices decide
    return bool(region_mask(config, i, F.array).all())

def region_polygon(config: ChordConfig, i: int, sides: int = REGION_POLYGON_SIDES) -> list[Point]:
    """Region i clipped to the inscribed regular polygon of the disk."""
    hp = config.halfplanes
    if not hp.valid[i - 1]:
        return []
    poly = regular_polygon(Point(0.0, 0.0), 1.0, sides)
    for (a, b), c, sign in zip(hp.normals, hp.offsets, hp.signs[i - 1]):
        poly = clip_polygon(poly, sign * a, sign * b, sign * c)
    return poly

def _overlap(config: ChordConfig, i: int, k: int) -> bool:
    poly = region_polygon(config, i)
    hp = config.halfplanes
    if not poly or not hp.valid[k - 1]:
        return False
    for (a, b), c, sign in zip(hp.normals, hp.offsets, hp.signs[k - 1]):
        poly = clip_polygon(poly, sign * a, sign * b, sign * c)
    return abs(polygon_area(poly)) > 1e-12

def alternating_disjoint(config: ChordConfig) -> str | None:
    """Which alternating region set, "odd" (1, 3, ...) or "even" (2, 4, ...), is pairwise disjoint first."""
    for name, start in (("odd", 1), ("even", 2)):
        regions = tuple(range(start, config.n + 1, 2))
        if all(not _overlap(config, a, b) for idx, a in enumerate(regions) for b in regions[idx + 1:]):
            return name
    return None

# --- Instances and results ---

@dataclass(frozen=True)
class Instance:
    """Families as given, their images in the unit disk and the map between both."""
    families: tuple[tuple[ConvexBody, ...], ...]
    normalized: tuple[tuple[ConvexBody, ...], ...]
    transform: AffineMap

    @classmethod
    def from_families(cls, families: Sequence[Sequence[ConvexBody]]) -> "Instance":
        if len(families) == 0:
            raise EmptyInput("family list")
        if any(len(family) == 0 for family in families):
            raise EmptyInput("family")
        transform, normalized = normalize_to_disk(families)
        return cls(tuple(tuple(f) for f in families), tuple(tuple(f) for f in normalized), transform)

class Outcome(Enum):
    CERTIFICATE = "Certificate"
    DUAL_WITNESS = "DualWitness"
    INCONCLUSIVE = "Inconclusive"
    HYPOTHESIS_VIOLATED = "HypothesisViolated"

def _transform_dict(transform: AffineMap) -> dict[str, Any]:
    return {"scale": transform.scale, "shift": [transform.shift.x, transform.shift.y]}

def _transform_from(data: dict[str, Any]) -> AffineMap:
    return AffineMap(float(data["scale"]), Point(*data["shift"]))

@dataclass(frozen=True)
class PiercingCertificate:
    lines: tuple[LineEq, ...]           # normalized coordinates
    family: FamilyId
    assignment: tuple[int, ...]         # per set, 0-based index of a hitting line
    residual: float
    witness: SimplexPoint
    transform: AffineMap

    @property
    def original_lines(self) -> tuple[LineEq, ...]:
        return tuple(self.transform.pull_back_line(line) for line in self.lines)

    def to_dict(self) -> dict[str, Any]:
        return {
            "family": self.family.index,
            "lines": [list(line.as_tuple()) for line in self.lines],
            "original_lines": [list(line.as_tuple()) for line in self.original_lines],
            "assignment": list(self.assignment),
            "residual": self.residual,
            "witness": list(self.witness.coords),
            "transform": _transform_dict(self.transform),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "PiercingCertificate":
        return cls(
            tuple(LineEq(*line) for line in data["lines"]),
            FamilyId(int(data["family"])),
            tuple(int(a) for a in data["assignment"]),
            float(data["residual"]),
            SimplexPoint(tuple(data["witness"])),
            _transform_from(data["transform"]),
        )

@dataclass(frozen=True)
class DualWitness:
    """
    A colorful KKM witness of the induced covers: `sets[i-1]` lies in region i.
    `obstruction` are sets shown to violate the hypothesis (a non-tight
    triple for three lines, four sets without transversal for two lines).
    """
    witness: ColorfulWitness
    sets: tuple[SetRef, ...]
    obstruction: tuple[SetRef, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "point": list(self.witness.point.coords),
            "permutation": list(self.witness.permutation),
            "margins": list(self.witness.margins),
            "sets": [list(ref.as_tuple()) for ref in self.sets],
            "obstruction": [list(ref.as_tuple()) for ref in self.obstruction],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "DualWitness":
        witness = ColorfulWitness(tuple(data["permutation"]), SimplexPoint(tuple(data["point"])), tuple(data["margins"]))
        return cls(witness,
                   tuple(SetRef.of(f, i) for f, i in data["sets"]),
                   tuple(SetRef.of(f, i) for f, i in data["obstruction"]))

@dataclass(frozen=True)
class SolveResult:
    outcome: Outcome
    instance: Instance
    certificate: PiercingCertificate | None = None
    dual_witness: DualWitness | None = None
    hypothesis: HypothesisReport | None = None
    best_residual: float = math.inf
    evaluations: int = 0
    timings: dict[str, float] = field(default_factory=dict)

@dataclass(frozen=True)
class SolverOptions:
    lines: int = 3
    waive_hypothesis: bool = False
    seed: int = 0
    grid_resolution: int | None = None
    starts: int = 32
    max_evaluations: int = 2000
    tol_residual: float = 1e-9
    kkm_max_resolution: int = 16
    allow_large: bool = False

    def resolution_for(self, n: int) -> int:
        if self.grid_resolution is not None:
            return self.grid_resolution
        return 12 if n == 6 else 20

    @classmethod
    def from_config(cls, config: dict[str, Any], **overrides: Any) -> "SolverOptions":
        """Defaults, then the `solver` section of config.json, then explicit (non None) overrides."""
        known = {f.name for f in fields(cls)}
        values = {k: v for k, v in (config or {}).items() if k in known}
        for key in set(config or {}) - known:
            log.warning(f"Ignoring unknown solver option `{key}` in config")
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

# --- Induced covers ---

class _Packed:
    """Vertices and edges of the distinct families, packed for numpy."""
    def __init__(self, families: Sequence[Sequence[ConvexBody]]) -> None:
        self.slot_of: list[int] = []
        self.families: list[Sequence[ConvexBody]] = []
        seen: dict[int, int] = {}
        for family in families:
            if id(family) not in seen:
                seen[id(family)] = len(self.families)
                self.families.append(family)
            self.slot_of.append(seen[id(family)])

        self.vertices: list[np.ndarray] = []
        self.vertex_starts: list[np.ndarray] = []
        self.edge_starts: list[np.ndarray] = []
        self.edges0: list[np.ndarray] = []
        self.edges1: list[np.ndarray] = []
        for family in self.families:
            arrays = [body.array for body in family]
            sizes = [len(a) for a in arrays]
            starts = np.cumsum([0] + sizes[:-1])
            verts = np.concatenate(arrays)
            self.vertices.append(verts)
            self.vertex_starts.append(starts)
            self.edge_starts.append(starts)
            self.edges0.append(verts)
            self.edges1.append(np.concatenate([np.roll(a, -1, axis=0) for a in arrays]))

class InducedCover:
    """
    Cover j (a family) of the simplex: set i holds the points x whose region
    i contains a body of the family. Membership needs a positive margin
    (the regions are open), the margin of a body is the smallest slack of
    its vertices.
    """
    def __init__(self, families: Sequence[Sequence[ConvexBody]], n: int) -> None:
        if len(families) != n:
            raise BadArity(n, len(families))
        self.n = n
        self.packed = _Packed(families)
        self._cache_key: tuple[float, ...] | None = None
        self._cache_value: np.ndarray | None = None

    def margins(self, x: SimplexPoint) -> np.ndarray:
        """(n, n) margins indexed [family slot, region]; positive means member."""
        if x.coords == self._cache_key:
            return self._cache_value
        config = chords_from_simplex(x, self.n)
        hp = config.halfplanes
        per_family = []
        for verts, starts in zip(self.packed.vertices, self.packed.vertex_starts):
            disk = (1.0 - EPS_GEOM) - np.hypot(verts[:, 0], verts[:, 1])
            values = verts @ hp.normals.T - hp.offsets if len(hp.offsets) else np.zeros((len(verts), 0))
            out = np.full(self.n, -1.0)
            for i in range(self.n):
                if not hp.valid[i]:
                    continue
                slack = disk
                if values.shape[1]:
                    slack = np.minimum(slack, np.min(values * hp.signs[i] - EPS_GEOM, axis=1))
                out[i] = float(np.minimum.reduceat(slack, starts).max())
            per_family.append(out)
        result = np.array([per_family[slot] for slot in self.packed.slot_of])
        self._cache_key, self._cache_value = x.coords, result
        return result

    def bitmap(self, x: SimplexPoint) -> np.ndarray:
        return self.margins(x) > 0.0

    def oracle(self) -> CoverOracle:
        def membership(j: int, i: int, x: SimplexPoint) -> bool:
            return bool(self.bitmap(x)[j - 1, i - 1])

        def margin(j: int, i: int, x: SimplexPoint) -> float:
            return float(self.margins(x)[j - 1, i - 1])

        return CoverOracle(self.n, membership, margin, self.bitmap)

def induced_cover(families: Sequence[Sequence[ConvexBody]], n: int) -> CoverOracle:
    return InducedCover(families, n).oracle()

# --- Objective ---

def _anchor_arrays(X: np.ndarray) -> np.ndarray:
    """Anchors (P, n, 2) of simplex points X (P, n)."""
    s = np.minimum(np.cumsum(X, axis=1), 1.0)
    s[:, -1] = 1.0
    angles = 2.0 * np.pi * s
    anchors = np.stack([np.cos(angles), np.sin(angles)], axis=-1)
    anchors[:, -1] = (1.0, 0.0)
    return anchors

class Objective:
    """
    g_j(x) = max over bodies F of family j of the distance from F to the
    nearest chord of x. g_j(x) = 0 means the chords pierce family j.
    """
    def __init__(self, families: Sequence[Sequence[ConvexBody]], n: int) -> None:
        self.n = n
        self.packed = _Packed(families)
        half = n // 2
        self._first = np.arange(half)
        self._second = np.arange(half) + half
        self.evaluations = 0

    def values(self, X: np.ndarray) -> np.ndarray:
        """g_j for each point of X (P, n) and each distinct family: (P, m)."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        out = np.empty((len(X), len(self.packed.families)))
        for lo in range(0, len(X), _CHUNK):
            anchors = _anchor_arrays(X[lo:lo + _CHUNK])
            A = anchors[:, self._first][:, :, None, :]
            B = anchors[:, self._second][:, :, None, :]
            for f, (E0, E1, starts) in enumerate(zip(self.packed.edges0, self.packed.edges1, self.packed.edge_starts)):
                d = segment_segment_distance(E0[None, None], E1[None, None], A, B)  # (P, C, M)
                per_body = np.minimum.reduceat(d, starts, axis=2).min(axis=1)
                out[lo:lo + _CHUNK, f] = per_body.max(axis=1)
        self.evaluations += len(X)
        return out

    def best(self, x: np.ndarray) -> tuple[float, int]:
        """(min_j g_j(x), achieving family index) for a single point."""
        values = self.values(x[None, :])[0]
        f = int(np.argmin(values))
        return float(values[f]), f

def objective(families: Sequence[Sequence[ConvexBody]], n: int, points: np.ndarray) -> np.ndarray:
    """g_j of every (normalized) family j at every simplex point, shape (P, m)."""
    return Objective(families, n).values(points)

# --- Derivative-free descent on the simplex ---

def project_to_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex."""
    n = len(v)
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    rho = np.nonzero(u * np.arange(1, n + 1) > css - 1.0)[0][-1]
    theta = (css[rho] - 1.0) / (rho + 1.0)
    w = np.maximum(v - theta, 0.0)
    return w / w.sum()

def _tangent_basis(n: int) -> np.ndarray:
    """Orthonormal basis (n, n-1) of the sum-zero hyperplane."""
    u, _, _ = np.linalg.svd(np.eye(n) - 1.0 / n)
    return u[:, :n - 1]

def nelder_mead(
    func: Callable[[np.ndarray], float],
    y_start: np.ndarray,
    step: float,
    max_evals: int,
    target: float,
    alpha: float = 1.0, gamma: float = 2.0, beta: float = 0.5, delta: float = 0.5
) -> tuple[np.ndarray, float, int]:
    """
    Nelder-Mead minimization stopping at `target`, with restarts around the
    best point whenever the simplex collapses. Returns (best, value, evaluations).
    """
    dim = len(y_start)
    evals = 0

    def score(y: np.ndarray) -> float:
        nonlocal evals
        evals += 1
        return func(y)

    best_y = np.copy(y_start)
    best = score(best_y)
    while evals < max_evals and best > target:
        res = [[best_y, best]]
        for i in range(dim):
            y = np.copy(best_y)
            y[i] += step
            res.append([y, score(y)])
        no_improve = 0
        prev_best = best
        while evals < max_evals:
            res.sort(key=lambda r: r[1])
            if res[0][1] <= target:
                break
            if res[0][1] < prev_best - 1e-15:
                no_improve, prev_best = 0, res[0][1]
            else:
                no_improve += 1
            diameter = max(np.abs(r[0] - res[0][0]).max() for r in res[1:])
            if diameter < 1e-13 or no_improve >= 20 * dim:
                break

            # Centroid
            y0 = np.mean([r[0] for r in res[:-1]], axis=0)

            # Reflection
            yr = y0 + alpha * (y0 - res[-1][0])
            rscore = score(yr)
            if res[0][1] <= rscore < res[-2][1]:
                res[-1] = [yr, rscore]
                continue

            # Expansion
            if rscore < res[0][1]:
                ye = y0 + gamma * (y0 - res[-1][0])
                escore = score(ye)
                res[-1] = [ye, escore] if escore < rscore else [yr, rscore]
                continue

            # Contraction
            yc = y0 + beta * (res[-1][0] - y0)
            cscore = score(yc)
            if cscore < res[-1][1]:
                res[-1] = [yc, cscore]
                continue

            # Reduction
            y1 = res[0][0]
            res = [res[0]] + [[y1 + delta * (r[0] - y1), score(y1 + delta * (r[0] - y1))] for r in res[1:]]

        res.sort(key=lambda r: r[1])
        if res[0][1] < best:
            best_y, best = res[0][0], res[0][1]
            diameter = max(np.abs(r[0] - res[0][0]).max() for r in res[1:])
            step = max(10.0 * diameter, 1e-12)
        else:
            step /= 4.0
            if step < 1e-14:
                break
    return best_y, best, evals

# --- Search ---

class _Search:
    def __init__(self, instance: Instance, k: int, options: SolverOptions) -> None:
        self.instance = instance
        self.k = k
        self.n = 2 * k
        self.options = options
        self.rng = np.random.default_rng(options.seed)
        self.objective = Objective(instance.normalized, self.n)
        self.best_residual = math.inf
        self.watch = Stopwatch()

    def certificate_at(self, x: SimplexPoint, family: int) -> PiercingCertificate | None:
        """Certificate for distinct family `family` at x if every body hits an assigned line."""
        config = chords_from_simplex(x, self.n)
        lines = config.lines()
        bodies = self.objective.packed.families[family]
        residual = float(self.objective.values(x.array()[None, :])[0, family])
        assignment: list[int] = []
        for body in bodies:
            distances = [body_segment_distance(body, chord) for chord in config.chords]
            order = sorted(range(len(lines)), key=lambda c: (distances[c], c))
            hit = next((c for c in order if body_line_hit(body, lines[c])), None)
            if hit is None:
                return None
            assignment.append(hit)
        return PiercingCertificate(tuple(lines), FamilyId(family + 1), tuple(assignment),
                                   residual, x, self.instance.transform)

    def grid_phase(self) -> tuple[PiercingCertificate | None, np.ndarray, np.ndarray]:
        r = self.options.resolution_for(self.n)
        X = np.array(list(compositions(self.n, r)), dtype=float) / r
        values = self.objective.values(X)
        G = values.min(axis=1)
        families = values.argmin(axis=1)
        order = np.argsort(G, kind="stable")
        self.best_residual = min(self.best_residual, float(G[order[0]]))
        log.debug(f"Grid of {len(X)} points at resolution {r}, best residual {G[order[0]]:.3e}")
        for idx in order:
            if G[idx] > self.options.tol_residual:
                break
            cert = self.certificate_at(SimplexPoint.from_array(X[idx]), int(families[idx]))
            if cert is not None:
                return cert, X, order
        return None, X, order

    def descend(self, x0: np.ndarray, step: float) -> tuple[np.ndarray, float]:
        basis = _tangent_basis(self.n)

        def to_simplex(y: np.ndarray) -> np.ndarray:
            return project_to_simplex(x0 + basis @ y)

        def func(y: np.ndarray) -> float:
            return self.objective.best(to_simplex(y))[0]

        y, value, _ = nelder_mead(func, np.zeros(self.n - 1), step,
                                  self.options.max_evaluations, self.options.tol_residual)
        return to_simplex(y), value

    def descent_phase(self, X: np.ndarray, order: np.ndarray) -> PiercingCertificate | None:
        spacing = 1.0 / self.options.resolution_for(self.n)
        for start, idx in enumerate(order[:self.options.starts]):
            step = spacing * float(self.rng.uniform(0.5, 1.5))
            x, value = self.descend(X[idx], step)
            self.best_residual = min(self.best_residual, value)
            SolverEvents.on_start.dispatch(start, value)
            if value <= self.options.tol_residual:
                _, family = self.objective.best(x)
                cert = self.certificate_at(SimplexPoint.from_array(x), family)
                if cert is not None:
                    log.info(f"Certificate found by descent start {start} (residual {value:.3e})")
                    return cert
        return None

    def dual_phase(self) -> PiercingCertificate | DualWitness:
        families = replicate(self.instance.normalized, self.n)
        cover = InducedCover(families, self.n)
        try:
            witness = find_colorful_witness(cover.oracle(), max_resolution=self.options.kkm_max_resolution)
        except KkmConditionViolated as e:
            # e.point lies outside every set of cover e.cover: its chords pierce that family
            slot = cover.packed.slot_of[e.cover - 1]
            x = e.point.array()
            value = float(self.objective.values(x[None, :])[0, slot])
            if value > self.options.tol_residual:
                x, value = self.descend(x, 1e-3)
            self.best_residual = min(self.best_residual, value)
            if value <= self.options.tol_residual:
                cert = self.certificate_at(SimplexPoint.from_array(x), slot)
                if cert is not None:
                    return cert
            raise Inconclusive(self.best_residual, "point outside the induced cover did not certify")
        if witness is None:
            raise Inconclusive(self.best_residual, f"no colorful witness up to resolution {self.options.kkm_max_resolution}")

        config = chords_from_simplex(witness.point, self.n)
        m = len(self.instance.normalized)
        sets: list[SetRef] = []
        for slot, region in enumerate(witness.permutation):
            family = slot % m
            body = next(idx for idx, F in enumerate(self.instance.normalized[family])
                        if body_in_region(config, region, F))
            sets.append((region, SetRef.of(family + 1, body)))
        sets_by_region = tuple(ref for _, ref in sorted(sets, key=lambda t: t[0]))

        def body_of(ref: SetRef) -> ConvexBody:
            return self.instance.families[ref.family.index - 1][ref.index]

        if self.n == 6:
            for triple in ((0, 2, 4), (1, 3, 5)):
                refs = tuple(sets_by_region[t] for t in triple)
                if not tight_triple(*(body_of(ref) for ref in refs)):
                    return DualWitness(witness, sets_by_region, refs)
        elif common_transversal([body_of(ref) for ref in sets_by_region]) is None:
            return DualWitness(witness, sets_by_region, sets_by_region)
        raise Inconclusive(self.best_residual, "colorful witness without confirmed obstruction")

def _solve(families: Sequence[Sequence[ConvexBody]], k: int, options: SolverOptions) -> SolveResult:
    n = 2 * k
    if len(families) > n:
        raise BadArity(n, len(families))
    instance = Instance.from_families(families)
    search = _Search(instance, k, options)

    hypothesis = None
    if not options.waive_hypothesis:
        with search.watch.phase("hypothesis"):
            replicas = replicate(instance.families, n)
            check = check_colorful_tight if k == 3 else check_colorful_t4
            hypothesis = check(replicas, options.allow_large)
        if not hypothesis.holds:
            raise HypothesisViolated(hypothesis)

    def done(outcome: Outcome, **payload: Any) -> SolveResult:
        return SolveResult(outcome, instance, hypothesis=hypothesis, best_residual=search.best_residual,
                           evaluations=search.objective.evaluations, timings=dict(search.watch.timings), **payload)

    with search.watch.phase("grid") as phase:
        cert, X, order = search.grid_phase()
    SolverEvents.on_phase.dispatch("grid", phase.elapsed_ms)
    if cert is not None:
        return done(Outcome.CERTIFICATE, certificate=cert)

    with search.watch.phase("descent") as phase:
        cert = search.descent_phase(X, order)
    SolverEvents.on_phase.dispatch("descent", phase.elapsed_ms)
    if cert is not None:
        return done(Outcome.CERTIFICATE, certificate=cert)

    log.info(f"Descent failed (best residual {search.best_residual:.3e}), searching a colorful witness")
    with search.watch.phase("dual") as phase:
        found = search.dual_phase()
    SolverEvents.on_phase.dispatch("dual", phase.elapsed_ms)
    if isinstance(found, PiercingCertificate):
        return done(Outcome.CERTIFICATE, certificate=found)
    return done(Outcome.DUAL_WITNESS, dual_witness=found)

def solve_three_lines(families: Sequence[Sequence[ConvexBody]], options: SolverOptions = SolverOptions()) -> SolveResult:
    """Three lines piercing one of up to six families of tight triples, or a dual witness."""
    return _solve(families, 3, replace(options, lines=3))

def solve_two_lines(families: Sequence[Sequence[ConvexBody]], options: SolverOptions = SolverOptions()) -> SolveResult:
    """Two lines piercing one of up to four colorful-T(4) families, or a dual witness."""
    return _solve(families, 2, replace(options, lines=2))

def verify_certificate(instance: Instance, certificate: PiercingCertificate) -> bool:
    """
    Re-check every set of the certified family against its assigned line in
    original coordinates; the assignment is advisory, all lines are tried.
    """
    if not 1 <= certificate.family.index <= len(instance.families):
        return False
    family = instance.families[certificate.family.index - 1]
    if len(certificate.assignment) != len(family):
        return False
    lines = certificate.original_lines
    eps = EPS_GEOM * max(1.0, 1.0 / certificate.transform.scale)
    for body, assigned in zip(family, certificate.assignment):
        if 0 <= assigned < len(lines) and body_line_hit(body, lines[assigned], eps):
            continue
        if not any(body_line_hit(body, line, eps) for line in lines):
            log.debug(f"Certificate fails on body {body.vertices}")
            return False
    return True

@dataclass(frozen=True)
class DeepLine:
    line: LineEq              # original coordinates
    count: int
    size: int
    certificate: PiercingCertificate | None = None

    @property
    def guaranteed(self) -> int:
        return math.ceil(self.size / 3)

def deep_line(family: Sequence[ConvexBody], options: SolverOptions = SolverOptions()) -> DeepLine:
    """
    A line hitting every member when the family has a common transversal,
    else the certificate line hitting the most members: at least a third of
    them by pigeonhole.
    """
    if len(family) == 0:
        raise EmptyInput("family")
    line = common_transversal(family)
    if line is not None:
        log.info(f"Family of {len(family)} bodies has a common transversal")
        return DeepLine(line, len(family), len(family))

    result = solve_three_lines([family], options)
    if result.certificate is None:
        raise Inconclusive(result.best_residual, "no three-line certificate for the family")
    cert = result.certificate
    eps = EPS_GEOM * max(1.0, 1.0 / cert.transform.scale)
    counts = [sum(body_line_hit(body, line, eps) for body in family) for line in cert.original_lines]
    best = max(range(len(counts)), key=lambda c: (counts[c], -c))
    log.info(f"Deep line hits {counts[best]} of {len(family)} bodies")
    return DeepLine(cert.original_lines[best], counts[best], len(family), cert)
