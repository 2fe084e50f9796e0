# Copyright (c) 2025 Benoît Pelletier
# SPDX-License-Identifier: MPL-2.0
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""
Seeded instance generators. Every generator checks the hypothesis it
advertises before returning (the violator checks its violation).
"""

from typing import Any, Callable
import inspect
import math

import numpy as np

from pierce import log
from pierce.errors import GeneratorExhausted
from pierce.geometry import ConvexBody, LineEq, Point
from pierce.instance import InstanceFile
from pierce.kkm import SimplexPoint
from pierce.kwargparse import UnexpectedToken
from pierce.solver import chords_from_simplex
from pierce.transversal import (check_colorful_t4, check_colorful_tight, check_T_r, common_transversal, replicate,
                                tight_triple)

MAX_ATTEMPTS: int = 100_000

Families = list[list[ConvexBody]]

def body_around(rng: np.random.Generator, center: np.ndarray, size: float, sides: int | None = None) -> ConvexBody:
    """Random convex polygon strictly containing `center`: consecutive vertex angles stay less than pi apart."""
    k = sides or int(rng.integers(3, 7))
    angles = rng.uniform(0.0, 2.0 * math.pi) + 2.0 * math.pi * np.arange(k) / k + rng.uniform(-0.3, 0.3, k) * math.pi / k
    radii = size * rng.uniform(0.5, 1.0, k)
    pts = center + radii[:, None] * np.stack([np.cos(angles), np.sin(angles)], axis=1)
    return ConvexBody.of([(float(x), float(y)) for x, y in pts])

def _random_line(rng: np.random.Generator, offset: float = 0.3, angle: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    p = rng.uniform(-offset, offset, 2)
    theta = rng.uniform(0.0, math.pi) if angle is None else angle
    return p, np.array([math.cos(theta), math.sin(theta)])

def _deal(bodies: list[ConvexBody], families: int) -> Families:
    """Distribute bodies round robin over the families."""
    return [bodies[f::families] for f in range(families)]

def _check_arity(families: int, n: int, cap: int = 6) -> None:
    if not 1 <= families <= cap:
        raise ValueError(f"families must be in [1, {cap}], got {families}")
    if n < families:
        raise ValueError(f"n={n} leaves some of the {families} families empty")

def stabbed(rng: np.random.Generator, n: int = 20, families: int = 1, size: float = 0.1, spread: float = 1.0) -> Families:
    """Bodies centered on one planted line."""
    _check_arity(families, n)
    p, d = _random_line(rng)
    bodies = [body_around(rng, p + rng.uniform(-spread, spread) * d, size) for _ in range(n)]
    if common_transversal(bodies) is None:
        raise GeneratorExhausted("stabbed", 1)
    return _deal(bodies, families)

def planted3(rng: np.random.Generator, n: int = 24, families: int = 1, size: float = 0.2, spread: float = 0.5) -> Families:
    """Bodies along three planted lines, kept only while every three of them have a transversal."""
    _check_arity(families, n)
    base = rng.uniform(0.0, math.pi)
    lines = [_random_line(rng, 0.15, base + k * math.pi / 3 + rng.uniform(-0.2, 0.2)) for k in range(3)]
    bodies: list[ConvexBody] = []
    attempts = 0
    while len(bodies) < n:
        attempts += 1
        if attempts > MAX_ATTEMPTS:
            raise GeneratorExhausted("planted3", MAX_ATTEMPTS)
        p, d = lines[len(bodies) % 3]
        candidate = body_around(rng, p + rng.uniform(-spread, spread) * d, size)
        if all(common_transversal([bodies[a], bodies[b], candidate]) is not None
               for a in range(len(bodies)) for b in range(a + 1, len(bodies))):
            bodies.append(candidate)
    log.debug(f"planted3 accepted {n} bodies in {attempts} attempts")
    if not check_T_r(bodies, 3, allow_large=True).holds:
        raise GeneratorExhausted("planted3", attempts)
    return _deal(bodies, families)

def _crossings(start: Point, end: Point, others: list[LineEq]) -> list[float]:
    """Parameters along [start, end] where the other chord lines cross it."""
    dx, dy = end.x - start.x, end.y - start.y
    ts = []
    for line in others:
        denom = line.a * dx + line.b * dy
        if abs(denom) > 1e-12:
            ts.append(min(1.0, max(0.0, (line.c - line.a * start.x - line.b * start.y) / denom)))
    return ts

def planted_chords(rng: np.random.Generator, n: int = 3, families: int = 6, lines: int = 3, width: float = 0.02) -> Families:
    """
    Thin bodies along the chords of a hidden simplex point. Every body
    covers the part of its chord between the crossings with the other
    chords, so any two bodies meet: the instance is colorful-tight (three
    chords) or colorful-T(4) (two chords).
    """
    if lines not in (2, 3):
        raise ValueError(f"lines must be 2 or 3, got {lines}")
    cap = 2 * lines
    _check_arity(families, families * n, cap)
    for attempts in range(1, MAX_ATTEMPTS + 1):
        x = rng.dirichlet(np.full(cap, 4.0))
        if x.min() > 0.05:
            break
    else:
        raise GeneratorExhausted("plantedChords", MAX_ATTEMPTS)
    config = chords_from_simplex(SimplexPoint.from_array(x), cap)
    chord_lines = config.lines()

    def body_on(k: int) -> ConvexBody:
        chord = config.chords[k]
        ts = _crossings(chord.p, chord.q, [l for c, l in enumerate(chord_lines) if c != k]) or [0.5]
        t0 = rng.uniform(0.0, min(ts))
        t1 = rng.uniform(max(ts), 1.0)
        P, Q = np.array(chord.p.as_tuple()), np.array(chord.q.as_tuple())
        normal = np.array([chord_lines[k].a, chord_lines[k].b]) * width / 2.0
        a, b = P + t0 * (Q - P), P + t1 * (Q - P)
        return ConvexBody.of([tuple(a + normal), tuple(a - normal), tuple(b + normal), tuple(b - normal)])

    result = [[body_on((f + j) % lines) for j in range(n)] for f in range(families)]
    log.debug(f"plantedChords hidden point {np.round(x, 4).tolist()}")
    replicas = replicate(result, cap)
    report = check_colorful_tight(replicas, True) if lines == 3 else check_colorful_t4(replicas, True)
    if not report.holds:
        raise GeneratorExhausted("plantedChords", attempts)
    return result

def tight_random(rng: np.random.Generator, n: int = 8, families: int = 1, size: float = 0.5) -> Families:
    """Random bodies in [-1, 1]^2, kept only while every three of them form a tight triple."""
    _check_arity(families, n)
    bodies: list[ConvexBody] = []
    attempts = 0
    while len(bodies) < n:
        attempts += 1
        if attempts > MAX_ATTEMPTS:
            raise GeneratorExhausted("tightRandom", MAX_ATTEMPTS)
        candidate = body_around(rng, rng.uniform(-1.0, 1.0, 2), size * rng.uniform(0.6, 1.0))
        if all(tight_triple(bodies[a], bodies[b], candidate)
               for a in range(len(bodies)) for b in range(a + 1, len(bodies))):
            bodies.append(candidate)
    log.debug(f"tightRandom accepted {n} bodies in {attempts} attempts")
    result = _deal(bodies, families)
    if not check_colorful_tight(replicate(result, 6), allow_large=True).holds:
        raise GeneratorExhausted("tightRandom", attempts)
    return result

# Vertices of the triangle whose point sets never form a tight triple
VIOLATING_POINTS: tuple[tuple[float, float], ...] = ((0.0, 0.0), (1.0, 0.0), (0.0, 1.0))

def violator(rng: np.random.Generator, n: int = 3, families: int = 3, size: float = 0.1) -> Families:
    """Random small bodies plus the three triangle vertices, dealt to distinct families when possible."""
    _check_arity(families, max(n, 3))
    result: Families = [[] for _ in range(families)]
    for k, p in enumerate(VIOLATING_POINTS):
        result[k % families].append(ConvexBody.of([p]))
    for k in range(max(0, n - 3)):
        result[(k + 3) % families].append(body_around(rng, rng.uniform(-0.5, 1.5, 2), size))
    if check_colorful_tight(replicate(result, 6), allow_large=True).holds:
        raise GeneratorExhausted("violator", 1)
    return result

GENERATORS: dict[str, Callable[..., Families]] = {
    "stabbed": stabbed,
    "planted3": planted3,
    "plantedChords": planted_chords,
    "tightRandom": tight_random,
    "violator": violator,
}

def generator_params(kind: str) -> list[str]:
    return [name for name in inspect.signature(GENERATORS[kind]).parameters if name != "rng"]

def generate(kind: str, params: dict[str, Any] | None = None, seed: int = 0) -> InstanceFile:
    if kind not in GENERATORS:
        raise ValueError(f"Unknown generator `{kind}`, expected one of {', '.join(GENERATORS)}")
    params = dict(params or {})
    known = generator_params(kind)
    for key in params:
        if key not in known:
            raise UnexpectedToken(f"Unknown parameter `{key}` for generator `{kind}`, expected one of {', '.join(known)}")
    rng = np.random.default_rng(seed)
    families = GENERATORS[kind](rng, **params)
    metadata = {"generator": kind, "seed": str(seed)}
    metadata.update({f"param.{key}": str(value) for key, value in sorted(params.items())})
    log.info(f"Generated `{kind}` instance with {sum(len(f) for f in families)} bodies (seed {seed})")
    return InstanceFile.from_bodies(families, metadata)
