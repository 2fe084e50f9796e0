# Copyright (c) 2025 Benoît Pelletier
# SPDX-License-Identifier: MPL-2.0
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""
Decision procedures for the hypotheses of the piercing theorems:
common line transversals, property T(r), tight triples and their
colorful variants over several families.
"""

from dataclasses import dataclass
from enum import Enum
from itertools import combinations, product
from typing import Any, Sequence, TypeVar

import numpy as np

from pierce import log
from pierce.errors import BadArity, EmptyInput, FamilyTooLarge, UnsupportedR
from pierce.geometry import EPS_GEOM, ConvexBody, LineEq, Point, bodies_intersect, convex_hull

MAX_FAMILIES: int = 6
EXHAUSTIVE_CAP: int = 80
_CANDIDATE_CHUNK: int = 4096

T = TypeVar("T")

class Property(Enum):
    T3 = "T3"
    T4 = "T4"
    TIGHT_TRIPLES = "TightTriples"
    COLORFUL_TIGHT_TRIPLES = "ColorfulTightTriples"
    COLORFUL_T4 = "ColorfulT4"

@dataclass(frozen=True)
class FamilyId:
    index: int

    def __post_init__(self) -> None:
        if not 1 <= self.index <= MAX_FAMILIES:
            raise ValueError(f"Family index {self.index} outside [1, {MAX_FAMILIES}]")

@dataclass(frozen=True)
class SetRef:
    """A set of an instance: its family and its 0-based position in it."""
    family: FamilyId
    index: int

    def as_tuple(self) -> tuple[int, int]:
        return (self.family.index, self.index)

    @classmethod
    def of(cls, family: int, index: int) -> "SetRef":
        return cls(FamilyId(family), index)

@dataclass(frozen=True)
class HypothesisReport:
    property: Property
    holds: bool
    witness_violation: tuple[SetRef, ...] | None = None

    def __post_init__(self) -> None:
        if self.holds != (self.witness_violation is None):
            raise ValueError("A report fails exactly when it carries a witness")

    def witness_tuples(self) -> list[tuple[int, int]] | None:
        if self.witness_violation is None:
            return None
        return [ref.as_tuple() for ref in self.witness_violation]

    def to_dict(self) -> dict[str, Any]:
        return {
            "property": self.property.value,
            "holds": self.holds,
            "witness": [list(t) for t in self.witness_tuples()] if self.witness_violation else None,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "HypothesisReport":
        witness = data.get("witness")
        return cls(
            Property(data["property"]),
            bool(data["holds"]),
            tuple(SetRef.of(f, i) for f, i in witness) if witness else None,
        )

def _holds(prop: Property) -> HypothesisReport:
    return HypothesisReport(prop, True)

def _fails(prop: Property, witness: Sequence[SetRef]) -> HypothesisReport:
    report = HypothesisReport(prop, False, tuple(witness))
    log.info(f"Property {prop.value} fails, witness {report.witness_tuples()}")
    return report

def replicate(families: Sequence[Sequence[T]], m: int) -> list[Sequence[T]]:
    """Cycle the given families until there are m of them."""
    if len(families) == 0:
        raise EmptyInput("family list")
    return [families[i % len(families)] for i in range(m)]

# --- Line transversals ---

def common_transversal(bodies: Sequence[ConvexBody], eps: float = EPS_GEOM) -> LineEq | None:
    """
    A line hitting every body, or None. Candidate lines run through every
    pair of distinct vertices of the configuration: a transversal can be
    moved until it rests on two vertices, so the candidates are complete.
    """
    if len(bodies) == 0:
        raise EmptyInput("body list")
    arrays = [body.array for body in bodies]
    allv = np.concatenate(arrays)
    starts = np.cumsum([0] + [len(a) for a in arrays[:-1]])
    cand = np.unique(allv, axis=0)

    if len(cand) > 1:
        i, j = np.triu_indices(len(cand), k=1)
        d = cand[j] - cand[i]
        lengths = np.hypot(d[:, 0], d[:, 1])
        keep = lengths > eps
        i, d, lengths = i[keep], d[keep], lengths[keep]
        normals = np.stack([-d[:, 1], d[:, 0]], axis=1) / lengths[:, None]
        offsets = np.sum(normals * cand[i], axis=1)
        for lo in range(0, len(offsets), _CANDIDATE_CHUNK):
            nrm = normals[lo:lo + _CANDIDATE_CHUNK]
            off = offsets[lo:lo + _CANDIDATE_CHUNK]
            values = allv @ nrm.T - off
            mins = np.minimum.reduceat(values, starts, axis=0)
            maxs = np.maximum.reduceat(values, starts, axis=0)
            ok = np.all((mins <= eps) & (maxs >= -eps), axis=0)
            if ok.any():
                k = int(np.argmax(ok))
                return LineEq(float(nrm[k, 0]), float(nrm[k, 1]), float(off[k]))

    # All vertices (nearly) coincide: any line through one of them
    p = Point(float(cand[0, 0]), float(cand[0, 1]))
    line = LineEq(0.0, 1.0, p.y)
    values = allv @ np.array([line.a, line.b]) - line.c
    mins = np.minimum.reduceat(values, starts)
    maxs = np.maximum.reduceat(values, starts)
    if np.all((mins <= eps) & (maxs >= -eps)):
        return line
    return None

def check_T_r(family: Sequence[ConvexBody], r: int, allow_large: bool = False) -> HypothesisReport:
    """Exhaustive T(r) check over all subsets of size min(r, |family|), in lexicographic order."""
    if r not in (3, 4):
        raise UnsupportedR(r)
    if len(family) == 0:
        raise EmptyInput("family")
    if len(family) > EXHAUSTIVE_CAP and not allow_large:
        raise FamilyTooLarge(len(family), EXHAUSTIVE_CAP)
    prop = Property.T3 if r == 3 else Property.T4
    for combo in combinations(range(len(family)), min(r, len(family))):
        if common_transversal([family[i] for i in combo]) is None:
            return _fails(prop, [SetRef.of(1, i) for i in combo])
    return _holds(prop)

# --- Tight triples ---

def tight_triple(A: ConvexBody, B: ConvexBody, C: ConvexBody) -> bool:
    """conv(A u B), conv(A u C) and conv(B u C) have a common point."""
    if A == B or A == C or B == C:
        return True
    # A transversal triple is tight
    if common_transversal([A, B, C]) is not None:
        return True
    return bodies_intersect(
        convex_hull(A.vertices + B.vertices),
        convex_hull(A.vertices + C.vertices),
        convex_hull(B.vertices + C.vertices),
    )

def check_tight_family(family: Sequence[ConvexBody], allow_large: bool = False) -> HypothesisReport:
    """Every three members of the family form a tight triple."""
    if len(family) == 0:
        raise EmptyInput("family")
    if len(family) > EXHAUSTIVE_CAP and not allow_large:
        raise FamilyTooLarge(len(family), EXHAUSTIVE_CAP)
    for combo in combinations(range(len(family)), 3):
        if not tight_triple(*(family[i] for i in combo)):
            return _fails(Property.TIGHT_TRIPLES, [SetRef.of(1, i) for i in combo])
    return _holds(Property.TIGHT_TRIPLES)

def _check_cap(families: Sequence[Sequence[ConvexBody]], allow_large: bool) -> None:
    # Replicas share their bodies, the cap counts distinct ones
    size = len({id(body) for family in families for body in family})
    if size > EXHAUSTIVE_CAP and not allow_large:
        raise FamilyTooLarge(size, EXHAUSTIVE_CAP)

def check_colorful_tight(families: Sequence[Sequence[ConvexBody]], allow_large: bool = False) -> HypothesisReport:
    """
    Every three sets taken from three distinct families form a tight triple.
    Replicated families share their bodies, each distinct triple is decided once.
    """
    if len(families) != MAX_FAMILIES:
        raise BadArity(MAX_FAMILIES, len(families))
    _check_cap(families, allow_large)
    cache: dict[tuple[int, ...], bool] = {}
    for fams in combinations(range(MAX_FAMILIES), 3):
        for idx in product(*(range(len(families[f])) for f in fams)):
            bodies = [families[f][i] for f, i in zip(fams, idx)]
            key = tuple(sorted(id(b) for b in bodies))
            tight = cache.get(key)
            if tight is None:
                tight = tight_triple(*bodies)
                cache[key] = tight
            if not tight:
                return _fails(Property.COLORFUL_TIGHT_TRIPLES, [SetRef.of(f + 1, i) for f, i in zip(fams, idx)])
    log.debug(f"Colorful tight check decided {len(cache)} distinct triples")
    return _holds(Property.COLORFUL_TIGHT_TRIPLES)

def check_colorful_t4(families: Sequence[Sequence[ConvexBody]], allow_large: bool = False) -> HypothesisReport:
    """Every choice of one set per family (four families) has a common transversal."""
    if len(families) != 4:
        raise BadArity(4, len(families))
    _check_cap(families, allow_large)
    cache: dict[tuple[int, ...], bool] = {}
    for idx in product(*(range(len(family)) for family in families)):
        bodies = [families[f][i] for f, i in enumerate(idx)]
        distinct = {id(b): b for b in bodies}
        key = tuple(sorted(distinct))
        stabbed = cache.get(key)
        if stabbed is None:
            stabbed = common_transversal(list(distinct.values())) is not None
            cache[key] = stabbed
        if not stabbed:
            return _fails(Property.COLORFUL_T4, [SetRef.of(f + 1, i) for f, i in enumerate(idx)])
    return _holds(Property.COLORFUL_T4)
