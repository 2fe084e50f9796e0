# Copyright (c) 2025 Benoît Pelletier
# SPDX-License-Identifier: MPL-2.0
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

from dataclasses import replace
import math

import numpy as np
import pytest
from scipy import ndimage

from pierce.errors import BadArity, EmptyInput, FamilyTooLarge, HypothesisViolated, Inconclusive
from pierce.event import SolverEvents
from pierce.generators import planted3, planted_chords, stabbed, tight_random, violator
from pierce.geometry import EPS_GEOM, ConvexBody, LineEq, Point, body_line_hit, body_segment_distance, normalize_to_disk
from pierce.kkm import ColorfulWitness, SimplexPoint
from pierce.solver import (DualWitness, Instance, InducedCover, Objective, Outcome, PiercingCertificate,
                           SolverOptions, alternating_disjoint, body_in_region, chords_from_simplex, deep_line,
                           induced_cover, nelder_mead, objective, project_to_simplex, region_contains, region_mask,
                           region_polygon, solve_three_lines, solve_two_lines, verify_certificate)
from pierce.transversal import EXHAUSTIVE_CAP, SetRef, check_tight_family, replicate
from shapes import dot, on_line, square

def random_point(rng: np.random.Generator, n: int, concentration: float = 4.0) -> SimplexPoint:
    return SimplexPoint.from_array(rng.dirichlet(np.full(n, concentration)))

class TestChordConfig:
    def test_barycenter_gives_diameters(self):
        config = chords_from_simplex(SimplexPoint.barycenter(6))
        assert len(config.chords) == 3
        for chord in config.chords:
            assert chord.line().value(Point(0.0, 0.0)) == pytest.approx(0.0, abs=1e-12)
        assert config.anchors[0].x == pytest.approx(math.cos(math.pi / 3))
        assert config.anchors[-1] == Point(1.0, 0.0)

    def test_direct_anchors(self):
        config = chords_from_simplex(SimplexPoint((0.1, 0.2, 0.3, 0.4)))
        angles = [2 * math.pi * s for s in (0.1, 0.3, 0.6)]
        for anchor, angle in zip(config.anchors, angles):
            assert (anchor.x, anchor.y) == pytest.approx((math.cos(angle), math.sin(angle)))
        assert config.chords[0].p == config.anchors[0]
        assert config.chords[0].q == config.anchors[2]
        assert config.chords[1].q == config.anchors[3]

    def test_vertex_collapses_every_chord(self):
        config = chords_from_simplex(SimplexPoint.vertex(6, 6))
        assert all(chord.is_degenerate() for chord in config.chords)
        assert region_contains(config, 6, Point(0.0, 0.0))
        assert not region_contains(config, 1, Point(0.0, 0.0))

    def test_dimension_checks(self):
        with pytest.raises(ValueError):
            chords_from_simplex(SimplexPoint.barycenter(5))
        with pytest.raises(ValueError):
            chords_from_simplex(SimplexPoint.barycenter(4), 6)

class TestRegions:
    def test_region_of_an_arc(self):
        config = chords_from_simplex(SimplexPoint.barycenter(6))
        p = Point.polar(math.pi / 6, 0.9)
        assert region_contains(config, 1, p)
        assert not any(region_contains(config, i, p) for i in range(2, 7))

    def test_body_in_region(self):
        config = chords_from_simplex(SimplexPoint.barycenter(6))
        assert body_in_region(config, 1, square(0.5, 0.25, 0.05))
        # Across the chord on the x axis
        straddling = square(0.5, 0.0, 0.05)
        assert not any(body_in_region(config, i, straddling) for i in range(1, 7))
        assert not body_in_region(config, 1, dot(1.0, 0.0))

    def test_empty_faces(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            x = rng.dirichlet(np.ones(6))
            x[2] = 0.0
            config = chords_from_simplex(SimplexPoint.from_array(x))
            assert region_polygon(config, 3) == []
            assert not region_mask(config, 3, rng.uniform(-1, 1, (200, 2))).any()

    def test_polygons_are_convex(self):
        rng = np.random.default_rng(2)
        for _ in range(30):
            x = random_point(rng, 6)
            if min(x.coords) < 0.05:
                continue
            config = chords_from_simplex(x)
            for i in range(1, 7):
                poly = region_polygon(config, i)
                assert len(poly) >= 3
                for a, b, c in zip(poly, poly[1:] + poly[:1], poly[2:] + poly[:2]):
                    turn = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x)
                    assert turn >= -1e-12

    def test_midpoints_stay_inside(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            config = chords_from_simplex(random_point(rng, 6))
            samples = rng.uniform(-1, 1, (600, 2))
            samples = samples[np.hypot(samples[:, 0], samples[:, 1]) < 1.0]
            for i in range(1, 7):
                inside = samples[region_mask(config, i, samples)]
                if len(inside) < 2:
                    continue
                a = inside[rng.integers(len(inside), size=50)]
                b = inside[rng.integers(len(inside), size=50)]
                assert region_mask(config, i, (a + b) / 2).all()

    def test_regions_are_the_arc_cells(self):
        """Each region is the cell of the chord arrangement reached from its arc, on a raster."""
        rng = np.random.default_rng(3)
        size = 401
        pixel = 2.0 / (size - 1)
        xs, ys = np.meshgrid(np.linspace(-1, 1, size), np.linspace(-1, 1, size), indexing="ij")
        X = np.stack([xs.ravel(), ys.ravel()], axis=1)
        checked = 0
        for _ in range(30):
            x = rng.dirichlet(np.full(6, 4.0))
            if x.min() < 0.05:
                continue
            config = chords_from_simplex(SimplexPoint.from_array(x))
            hp = config.halfplanes
            band = np.abs(X @ hp.normals.T - hp.offsets).min(axis=1)
            free = ((np.hypot(X[:, 0], X[:, 1]) < 1.0 - 2 * pixel) & (band > 2 * pixel)).reshape(size, size)
            labels, _ = ndimage.label(free, structure=np.ones((3, 3)))
            masks = [region_mask(config, i, X).reshape(size, size) for i in range(1, 7)]
            assert np.sum(masks, axis=0).max() <= 1
            for i, mask in enumerate(masks, start=1):
                s = config.cumulative(i - 1) + x[i - 1] / 2
                p = Point.polar(2 * math.pi * s, 1.0 - 4 * pixel)
                u = int(round((p.x + 1) / pixel))
                v = int(round((p.y + 1) / pixel))
                if not free[u, v] or not mask[u, v]:
                    continue
                component = labels == labels[u, v]
                region = mask & free
                assert np.all(region[component])
                assert component.sum() >= 0.9 * region.sum()
                checked += 1
        assert checked > 50

    def test_central_cell_is_in_no_region(self):
        config = chords_from_simplex(SimplexPoint((0.22, 0.12, 0.18, 0.16, 0.2, 0.12)))
        lines = [chord.line() for chord in config.chords]
        corners = [np.linalg.solve([[u.a, u.b], [v.a, v.b]], [u.c, v.c]) for u, v in ((lines[0], lines[1]), (lines[1], lines[2]), (lines[0], lines[2]))]
        cx, cy = np.mean(corners, axis=0)
        gap = min(abs(l.value(Point(cx, cy))) / math.hypot(l.a, l.b) for l in lines)
        body = square(cx, cy, 0.2 * gap)
        assert all(body_segment_distance(body, chord) > 0 for chord in config.chords)
        assert not any(body_in_region(config, i, body) for i in range(1, 7))

    def test_bodies_off_the_chords_lie_in_a_region_or_the_central_cell(self):
        rng = np.random.default_rng(6)
        size = 401
        pixel = 2.0 / (size - 1)
        xs, ys = np.meshgrid(np.linspace(-1, 1, size), np.linspace(-1, 1, size), indexing="ij")
        X = np.stack([xs.ravel(), ys.ravel()], axis=1)
        radius = np.hypot(X[:, 0], X[:, 1])
        for _ in range(15):
            x = rng.dirichlet(np.full(6, 4.0))
            if x.min() < 0.05:
                continue
            config = chords_from_simplex(SimplexPoint.from_array(x))
            hp = config.halfplanes
            band = np.abs(X @ hp.normals.T - hp.offsets).min(axis=1)
            free = (radius < 1.0 - 2 * pixel) & (band > 2 * pixel)
            labels, _ = ndimage.label(free.reshape(size, size), structure=np.ones((3, 3)))
            arc_cells = set(labels.ravel()[free & (radius >= 1.0 - 4 * pixel)].tolist())
            for center in rng.uniform(-0.7, 0.7, (100, 2)):
                body = square(center[0], center[1], 0.01)
                if any(body_segment_distance(body, chord) <= EPS_GEOM for chord in config.chords):
                    continue
                if any(body_in_region(config, i, body) for i in range(1, 7)):
                    continue
                u, v = (int(round((c + 1) / pixel)) for c in center)
                if labels[u, v] == 0:
                    continue
                assert labels[u, v] not in arc_cells

    @pytest.mark.parametrize("n", [4, 6])
    def test_alternating_regions_disjoint(self, n):
        rng = np.random.default_rng(n)
        for _ in range(300):
            config = chords_from_simplex(random_point(rng, n, 1.0))
            assert alternating_disjoint(config) == "odd"

class TestInducedCover:
    def test_bitmap_at_barycenter(self):
        body = square(0.5, 0.25, 0.05)
        cover = InducedCover(replicate([[body]], 6), 6)
        x = SimplexPoint.barycenter(6)
        bits = cover.bitmap(x)
        assert bits.shape == (6, 6)
        assert bits[:, 0].all()
        assert not bits[:, 1:].any()
        margins = cover.margins(x)
        assert (margins[:, 0] > 0).all()
        oracle = cover.oracle()
        assert oracle.membership(3, 1, x)
        assert not oracle.membership(3, 2, x)
        assert oracle.margin(1, 1, x) == pytest.approx(margins[0, 0])

    def test_distinct_families(self):
        families = [[square(0.5, 0.25, 0.05)], [square(-0.5, 0.25, 0.05)], [square(-0.5, -0.5, 0.05)], [dot(0.0, 0.0)]]
        oracle = induced_cover(families, 4)
        bits = oracle.memberships(SimplexPoint.barycenter(4))
        assert bits[0].tolist() == [True, False, False, False]
        assert bits[1].tolist() == [False, True, False, False]
        assert bits[2].tolist() == [False, False, True, False]
        # On both chords
        assert not bits[3].any()

    def test_arity(self):
        with pytest.raises(BadArity):
            InducedCover([[dot(0, 0)]] * 3, 4)

class TestObjective:
    def test_matches_loop(self):
        rng = np.random.default_rng(4)
        _, families = normalize_to_disk([[square(*rng.uniform(-1, 1, 2), 0.1) for _ in range(4)] for _ in range(3)])
        points = np.array([rng.dirichlet(np.ones(6)) for _ in range(40)] + [np.eye(6)[2]])
        values = objective(families, 6, points)
        assert values.shape == (41, 3)
        for row, x in zip(values, points):
            config = chords_from_simplex(SimplexPoint.from_array(x))
            for j, family in enumerate(families):
                expected = max(min(body_segment_distance(F, chord) for chord in config.chords) for F in family)
                assert row[j] == pytest.approx(expected, abs=1e-12)

    def test_zero_on_a_chord(self):
        _, families = normalize_to_disk([on_line(5, step=0.2, half=0.01, offset=(-0.4, 0.0))])
        obj = Objective(families, 6)
        # The barycenter chords include the horizontal diameter
        value, family = obj.best(SimplexPoint.barycenter(6).array())
        assert value == 0.0
        assert family == 0
        assert obj.evaluations == 1

class TestDescent:
    def test_projection(self):
        assert project_to_simplex(np.array([2.0, 0.0, 0.0])) == pytest.approx([1.0, 0.0, 0.0])
        assert project_to_simplex(np.array([0.5, 0.5, 0.5])) == pytest.approx([1 / 3] * 3)
        rng = np.random.default_rng(5)
        for _ in range(100):
            x = rng.dirichlet(np.ones(5))
            assert project_to_simplex(x) == pytest.approx(x)
            w = project_to_simplex(rng.normal(size=5))
            assert w.min() >= 0.0
            assert w.sum() == pytest.approx(1.0)

    def test_nelder_mead_quadratic(self):
        center = np.array([0.3, -0.2, 0.1])
        y, value, evals = nelder_mead(lambda y: float(np.sum((y - center) ** 2)), np.zeros(3), 0.1, 5000, 1e-14)
        assert value <= 1e-10
        assert y == pytest.approx(center, abs=1e-5)
        assert evals <= 5000

def stabbed_families(seed: int, families: int = 1) -> list[list[ConvexBody]]:
    return stabbed(np.random.default_rng(seed), n=10, families=families)

class TestSolve:
    def test_three_lines_on_stabbed(self):
        families = stabbed_families(1)
        result = solve_three_lines(families)
        assert result.outcome is Outcome.CERTIFICATE
        assert result.hypothesis is not None and result.hypothesis.holds
        assert result.certificate.residual <= 1e-9
        assert len(result.certificate.lines) == 3
        assert verify_certificate(result.instance, result.certificate)
        assert "grid" in result.timings
        assert result.evaluations > 0

    def test_two_lines_on_stabbed(self):
        families = stabbed_families(2, families=2)
        result = solve_two_lines(families)
        assert result.outcome is Outcome.CERTIFICATE
        assert len(result.certificate.lines) == 2
        assert verify_certificate(result.instance, result.certificate)

    def test_planted_chords(self):
        families = planted_chords(np.random.default_rng(7), n=3, families=1)
        result = solve_three_lines(families)
        assert result.outcome is Outcome.CERTIFICATE
        assert verify_certificate(result.instance, result.certificate)

    @pytest.mark.parametrize("make", [
        lambda rng: planted3(rng, n=12),
        lambda rng: tight_random(rng, n=10),
        lambda rng: planted_chords(rng, n=3, families=6),
    ], ids=["planted3", "tightRandom", "plantedChords6"])
    def test_three_lines_on_generated(self, make):
        families = make(np.random.default_rng(0))
        result = solve_three_lines(families)
        assert result.hypothesis.holds
        assert result.outcome is Outcome.CERTIFICATE
        assert verify_certificate(result.instance, result.certificate)

    def test_two_lines_on_four_planted_families(self):
        families = planted_chords(np.random.default_rng(0), n=3, families=4, lines=2)
        result = solve_two_lines(families)
        assert result.hypothesis.holds
        assert result.outcome is Outcome.CERTIFICATE
        assert len(result.certificate.lines) == 2
        assert verify_certificate(result.instance, result.certificate)

    def test_hypothesis_violated(self):
        families = violator(np.random.default_rng(0))
        with pytest.raises(HypothesisViolated) as info:
            solve_three_lines(families)
        assert not info.value.report.holds
        assert info.value.exit_code == 3

    def test_waived_violator_never_certifies_falsely(self, quick_options):
        for seed in range(3):
            families = violator(np.random.default_rng(seed), n=6)
            try:
                result = solve_three_lines(families, replace(quick_options, waive_hypothesis=True, seed=seed))
            except Inconclusive:
                continue
            assert result.hypothesis is None
            if result.outcome is Outcome.CERTIFICATE:
                assert verify_certificate(result.instance, result.certificate)
            else:
                assert result.dual_witness is not None

    def test_arity_and_empty(self):
        with pytest.raises(BadArity):
            solve_two_lines([[dot(0, 0)]] * 5)
        with pytest.raises(EmptyInput):
            solve_three_lines([[dot(0, 0)], []])

    def test_hypothesis_size_cap(self):
        wide = [[dot(-1, 0)], [dot(-2, 0)], [dot(-3, 0)], [dot(k, 0) for k in range(EXHAUSTIVE_CAP)]]
        with pytest.raises(FamilyTooLarge):
            solve_two_lines(wide)
        result = solve_two_lines(wide, SolverOptions(allow_large=True))
        assert result.hypothesis.holds
        assert result.outcome is Outcome.CERTIFICATE
        assert verify_certificate(result.instance, result.certificate)

    def test_deterministic(self):
        families = stabbed_families(3)
        first = solve_three_lines(families, SolverOptions(seed=9))
        second = solve_three_lines(families, SolverOptions(seed=9))
        assert first.certificate == second.certificate

    def test_events(self):
        phases: list[str] = []

        def on_phase(name: str, elapsed_ms: float) -> None:
            phases.append(name)

        assert SolverEvents.on_phase.register(on_phase)
        assert not SolverEvents.on_phase.register(on_phase)
        solve_three_lines(stabbed_families(4))
        assert phases[0] == "grid"
        assert set(phases) <= {"grid", "descent", "dual"}

class TestCertificates:
    @pytest.fixture(scope="class")
    def solved(self):
        return solve_three_lines(stabbed_families(5))

    def test_moved_lines_fail(self, solved):
        far = tuple(LineEq(line.a, line.b, line.c + 5.0) for line in solved.certificate.lines)
        assert not verify_certificate(solved.instance, replace(solved.certificate, lines=far))

    def test_assignment_is_advisory(self, solved):
        cert = solved.certificate
        shuffled = tuple((a + 1) % 3 for a in cert.assignment)
        assert verify_certificate(solved.instance, replace(cert, assignment=shuffled))
        assert not verify_certificate(solved.instance, replace(cert, assignment=cert.assignment[:-1]))

    def test_original_lines_hit_original_bodies(self, solved):
        cert = solved.certificate
        for body in solved.instance.families[0]:
            assert any(body_line_hit(body, line, 1e-7) for line in cert.original_lines)

    def test_round_trip(self, solved):
        cert = solved.certificate
        back = PiercingCertificate.from_dict(cert.to_dict())
        assert back.family == cert.family
        assert back.assignment == cert.assignment
        assert back.witness == cert.witness
        for a, b in zip(back.lines, cert.lines):
            assert a.as_tuple() == pytest.approx(b.as_tuple())
        assert verify_certificate(solved.instance, back)

    def test_dual_witness_round_trip(self):
        witness = ColorfulWitness((2, 1, 4, 3), SimplexPoint.barycenter(4), (0.1, 0.2, 0.3, 0.4), 8)
        refs = tuple(SetRef.of(f, 0) for f in (1, 2, 3, 4))
        dual = DualWitness(witness, refs, refs)
        back = DualWitness.from_dict(dual.to_dict())
        assert back.sets == refs
        assert back.obstruction == refs
        assert back.witness.permutation == (2, 1, 4, 3)

class TestDeepLine:
    def test_collinear_bodies(self):
        family = on_line(12, angle=0.4, step=0.5)
        result = deep_line(family)
        assert result.size == 12
        assert result.guaranteed == 4
        assert result.count == 12
        assert result.certificate is None
        assert all(body_line_hit(b, result.line, EPS_GEOM) for b in family)

    def test_planted_lines(self):
        family = planted3(np.random.default_rng(0), n=9)[0]
        assert check_tight_family(family).holds
        result = deep_line(family)
        assert result.count >= 3

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_tight_random_third(self, seed):
        family = tight_random(np.random.default_rng(seed), n=30)[0]
        result = deep_line(family)
        assert result.guaranteed == 10
        assert result.count >= 10

class TestOptions:
    def test_from_config(self):
        options = SolverOptions.from_config({"starts": 5, "bogus": 1}, seed=None)
        assert options.starts == 5
        assert options.seed == 0
        assert SolverOptions.from_config({"starts": 5}, starts=7).starts == 7
        assert SolverOptions.from_config(None).max_evaluations == 2000

    def test_resolution(self):
        assert SolverOptions().resolution_for(6) == 12
        assert SolverOptions().resolution_for(4) == 20
        assert SolverOptions(grid_resolution=5).resolution_for(6) == 5

    def test_instance_normalization(self):
        instance = Instance.from_families([[square(10, 10, 1), square(20, 10, 1)]])
        for body in instance.normalized[0]:
            assert np.hypot(body.array[:, 0], body.array[:, 1]).max() <= 0.95 + 1e-9
