# Copyright (c) 2025 Benoît Pelletier
# SPDX-License-Identifier: MPL-2.0
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

import json

import pytest

import main
from pierce.instance import InstanceFile, save_instance
from pierce.report import load_report
from pierce.solver import Outcome
from shapes import dot, on_line, triangle_points

def run(capsys, *argv: str) -> tuple[int, str]:
    code = main.cli([str(a) for a in argv])
    return code, capsys.readouterr().out

@pytest.fixture
def line_file(tmp_path):
    path = tmp_path / "line.json"
    save_instance(path, InstanceFile.from_bodies([on_line(6, angle=0.3)]))
    return path

@pytest.fixture
def triangle_file(tmp_path):
    path = tmp_path / "triangle.json"
    save_instance(path, InstanceFile.from_bodies([[b] for b in triangle_points()]))
    return path

def test_modules_discovered():
    modules = main.getEnabledModules({})
    assert {"check", "deep_line", "gen", "kkm_demo", "render", "solve"} <= set(modules)
    assert main.getEnabledModules({"modules": ["check", "nope"]}) == ["check"]

def test_usage_errors(capsys):
    assert main.cli([]) == 2
    assert main.cli(["solve"]) == 2
    assert main.cli(["--help"]) == 0
    capsys.readouterr()

class TestGen:
    def test_stdout_and_file(self, capsys, tmp_path):
        code, out = run(capsys, "gen", "--kind", "stabbed", "--n", "6", "--seed", "4")
        assert code == 0
        data = json.loads(out)
        assert data["metadata"]["seed"] == "4"
        path = tmp_path / "gen.json"
        code, _ = run(capsys, "gen", "--kind", "stabbed", "--n", "6", "--seed", "4", "--out", path)
        assert code == 0
        assert json.loads(path.read_text()) == data

    def test_params(self, capsys):
        code, out = run(capsys, "gen", "--kind", "violator", "--params", "families=3 size=0.2", "--n", "4")
        assert code == 0
        assert json.loads(out)["metadata"]["param.size"] == "0.2"

    def test_bad_params(self, capsys):
        assert run(capsys, "gen", "--kind", "stabbed", "--params", "bogus=1")[0] == 2
        assert run(capsys, "gen", "--kind", "stabbed", "--params", "n")[0] == 2

    def test_seed_from_environment(self, capsys, monkeypatch):
        monkeypatch.setenv("PIERCE_SEED", "11")
        _, out = run(capsys, "gen", "--kind", "stabbed", "--n", "4", "--seed", "3")
        assert json.loads(out)["metadata"]["seed"] == "11"
        monkeypatch.setenv("PIERCE_SEED", "eleven")
        assert run(capsys, "gen", "--kind", "stabbed", "--n", "4")[0] == 2

class TestCheck:
    def test_holds(self, capsys, line_file):
        code, out = run(capsys, "check", "--property", "t3", line_file)
        assert code == 0
        assert json.loads(out) == {"property": "T3", "holds": True, "witness": None}

    def test_fails_with_instance_positions(self, capsys, triangle_file):
        code, out = run(capsys, "check", "--property", "t3", triangle_file)
        assert code == 1
        assert json.loads(out)["witness"] == [[1, 0], [2, 0], [3, 0]]
        code, out = run(capsys, "check", "--property", "colorful-tight", triangle_file)
        assert code == 1
        assert json.loads(out)["property"] == "ColorfulTightTriples"

    def test_parse_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{ not json")
        assert run(capsys, "check", "--property", "t3", bad)[0] == 2
        assert run(capsys, "check", "--property", "t3", tmp_path / "missing.json")[0] == 2

class TestSolve:
    def test_certificate(self, capsys, line_file, tmp_path):
        report_path = tmp_path / "report.json"
        svg_path = tmp_path / "solution.svg"
        code, out = run(capsys, "solve", line_file, "--seed", "1", "--out", report_path, "--svg", svg_path, "--verbose")
        assert code == 0
        data = json.loads(out)
        assert data["outcome"] == "Certificate"
        assert data["seed"] == 1
        assert data["hypothesis"]["holds"]
        assert len(data["certificate"]["lines"]) == 3
        assert load_report(report_path).outcome is Outcome.CERTIFICATE
        assert svg_path.read_text().startswith("<?xml")

    def test_two_lines(self, capsys, line_file):
        code, out = run(capsys, "solve", line_file, "--lines", "2")
        assert code == 0
        assert len(json.loads(out)["certificate"]["lines"]) == 2

    def test_hypothesis_violated(self, capsys, triangle_file):
        code, out = run(capsys, "solve", triangle_file)
        assert code == 3
        data = json.loads(out)
        assert data["outcome"] == "HypothesisViolated"
        assert not data["hypothesis"]["holds"]

    def test_reports_are_deterministic(self, capsys, line_file):
        first = json.loads(run(capsys, "solve", line_file, "--seed", "5")[1])
        second = json.loads(run(capsys, "solve", line_file, "--seed", "5")[1])
        first.pop("timings")
        second.pop("timings")
        assert first == second

class TestDeepLine:
    def test_collinear(self, capsys, line_file):
        code, out = run(capsys, "deep-line", line_file)
        assert code == 0
        data = json.loads(out)
        assert data["size"] == 6
        assert data["guaranteed"] == 2
        assert data["count"] >= 2

class TestKkmDemo:
    def test_default_thresholds(self, capsys):
        code, out = run(capsys, "kkm-demo", "--n", "6")
        assert code == 0
        witness = json.loads(out)["witness"]
        assert witness["verified"]
        assert witness["point"] == [1 / 6] * 6

    def test_condition_violated(self, capsys):
        code, out = run(capsys, "kkm-demo", "--n", "4", "--thresholds", "0.3,0.3,0.3,0.3", "--resolution", "8")
        assert code == 1
        assert json.loads(out)["kkm_condition"] is False

    def test_no_witness(self, capsys):
        code, out = run(capsys, "kkm-demo", "--n", "6", "--thresholds", ",".join(["0.2"] * 6), "--resolution", "16")
        assert code == 4
        assert json.loads(out)["witness"] is None

    def test_csv(self, capsys, tmp_path):
        path = tmp_path / "bits.csv"
        code, _ = run(capsys, "kkm-demo", "--n", "4", "--resolution", "4", "--csv", path)
        assert code == 0
        lines = path.read_text().splitlines()
        assert lines[0].startswith("x1,x2,x3,x4,A1^1")
        assert len(lines) == 1 + 35

    def test_instance_cover(self, capsys, line_file):
        code, out = run(capsys, "kkm-demo", "--n", "6", "--cover", f"instance:{line_file}", "--resolution", "8")
        assert code in (0, 1, 4)
        assert "kkm_condition" in json.loads(out)

class TestRender:
    def test_simplex_chords(self, capsys, line_file, tmp_path):
        out = tmp_path / "chords.svg"
        code, _ = run(capsys, "render", line_file, "--simplex", "0.25,0.25,0.25,0.25", "--out", out)
        assert code == 0
        assert out.read_text().count("stroke-dasharray") == 2

    def test_with_report(self, capsys, line_file, tmp_path):
        report = tmp_path / "report.json"
        run(capsys, "solve", line_file, "--out", report)
        svg = tmp_path / "cert.svg"
        assert run(capsys, "render", line_file, "--cert", report, "--out", svg)[0] == 0
        assert svg.read_text().count("stroke:#222222") == 3

    def test_report_without_certificate(self, capsys, triangle_file, tmp_path):
        report = tmp_path / "report.json"
        run(capsys, "solve", triangle_file, "--out", report)
        assert run(capsys, "render", triangle_file, "--cert", report, "--out", tmp_path / "x.svg")[0] == 2

def test_single_point_family(capsys, tmp_path):
    path = tmp_path / "dot.json"
    save_instance(path, InstanceFile.from_bodies([[dot(2.0, 3.0)]]))
    code, out = run(capsys, "solve", path)
    assert code == 0
    assert len(json.loads(out)["certificate"]["assignment"]) == 1
