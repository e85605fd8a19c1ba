import math
from pathlib import Path

import numpy as np
import pytest

import curveflow as cf

SCENARIOS = Path(__file__).resolve().parents[2] / "scenarios"

BINORMAL = """
[curve]
family = circle
n = 128

[weight]
type = identity

[hamiltonian]
type = length

[run]
dt = 1e-3
steps = 100
output_every = 10
"""


def test_circle_values():
    c = cf.make_curve("circle", 512, r=2.0)
    assert c.shape == (512, 3)
    assert cf.length(c) == pytest.approx(4 * math.pi, rel=1e-4)
    assert cf.h_value("squared_scale", c) == pytest.approx(8 * math.pi, rel=1e-4)
    assert max(abs(t) for t in cf.torsion(c)) < 1e-12
    ez = np.tile([0.0, 0.0, 1.0], (512, 1))
    assert cf.theta(c, ez) == pytest.approx(8 * math.pi, rel=1e-4)


def test_gradient_matches_finite_difference():
    c = cf.make_curve("trefoil", 128)
    rng = np.random.default_rng(1)
    h = rng.standard_normal(c.shape)
    eps = 1e-6
    fd = (cf.h_value("squared_scale", c + eps * h) - cf.h_value("squared_scale", c - eps * h)) / (2 * eps)
    g = cf.h_grad("squared_scale", c)
    # The L2 pairing weights vertex i by half its two adjacent edges.
    edges = np.linalg.norm(np.roll(c, -1, axis=0) - c, axis=1)
    w = 0.5 * (edges + np.roll(edges, 1))
    assert np.sum(w * np.sum(g * h, axis=1)) == pytest.approx(fd, rel=1e-6)


def test_hamiltonian_field_is_horizontal():
    c = cf.make_curve("trefoil", 256)
    x = cf.hgrad("squared_scale", c, weight="length", C=1.0, p=1.0)
    assert x.shape == c.shape
    t = np.roll(c, -1, axis=0) - np.roll(c, 1, axis=0)
    t /= np.linalg.norm(t, axis=1)[:, None]
    assert np.max(np.abs(np.sum(x * t, axis=1))) < 1e-10 * np.max(np.abs(x))


def test_binormal_flow_translates_the_circle():
    r = cf.simulate(BINORMAL)
    assert r["completed"]
    frames = r["frames"]
    assert frames.shape == (11, 128, 3)
    shift = frames[-1] - frames[0]
    assert np.allclose(shift[:, :2], 0.0, atol=1e-9)
    assert np.ptp(shift[:, 2]) < 1e-9
    assert shift[0, 2] == pytest.approx(0.1 / 3, rel=1e-3)
    assert len(r["diagnostics"]["length"]) == 11


def test_invalid_input_raises():
    with pytest.raises(ValueError):
        cf.make_curve("circle", 4)
    with pytest.raises(ValueError):
        cf.simulate(BINORMAL.replace("dt = 1e-3", "dt = 0"))
    with pytest.raises(ValueError):
        cf.hgrad("squared_scale", cf.make_curve("trefoil", 64), weight="length", C=1.0, p=-3.0)


def test_verify_reports():
    reports = cf.verify(BINORMAL)
    assert reports
    assert all(r["ok"] for r in reports)
    assert any(r["must_fail"] for r in reports)


def test_format_round_trip():
    text = cf.format_scenario(BINORMAL)
    assert cf.format_scenario(text) == text


def test_run_scenario_writes_outputs(tmp_path):
    code = cf.run_scenario(str(SCENARIOS / "binormal_circle.scn"), str(tmp_path))
    assert code == 0
    assert (tmp_path / "diagnostics.csv").exists()
    assert (tmp_path / "summary.json").exists()
