import json

import numpy as np
import pytest
from engine import schema
from engine.bounds import volume_verdict
from engine.exceptions import WarplabError
from engine.geometry import RadialField, Topology, round_sphere
from engine.profile import model_profile, viscosity_residual


def test_metric_round_trip(tmp_path, sphere):
    path = schema.write_metric(tmp_path / "metric.csv", sphere)
    restored = schema.read_metric(path)
    assert restored.n == sphere.n
    assert restored.topology == Topology.TWO_CAPS
    assert np.array_equal(restored.grid, sphere.grid)
    assert np.array_equal(restored.warp, sphere.warp)
    assert json.loads((tmp_path / "metric.json").read_text())["topology"] == "two_caps"


def test_metric_files_are_deterministic(tmp_path):
    first = schema.write_metric(tmp_path / "a.csv", round_sphere(4, 257))
    second = schema.write_metric(tmp_path / "b.csv", round_sphere(4, 257))
    assert first.read_bytes() == second.read_bytes()
    assert first.with_suffix(".json").read_bytes() == second.with_suffix(".json").read_bytes()


def test_header_is_checked(tmp_path, sphere, unit_weight):
    path = schema.write_field(tmp_path / "u.csv", unit_weight)
    assert path.read_text().splitlines()[0] == "r,u"
    with pytest.raises(WarplabError):
        schema.read_csv(path, schema.METRIC)


def test_field_round_trip(tmp_path, sphere):
    u = RadialField(sphere.grid, 2 + np.cos(sphere.grid))
    restored = schema.read_field(schema.write_field(tmp_path / "u.csv", u))
    assert np.array_equal(restored.values, u.values)


def test_profile_round_trip(tmp_path):
    curve = model_profile(4.0, 2.0, 3).curve(257)
    restored = schema.read_profile(schema.write_profile(tmp_path / "profile.csv", curve))
    assert np.array_equal(restored.v, curve.v)
    assert np.array_equal(restored.I, curve.I)
    assert (restored.n, restored.lam, restored.V_total) == (3, 2.0, curve.V_total)
    assert restored.flags == ("model",)


def test_residual_and_verdict_tables(tmp_path, sphere):
    curve = model_profile(4.0, 1.0, 3).curve(257)
    path = schema.write_residual(tmp_path / "residual.csv", viscosity_residual(curve))
    v, residual = schema.read_csv(path, schema.RESIDUAL)
    assert len(v) == len(residual) > 0

    path = schema.write_verdicts(tmp_path / "verdicts.csv", [volume_verdict(sphere, 1.0)])
    kind, lhs, rhs, slack, rigid = schema.read_csv(path, schema.VERDICT)
    assert kind == ["volume"]
    assert rigid == [True]
    assert lhs[0] == pytest.approx(rhs[0])
