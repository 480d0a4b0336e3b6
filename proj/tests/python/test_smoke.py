import json
import math
import os
import pathlib

import pytest

import pscgeom

FIXTURES = pathlib.Path(os.environ.get("PSCGEOM_FIXTURES", pathlib.Path(__file__).parents[2] / "fixtures"))


def test_version():
    assert pscgeom.__version__


def test_cone_is_flat():
    r = pscgeom.cone_report(pscgeom.unit_sphere(3))
    assert r.verdict == "Flat"
    assert max(abs(r.s_min), abs(r.s_max)) <= 1e-8


def test_transition_profile():
    a = pscgeom.transition(0.1, 0.1)
    assert a(0.05) == pytest.approx(0.55)
    assert a(0.95) == 1.0
    assert a.domain == (0.0, 1.0)
    assert pscgeom.Profile.from_json(a.to_json())(0.4) == a(0.4)


def test_torpedo_and_hopf():
    assert pscgeom.torpedo_report(3, 1.0, 1.0).s_min == pytest.approx(2.0)
    hopf = pscgeom.oneill_scalar([8.0] * 4, pscgeom.make_link(1, 0.0), [2.0] * 4, 1.0)
    assert hopf.s_min == 6.0
    assert pscgeom.tau_bar([2.0, 3.0], [1.0, 0.5]) == 1.0
    assert pscgeom.fd_scalar("berger", [1.0, 0.3, 0.2], tau=1.0) == pytest.approx(6.0, abs=1e-4)


def test_error_kind():
    with pytest.raises(pscgeom.PscgeomError) as info:
        pscgeom.torpedo_report(2, 1.0, 1.0)
    assert info.value.kind == "DimensionError"
    assert isinstance(info.value, ValueError)


def test_run_config():
    passed, report = pscgeom.run_config({"experiment": "cone", "params": {"link": "S3"}})
    assert passed
    assert report["result"]["curvature"]["verdict"] == "Flat"


def test_validate_engine():
    ids = pscgeom.fixture_ids()
    assert "doubly_m2" in ids
    assert pscgeom.validate_engine("doubly_m2")["passed"]
    assert not pscgeom.validate_engine("doubly_m2", corrupt=True)["passed"]


@pytest.mark.parametrize("path", sorted(FIXTURES.glob("*.json")), ids=lambda p: p.stem)
def test_fixture(path):
    passed, report = pscgeom.run_config(json.loads(path.read_text()), FIXTURES)
    assert passed, report
    assert not math.isnan(float(report["passed"]))
