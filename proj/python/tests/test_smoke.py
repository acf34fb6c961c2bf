import math
import os
from pathlib import Path

import pytest

import curvmeasure as cm

DATA = Path(os.environ.get("CURVMEASURE_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))


def surface(name):
    return cm.Surface.from_file(DATA / "surfaces" / f"{name}.json")


@pytest.mark.parametrize("name", ["double_square", "double_disc", "two_hemispheres", "disc_hemisphere"])
def test_gauss_bonnet(name):
    s = surface(name)
    report = s.gauss_bonnet()
    assert report["pass"]
    assert s.measure() == pytest.approx(2 * math.pi * s.euler_characteristic, abs=1e-9)


def test_parts_of_double_disc():
    parts = surface("double_disc").parts()
    assert sum(p["value"] for p in parts["seams"].values()) == pytest.approx(4 * math.pi, abs=1e-9)
    assert parts["atoms"] == {}


def test_region_additivity():
    s = surface("double_square")
    ids = list(s.parts()["patches"])
    halves = sum(s.measure(f"patch:{i}") for i in ids)
    rest = s.measure("all") - halves
    assert rest == pytest.approx(4 * math.pi, abs=1e-9)


def test_quadrilateral_on_flat_strip():
    r = surface("flat_strip").quadrilateral("mid", 0.25, 0.75, [0.1, 0.2, 0.1, 0.3])
    assert r["pass"]


def test_spectrum_counts():
    spec = cm.spectrum("square", "double", 50.0)
    assert len(spec) == 11
    assert spec == sorted(spec)


def test_fd_matches_enumeration():
    fd = cm.fd_eigenvalues("square", "dirichlet", 32, 4)
    exact = cm.spectrum("square", "dirichlet", 100.0)[:4]
    for a, b in zip(fd, exact):
        assert a == pytest.approx(b, rel=0.02)


def test_conjecture_report():
    r = cm.conjecture("square", 1e4, constant="corner", bootstrap=50)
    assert abs(r["c0"]) < 0.05
    lo, hi = r["p_interval"]
    assert lo <= r["p"] <= hi


def test_weyl_rows():
    rows = cm.weyl("square", "double", [1e3, 1e4])
    assert [r["t"] for r in rows] == [1e3, 1e4]


def test_bessel_zero():
    assert cm.bessel_zeros(0, 3.0)[0] == pytest.approx(2.404825557695773, abs=1e-12)


def test_validation_error():
    with pytest.raises(cm.ValidationError):
        cm.Surface.from_file(DATA / "malformed" / "phi_squared.json")
    with pytest.raises(cm.InputError):
        cm.Surface.from_json("{")
