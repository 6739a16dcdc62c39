import math

import numpy as np
import pytest

import glvortex

SMALL = glvortex.GridConfig(n_points=1000)


def test_version_is_string():
    assert isinstance(glvortex.__version__, str)


def test_profile_critical_coupling():
    p = glvortex.solve_profile(1, 1.0, SMALL)
    r, f, a = p.r, p.f, p.a
    assert r.shape == f.shape == a.shape
    inner = (r > 0.1) & (r < 15.0)
    b = (1.0 - a[inner]) / r[inner]
    assert np.max(np.abs(p.f_prime[inner] - b * f[inner])) < 1e-3
    assert abs(p.energy() - math.pi) < 1e-2 * math.pi


def test_profile_is_monotone():
    p = glvortex.solve_profile(2, 0.5, SMALL)
    assert np.all(np.diff(p.f) > 0)
    assert np.all(np.diff(p.a) > 0)


def test_classify_degree_two():
    assert glvortex.classify(2, 2.0, SMALL)["classification"] == "unstable"
    assert glvortex.classify(2, 0.5, SMALL)["classification"] == "stable"


def test_sweep_order_and_fields():
    cells = glvortex.sweep([2, 1], [2.0, 0.5], SMALL, jobs=2)
    assert [(c["n"], c["lambda"]) for c in cells] == [(1, 0.5), (1, 2.0), (2, 0.5), (2, 2.0)]
    assert all("gap" in c and "per_block" in c for c in cells)


def test_block_spectrum_deflation():
    p = glvortex.solve_profile(1, 0.5, SMALL)
    raw = glvortex.block_spectrum(p, 1, k=2)
    defl = glvortex.block_spectrum(p, 1, k=2, deflate=True)
    assert abs(raw[0]) < 1e-3
    assert defl[0] > 1e-2


def test_bad_arguments():
    with pytest.raises(ValueError):
        glvortex.solve_profile(0, 1.0)
    with pytest.raises(ValueError):
        glvortex.solve_profile(1, -1.0)
