import numpy as np
import pytest

from coupled_rwm import (
    DegeneratePairError,
    DimensionMismatchError,
    pair_geometry,
    project,
    reflect,
)

TOL = 1e-12


def test_pair_geometry_axis_aligned():
    g = pair_geometry(np.array([0.0, 0.0]), np.array([2.0, 0.0]))
    assert g.r == 2.0
    assert np.allclose(g.e, [1.0, 0.0])
    assert np.allclose(g.m, [1.0, 0.0])
    assert g.m1 == 1.0
    assert np.allclose(g.m_perp, [0.0, 0.0])

    g = pair_geometry(np.array([1.0, 1.0]), np.array([1.0, 3.0]))
    assert g.r == 2.0
    assert np.allclose(g.e, [0.0, 1.0])
    assert np.allclose(g.m, [1.0, 2.0])
    assert g.m1 == 2.0
    assert np.allclose(g.m_perp, [1.0, 0.0])


def test_pair_geometry_345_triangle():
    g = pair_geometry(np.array([0.0, 0.0]), np.array([3.0, 4.0]))
    assert g.r == pytest.approx(5.0, abs=TOL)
    assert np.allclose(g.e, [0.6, 0.8], atol=TOL)
    assert np.allclose(g.m, [1.5, 2.0], atol=TOL)


def test_pair_geometry_invariants_fuzz():
    rng = np.random.default_rng(42)
    for i in range(300):
        d = 1 + i % 8
        x = rng.standard_normal(d) * 3
        y = rng.standard_normal(d) * 3
        if np.array_equal(x, y):
            continue
        g = pair_geometry(x, y)
        assert abs(np.dot(g.e, g.e) - 1.0) <= TOL
        assert np.max(np.abs(g.m - 0.5 * g.r * g.e - x)) <= TOL * max(1, g.r)
        assert np.max(np.abs(g.m + 0.5 * g.r * g.e - y)) <= TOL * max(1, g.r)
        assert abs(np.dot(g.e, g.m_perp)) <= TOL * max(1.0, float(np.linalg.norm(g.m)))
        # swapping the points negates e and fixes r and m
        h = pair_geometry(y, x)
        assert h.r == g.r
        assert np.array_equal(h.m, g.m)
        assert np.max(np.abs(h.e + g.e)) <= TOL


def test_pair_geometry_errors():
    with pytest.raises(DegeneratePairError):
        pair_geometry(np.array([1.0, 2.0]), np.array([1.0, 2.0]))
    with pytest.raises(DimensionMismatchError):
        pair_geometry(np.array([1.0, 2.0]), np.array([1.0, 2.0, 3.0]))


def test_project_examples():
    z1, zp = project(np.array([3.0, 4.0]), np.array([1.0, 0.0]))
    assert z1 == 3.0
    assert np.allclose(zp, [0.0, 4.0])

    z1, zp = project(np.zeros(2), np.array([0.0, 1.0]))
    assert z1 == 0.0
    assert np.allclose(zp, 0.0)

    e = np.array([1.0, 1.0]) / np.sqrt(2.0)
    z1, zp = project(np.array([1.0, 1.0]), e)
    assert z1 == pytest.approx(np.sqrt(2.0), abs=TOL)
    assert np.max(np.abs(zp)) <= TOL


def test_project_roundtrip_fuzz():
    rng = np.random.default_rng(7)
    for i in range(300):
        d = 1 + i % 8
        z = rng.standard_normal(d) * 5
        e = rng.standard_normal(d)
        e /= np.linalg.norm(e)
        z1, zp = project(z, e)
        assert abs(np.dot(e, zp)) <= TOL * max(1.0, float(np.linalg.norm(z)))
        assert np.max(np.abs(z1 * e + zp - z)) <= TOL * max(1.0, float(np.linalg.norm(z)))
    with pytest.raises(DimensionMismatchError):
        project(np.zeros(3), np.array([1.0, 0.0]))


def test_reflect_examples():
    e = np.array([1.0, 0.0])
    assert np.allclose(reflect(np.array([1.0, 0.0]), e), [-1.0, 0.0])
    assert np.allclose(reflect(np.array([0.0, 1.0]), e), [0.0, 1.0])
    assert np.allclose(reflect(np.array([1.0, 1.0]), e), [-1.0, 1.0])
    with pytest.raises(DimensionMismatchError):
        reflect(np.zeros(3), e)


def test_reflect_involution_and_norm_fuzz():
    rng = np.random.default_rng(11)
    for i in range(300):
        d = 1 + i % 8
        z = rng.standard_normal(d) * 4
        e = rng.standard_normal(d)
        e /= np.linalg.norm(e)
        back = reflect(reflect(z, e), e)
        assert np.max(np.abs(back - z)) <= TOL * max(1.0, float(np.linalg.norm(z)))
        assert abs(np.linalg.norm(reflect(z, e)) - np.linalg.norm(z)) <= TOL * max(
            1.0, float(np.linalg.norm(z))
        )
