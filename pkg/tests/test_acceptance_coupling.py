import math

import numpy as np
import pytest

from coupled_rwm import (
    ACCEPTANCE_KINDS,
    DimensionMismatchError,
    DomainError,
    couple_accept,
    mh_ratio,
    ot_rho_choice,
    rho_bounds,
    sample_uniform_pair,
)

EXP_NEG_HALF = 0.60653065971263342


def test_mh_ratio_values():
    assert mh_ratio(-1.3, -1.3) == 1.0
    # standard normal target: uphill move from (1, 0) to the origin
    assert mh_ratio(-0.5, 0.0) == 1.0
    # downhill from the origin to (1, 0)
    assert mh_ratio(0.0, -0.5) == pytest.approx(EXP_NEG_HALF, rel=1e-14)
    assert mh_ratio(-0.2, -math.inf) == 0.0
    with pytest.raises(DomainError):
        mh_ratio(-math.inf, -0.2)


def test_rho_bounds():
    assert rho_bounds(0.7, 0.5) == (pytest.approx(0.2), 0.5)
    assert rho_bounds(1.0, 0.3) == (0.3, 0.3)
    assert rho_bounds(0.3, 0.4) == (0.0, 0.3)
    for bad in (-0.1, 1.0001):
        with pytest.raises(DomainError):
            rho_bounds(bad, 0.5)
        with pytest.raises(DomainError):
            rho_bounds(0.5, bad)


def test_uniform_pair_margins_and_structure():
    n = 10**5
    rng = np.random.default_rng(90)
    for kind in ("common", "independent", "antithetic"):
        u, v = sample_uniform_pair(kind, rng, size=n)
        for w in (u, v):
            assert np.all((0.0 <= w) & (w <= 1.0))
            # uniform margin: compare the empirical CDF on a grid
            for q in (0.1, 0.5, 0.9):
                assert np.mean(w <= q) == pytest.approx(q, abs=4 / math.sqrt(n))
        if kind == "common":
            assert np.array_equal(u, v)
        if kind == "antithetic":
            assert np.array_equal(v, 1.0 - u)


def test_rho_target_cells_match_table():
    a_x, a_y, rho = 0.7, 0.5, 0.35
    expected = (rho, a_x - rho, a_y - rho, 1 - a_x - a_y + rho)
    n = 10**5
    rng = np.random.default_rng(91)
    u, v = sample_uniform_pair(None, rng, a_x=a_x, a_y=a_y, rho_target=rho, size=n)
    bx, by = u <= a_x, v <= a_y
    observed = (
        np.mean(bx & by),
        np.mean(bx & ~by),
        np.mean(~bx & by),
        np.mean(~bx & ~by),
    )
    for obs, exp in zip(observed, expected):
        assert obs == pytest.approx(exp, abs=3 * math.sqrt(exp * (1 - exp) / n))


def test_rho_target_validation():
    rng = np.random.default_rng(92)
    with pytest.raises(DomainError):
        sample_uniform_pair(None, rng, a_x=0.7, a_y=0.5, rho_target=0.65)
    with pytest.raises(DomainError):
        sample_uniform_pair(None, rng, a_x=0.7, a_y=0.5, rho_target=0.1)
    with pytest.raises(DomainError):
        sample_uniform_pair(None, rng, rho_target=0.1)
    with pytest.raises(DomainError):
        sample_uniform_pair("optimal-transport", rng)
    # degenerate margins collapse to the forced decision without errors
    u, v = sample_uniform_pair(None, rng, a_x=1.0, a_y=0.4, rho_target=0.4, size=1000)
    assert np.all(u <= 1.0)
    assert np.mean(v <= 0.4) == pytest.approx(0.4, abs=0.05)


def test_common_and_antithetic_joint_rates():
    n = 10**5
    rng = np.random.default_rng(93)
    a_x, a_y = 0.7, 0.5
    u, v = sample_uniform_pair("common", rng, size=n)
    both = np.mean((u <= a_x) & (v <= a_y))
    assert both == pytest.approx(min(a_x, a_y), abs=3 * math.sqrt(0.25 / n))
    u, v = sample_uniform_pair("antithetic", rng, size=n)
    both = np.mean((u <= a_x) & (v <= a_y))
    assert both == pytest.approx(a_x + a_y - 1, abs=3 * math.sqrt(0.25 / n))


def test_scalar_vector_stream_consistency():
    for kind in ("common", "independent", "antithetic"):
        u1, v1 = sample_uniform_pair(kind, np.random.default_rng(5))
        u2, v2 = sample_uniform_pair(kind, np.random.default_rng(5), size=1)
        assert u1 == u2[0] and v1 == v2[0]
    u1, v1 = sample_uniform_pair(None, np.random.default_rng(5), a_x=0.6, a_y=0.3, rho_target=0.25)
    u2, v2 = sample_uniform_pair(
        None, np.random.default_rng(5), a_x=0.6, a_y=0.3, rho_target=0.25, size=1
    )
    assert u1 == u2[0] and v1 == v2[0]


def test_ot_rho_choice_examples():
    # hand-evaluated squared distances: c = 0.01 - 0.25 - 0.36 + 1 = 0.40 > 0
    rho, upper = ot_rho_choice(
        np.array([0.0]), np.array([1.0]), np.array([0.5]), np.array([0.6]), 0.7, 0.5
    )
    assert not upper
    assert rho == pytest.approx(0.2)

    # zero increments give an exact tie, broken toward the upper bound
    x = np.array([0.3, -0.4])
    y = np.array([1.0, 0.2])
    rho, upper = ot_rho_choice(x, y, x, y, 0.6, 0.9)
    assert upper
    assert rho == pytest.approx(0.6)

    # proposed meet with symmetric cross distances: sign decided by
    # d(x,y) - d(x,y') - d(x',y) + 0; here both cross terms equal d(x,y)/4
    xp = 0.5 * (x + y)
    c = -np.sum((xp - y) ** 2) - np.sum((x - xp) ** 2) + np.sum((x - y) ** 2)
    assert c > 0.0
    rho, upper = ot_rho_choice(x, y, xp, xp, 0.5, 0.5)
    assert not upper

    with pytest.raises(DimensionMismatchError):
        ot_rho_choice(np.zeros(2), np.zeros(3), np.zeros(2), np.zeros(2), 0.5, 0.5)


def test_ot_rho_always_feasible():
    rng = np.random.default_rng(94)
    for _ in range(2000):
        d = 1 + int(rng.integers(0, 4))
        args = [rng.standard_normal(d) for _ in range(4)]
        a_x, a_y = rng.random(), rng.random()
        rho, _ = ot_rho_choice(*args, a_x, a_y)
        lo, hi = rho_bounds(a_x, a_y)
        assert lo <= rho <= hi


def test_couple_accept_decisions():
    x = np.array([0.0, 0.0])
    y = np.array([1.0, 0.4])
    xp = np.array([0.3, -0.2])
    yp = np.array([0.8, 0.5])
    for kind in ACCEPTANCE_KINDS:
        rng = np.random.default_rng(95)
        dec = couple_accept(kind, x, y, xp, yp, 1.0, 1.0, rng)
        assert dec.accept_x and dec.accept_y
        dec = couple_accept(kind, x, y, xp, yp, 0.0, 0.0, rng)
        assert not dec.accept_x and not dec.accept_y
        dec = couple_accept(kind, x, y, xp, yp, 0.42, 0.9, rng)
        assert dec.accept_x == (dec.u <= 0.42)
        assert dec.accept_y == (dec.v <= 0.9)
    with pytest.raises(DomainError):
        couple_accept("bogus", x, y, xp, yp, 0.5, 0.5, np.random.default_rng(0))
    with pytest.raises(DomainError):
        couple_accept("common", x, y, xp, yp, 1.5, 0.5, np.random.default_rng(0))


def test_couple_accept_common_joint_rate():
    x = np.array([0.0])
    y = np.array([1.0])
    xp = np.array([0.4])
    yp = np.array([0.7])
    n = 10**5
    rng = np.random.default_rng(96)
    both = 0
    for _ in range(n):
        dec = couple_accept("common", x, y, xp, yp, 0.7, 0.5, rng)
        both += dec.accept_x and dec.accept_y
    assert both / n == pytest.approx(0.5, abs=3 * math.sqrt(0.25 / n))
