import math

import numpy as np
import pytest

from coupled_rwm import (
    DomainError,
    chi2_1_ccdf,
    meeting_prob_lower_bound,
    meeting_prob_upper_chernoff,
    meeting_prob_upper_markov,
    meeting_probability,
    normal_cdf,
    normal_pdf,
    normal_quantile,
)

# reference values computed with mpmath at 30 digits
INV_SQRT_2PI = 0.39894228040143268
HALF_INV_SQRT_2PI = 0.19947114020071634
PHI_1 = 0.84134474606854295
TWO_TAIL_1 = 0.3173105078629141  # 2 (1 - Phi(1))
TWO_TAIL_2 = 0.045500263896358414  # 2 (1 - Phi(2))
CHI2_CCDF_3841459 = 0.049999994653195765
LOWER_AT_1 = 0.60105771959856732  # 1 - sqrt(2/pi)/2
CHERNOFF_4_1_Q = 0.5202600950228889  # sqrt(2) exp(-1)


def test_normal_pdf_values():
    assert normal_pdf(0.0) == pytest.approx(INV_SQRT_2PI, rel=1e-14)
    assert normal_pdf(1.0, mean=1.0, sd=2.0) == pytest.approx(
        HALF_INV_SQRT_2PI, rel=1e-14
    )
    t = 0.83
    assert normal_pdf(2.0 + t, mean=2.0, sd=1.3) == normal_pdf(2.0 - t, mean=2.0, sd=1.3)
    with pytest.raises(DomainError):
        normal_pdf(0.0, sd=0.0)


def test_normal_cdf_values():
    assert normal_cdf(3.0, mean=3.0, sd=0.4) == pytest.approx(0.5, abs=1e-15)
    assert normal_cdf(1.0) == pytest.approx(PHI_1, rel=1e-14)
    assert normal_cdf(2.5, mean=1.5, sd=1.0) == pytest.approx(PHI_1, rel=1e-14)
    grid = np.linspace(-8, 8, 1001)
    vals = normal_cdf(grid)
    assert np.all(np.diff(vals) >= 0.0)


def test_quantile_roundtrip():
    assert normal_quantile(0.5, mean=-2.0, sd=3.0) == pytest.approx(-2.0, abs=1e-12)
    assert normal_quantile(0.975) == pytest.approx(1.9599639845400542, abs=1e-9)
    us = np.concatenate(
        [[1e-10, 1 - 1e-10], np.linspace(1e-6, 1 - 1e-6, 201)]
    )
    back = normal_cdf(normal_quantile(us))
    assert np.max(np.abs(back - us)) <= 1e-12
    for bad in (0.0, 1.0, -0.3, 1.7):
        with pytest.raises(DomainError):
            normal_quantile(bad)


def test_meeting_probability_values():
    assert meeting_probability(0.0, 1.0) == 1.0
    assert meeting_probability(2.0, 1.0) == pytest.approx(TWO_TAIL_1, rel=1e-13)
    assert meeting_probability(4.0, 1.0) == pytest.approx(TWO_TAIL_2, rel=1e-13)
    assert meeting_probability(20.0, 1.0) < 1e-20
    rs = np.linspace(0.0, 12.0, 200)
    vals = meeting_probability(rs, 1.3)
    assert np.all(np.diff(vals) < 0.0)
    with pytest.raises(DomainError):
        meeting_probability(-0.1, 1.0)
    with pytest.raises(DomainError):
        meeting_probability(1.0, 0.0)


def test_meeting_probability_scale_invariance():
    rng = np.random.default_rng(5)
    for _ in range(100):
        r = float(10 ** rng.uniform(-2, 1))
        sd = float(10 ** rng.uniform(-1, 1))
        k = float(10 ** rng.uniform(-1, 1))
        a = meeting_probability(r, sd)
        assert abs(meeting_probability(k * r, k * sd) - a) <= 1e-12
        assert (
            abs(meeting_probability(r / math.sqrt(k), sd / math.sqrt(k)) - a) <= 1e-12
        )


def test_bounds_values():
    assert meeting_prob_lower_bound(0.0, 1.0) == 1.0
    assert meeting_prob_lower_bound(1.0, 1.0) == pytest.approx(LOWER_AT_1, rel=1e-14)
    assert meeting_prob_upper_markov(0.0, 1.0) == math.inf
    assert meeting_prob_upper_markov(4.0, 1.0) == pytest.approx(0.25, rel=1e-14)
    assert meeting_probability(4.0, 1.0) <= meeting_prob_upper_markov(4.0, 1.0)
    assert meeting_prob_upper_chernoff(4.0, 1.0, 0.25) == pytest.approx(
        CHERNOFF_4_1_Q, rel=1e-13
    )
    for s in (0.0, 0.5, -0.1, 0.9):
        with pytest.raises(DomainError):
            meeting_prob_upper_chernoff(1.0, 1.0, s)


def test_bounds_sandwich_smoke():
    for sd in (0.1, 1.0, 3.0):
        for r in np.geomspace(0.01, 10.0, 40):
            exact = meeting_probability(r, sd)
            assert meeting_prob_lower_bound(r, sd) - 1e-12 <= exact
            assert exact <= meeting_prob_upper_markov(r, sd) + 1e-12
            assert exact <= meeting_prob_upper_chernoff(r, sd, 0.25) + 1e-12


def test_chi2_ccdf_values():
    assert chi2_1_ccdf(0.0) == 1.0
    assert chi2_1_ccdf(1.0) == pytest.approx(TWO_TAIL_1, rel=1e-13)
    assert chi2_1_ccdf(3.841459) == pytest.approx(CHI2_CCDF_3841459, rel=1e-12)
    with pytest.raises(DomainError):
        chi2_1_ccdf(-1e-9)
    # identity with the meeting probability: a = (r / 2 sd)^2
    for r, sd in ((0.5, 1.0), (2.0, 0.7), (6.0, 2.0)):
        assert meeting_probability(r, sd) == pytest.approx(
            chi2_1_ccdf((r / (2 * sd)) ** 2), rel=1e-13
        )
