import numpy as np
import pytest

import oracles
from chemofront.errors import DomainError
from chemofront.specfun import (
    EXACT,
    PAPER,
    bessel_derivatives,
    bessel_i0,
    bessel_i1,
    bessel_k0,
    bessel_k1,
)

FUNCS = [bessel_i0, bessel_i1, bessel_k0, bessel_k1]


def test_origin_values():
    assert bessel_i0(0.0) == 1.0
    assert bessel_i1(0.0) == 0.0


def test_reference_values():
    assert bessel_i0(1.0) == pytest.approx(1.266066, abs=1e-6)
    assert bessel_k0(1.0) == pytest.approx(0.421024, abs=1e-6)


@pytest.mark.parametrize("x", [1e-3, 0.01, 0.1, 0.5, 0.8, 1.0, 1.5, 2.0])
def test_against_series_oracle(x):
    assert bessel_i0(x) == pytest.approx(oracles.series_i0(x), rel=1e-13)
    assert bessel_i1(x) == pytest.approx(oracles.series_i1(x), rel=1e-13)
    assert bessel_k0(x) == pytest.approx(oracles.series_k0(x), rel=1e-12)
    assert bessel_k1(x) == pytest.approx(oracles.series_k1(x), rel=1e-12)


def test_small_argument_approximants():
    assert bessel_i1(0.06, PAPER) == 0.03
    assert bessel_i0(0.2, PAPER) == pytest.approx(1.01)
    assert bessel_k1(0.5, PAPER) == 2.0


def test_wronskian_half():
    x = 0.5
    assert bessel_k0(x) * bessel_i1(x) + bessel_k1(x) * bessel_i0(x) == pytest.approx(1 / x, rel=1e-14)


def test_k1_small_argument():
    assert bessel_k1(1e-3) == pytest.approx(1000, rel=1e-3)


def test_wronskian_log_grid():
    x = np.logspace(-3, np.log10(2), 100)
    resid = np.abs(bessel_k0(x) * bessel_i1(x) + bessel_k1(x) * bessel_i0(x) - 1 / x)
    assert resid.max() < 1e-10


@pytest.mark.parametrize("f, upper", [(bessel_i0, 0.3), (bessel_i1, 0.3),
                                      (bessel_k0, 0.1), (bessel_k1, 0.1)])
def test_small_argument_mode_within_two_percent(f, upper):
    x = np.linspace(1e-3, upper, 200)
    rel = np.abs(f(x, PAPER) / f(x) - 1)
    assert rel.max() < 0.02


def test_small_argument_k_deviation_at_point_three():
    # The K approximants drop the x ln x corrections; at x = 0.3 they are
    # off by several percent.
    assert bessel_k0(0.3, PAPER) / oracles.series_k0(0.3) - 1 == pytest.approx(-0.0383, abs=5e-4)
    assert bessel_k1(0.3, PAPER) / oracles.series_k1(0.3) - 1 == pytest.approx(0.0906, abs=5e-4)


def test_derivatives_against_finite_differences():
    x = np.linspace(0.1, 2.0, 40)
    h = 1e-5
    di0, dk0 = bessel_derivatives(x)
    assert np.max(np.abs(di0 - (bessel_i0(x + h) - bessel_i0(x - h)) / (2 * h))) < 1e-6
    assert np.max(np.abs(dk0 - (bessel_k0(x + h) - bessel_k0(x - h)) / (2 * h))) < 1e-6
    # I1' = I0 - I1/x and K1' = -K0 - K1/x
    assert np.max(np.abs(bessel_i0(x) - bessel_i1(x) / x
                         - (bessel_i1(x + h) - bessel_i1(x - h)) / (2 * h))) < 1e-6
    dk1 = -bessel_k0(x) - bessel_k1(x) / x
    assert np.max(np.abs(dk1 / ((bessel_k1(x + h) - bessel_k1(x - h)) / (2 * h)) - 1)) < 1e-6


def test_derivative_at_point_seven():
    di0, _ = bessel_derivatives(0.7)
    assert di0 == pytest.approx(oracles.central_difference(bessel_i0, 0.7, 1e-5), abs=1e-6)


def test_derivative_signs():
    di0, dk0 = bessel_derivatives(np.linspace(1e-6, 2, 500))
    assert di0[0] == pytest.approx(0, abs=1e-6)
    assert np.all(dk0 < 0)


def test_monotonicity():
    x = np.linspace(2e-3, 2, 1000)
    assert np.all(np.diff(bessel_i0(x)) > 0)
    assert np.all(np.diff(bessel_i1(x)) > 0)
    assert np.all(np.diff(bessel_k0(x)) < 0)
    assert np.all(np.diff(bessel_k1(x)) < 0)


@pytest.mark.parametrize("f", [bessel_k0, bessel_k1, bessel_derivatives])
def test_k_domain(f):
    with pytest.raises(DomainError):
        f(0.0)


def test_negative_argument():
    with pytest.raises(DomainError):
        bessel_i0(-0.1)


def test_array_and_scalar_agree():
    x = np.array([0.2, 0.9])
    np.testing.assert_array_equal(bessel_k1(x), [bessel_k1(0.2), bessel_k1(0.9)])
