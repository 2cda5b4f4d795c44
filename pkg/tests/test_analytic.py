import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from chemofront import analytic
from chemofront.analytic import (
    R_DISH,
    azimuthal_mode_rate,
    chemical_constants,
    delta_c_at,
    equilibrium_polynomial,
    equilibrium_radius,
    integrate_front_radius,
    nagumo_speed,
    plateau_radius,
    radial_stability,
    shifted_equilibria,
    stationary_c,
    stationary_c_derivatives,
    stationary_v,
    steady_state,
)
from chemofront.errors import ComplexRootsError, DomainError, NoEquilibriumError, NoPlateauError
from chemofront.params import TABLE1
from chemofront.specfun import EXACT, PAPER, bessel_i0

SQRT2 = math.sqrt(2)


@pytest.fixture(scope="module")
def state():
    return steady_state(TABLE1)


@pytest.fixture(scope="module")
def eq(state):
    return equilibrium_radius(TABLE1, state)


def test_plateau_radius_values():
    assert plateau_radius(3, 1000, 0.5) == pytest.approx(0.0423, abs=1e-4)
    assert plateau_radius(0.5 * math.e, 400, 0.5) == pytest.approx(1 / 20)
    assert plateau_radius(6, 2000, 0.5) == pytest.approx(math.sqrt(math.log(12) / 2000))
    assert plateau_radius(6, 2000, 0.5) == pytest.approx(0.03525, abs=1e-5)


def test_plateau_radius_bounds():
    with pytest.raises(NoPlateauError) as lower:
        plateau_radius(0.5, 1000, 0.5)
    assert lower.value.bound == "lower"
    with pytest.raises(NoPlateauError) as upper:
        plateau_radius(100, 1.0, 0.5)
    assert upper.value.bound == "upper"


def test_stationary_v():
    assert stationary_v(0.0, 0.0423) == 1
    assert stationary_v(0.1, 0.0423) == 0
    assert stationary_v(0.0423, 0.0423) == 1
    with pytest.raises(DomainError):
        stationary_v(0.6, 0.0423)


def test_c2_against_oracle():
    s = chemical_constants(0.0423, 10.0)
    expected = math.sqrt(2) * 10 * 0.0423 * oracles.series_i1(math.sqrt(2) * 0.0423)
    assert s.C2 == pytest.approx(expected, rel=1e-12)
    assert s.C2 == pytest.approx(0.0179, abs=5e-5)


@given(st.floats(0.005, 0.5))
def test_constant_ratio(R1):
    s = chemical_constants(R1, 10.0)
    x = math.sqrt(2 / math.pi)
    assert s.C1 / s.C2 == pytest.approx(oracles.series_k1(x) / oracles.series_i1(x), rel=1e-10)


def test_constants_linear_in_delta():
    a, b = chemical_constants(0.05, 10.0), chemical_constants(0.05, 20.0)
    for name in ("C1", "C2", "C3"):
        assert getattr(b, name) == pytest.approx(2 * getattr(a, name), rel=1e-14)


def test_c1_matching(state):
    R1 = state.R1
    lo, hi = R1 * (1 - 1e-13), R1
    assert abs(stationary_c(lo, state) - stationary_c(hi, state)) < 1e-10
    d_in, _ = stationary_c_derivatives(R1, state, inner=True)
    d_out, _ = stationary_c_derivatives(R1, state)
    assert abs(d_in - d_out) < 1e-8


def test_neumann_at_dish_edge(state):
    d1, _ = stationary_c_derivatives(R_DISH, state)
    assert abs(d1) < 1e-8


def test_c_decreasing_outside_plateau(state):
    r = np.linspace(state.R1, R_DISH, 300)
    assert np.all(np.diff(stationary_c(r, state)) < 0)
    d1, _ = stationary_c_derivatives(r[1:-1], state)
    assert np.all(d1 < 0)


def test_derivative_matches_finite_difference(state):
    h = 1e-6
    fd = (stationary_c(0.2 + h, state) - stationary_c(0.2 - h, state)) / (2 * h)
    assert stationary_c_derivatives(0.2, state)[0] == pytest.approx(fd, abs=1e-6)
    fd2 = (stationary_c(0.2 + 1e-4, state) - 2 * stationary_c(0.2, state)
           + stationary_c(0.2 - 1e-4, state)) / 1e-8
    assert stationary_c_derivatives(0.2, state)[1] == pytest.approx(fd2, abs=1e-5)


def test_stationary_residual(state):
    inner = np.linspace(0.02, 1, 50) * state.R1
    outer = np.linspace(state.R1, R_DISH, 50)
    for r, is_inner, v_inf in ((inner, True, 1.0), (outer, False, 0.0)):
        d1, d2 = stationary_c_derivatives(r, state, inner=is_inner)
        c = state.C3 * bessel_i0(SQRT2 * r) + state.delta if is_inner else stationary_c(r, state)
        resid = 0.5 * (d2 + d1 / r) + state.delta * v_inf - c
        assert np.max(np.abs(resid)) < 1e-8


def test_branch_error(state):
    with pytest.raises(DomainError):
        stationary_c_derivatives(0.5 * state.R1, state)
    with pytest.raises(DomainError):
        stationary_c(0.7, state)


def test_delta_c(state):
    assert delta_c_at(0.2, state) == pytest.approx(2 * stationary_c(0.2, state))
    assert delta_c_at(0.0, state) == pytest.approx(2 * state.C3)
    r = np.linspace(0.01, 0.5, 30)
    lap = delta_c_at(r, state)
    assert np.allclose(0.5 * lap + state.delta * stationary_v(r, state.R1) - stationary_c(r, state),
                       0, atol=1e-14)


def test_shifted_equilibria_basic():
    assert shifted_equilibria(0.0, 60, 3.2, 0.2) == pytest.approx((1.0, 0.2))
    u1, u2 = shifted_equilibria(0.1, 60, 3.2, 0.2)
    assert u1 > 1 and u2 < 0.2
    with pytest.raises(ComplexRootsError):
        shifted_equilibria(-10.0, 1.0, 1.0, 0.2)


def test_first_order_shift_remainder():
    # chi0 dc / lam = 1e-2
    lam, chi0, us = 60.0, 3.0, 0.2
    dc = 1e-2 * lam / chi0
    exact = np.array(shifted_equilibria(dc, lam, chi0, us))
    approx = np.array(shifted_equilibria(dc, lam, chi0, us, first_order=True))
    # second-order Taylor term of the square root: k^2/(1-u*)^3
    bound = 1e-4 / (1 - us) ** 3
    assert np.all(np.abs(exact - approx) <= 1.01 * bound)
    assert np.all(np.abs(exact - approx) > 0.5 * bound)


@given(st.floats(-0.3, 3.0), st.floats(0.05, 0.95), st.floats(0.5, 5.0))
def test_shifted_roots_identity(dc, us, chi0):
    lam = 60.0
    if (1 - us) ** 2 + 4 * chi0 * dc / lam < 0:
        return
    u1, u2 = shifted_equilibria(dc, lam, chi0, us)
    u = np.linspace(-0.5, 1.5, 20)
    lhs = lam * u * (u1 - u) * (u - u2)
    rhs = lam * u * (1 - u) * (u - us) + chi0 * dc * u
    assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_nagumo_speed():
    assert nagumo_speed(1, 0.2, 60, 0.01) == pytest.approx(math.sqrt(1.2) * 0.3)
    assert nagumo_speed(1, 0.2, 60, 0.01) == pytest.approx(0.3286, abs=1e-4)
    assert nagumo_speed(0.8, 0.4, 60, 0.01) == 0
    for u1, u2 in ((1.0, 0.7), (1.2, 0.1)):
        assert np.sign(nagumo_speed(u1, u2, 60, 0.01)) == np.sign(u1 - 2 * u2)


def test_polynomial_sign_change(state):
    lo, _ = equilibrium_polynomial(0.125, TABLE1, state)
    hi, _ = equilibrium_polynomial(0.14, TABLE1, state)
    assert lo * hi < 0
    coef = analytic.polynomial_coefficients(TABLE1, state)
    assert coef.b < 0


def test_polynomial_derivative(state):
    h = 1e-6
    p_plus, _ = equilibrium_polynomial(0.2 + h, TABLE1, state)
    p_minus, _ = equilibrium_polynomial(0.2 - h, TABLE1, state)
    _, dp = equilibrium_polynomial(0.2, TABLE1, state)
    assert dp == pytest.approx((p_plus - p_minus) / (2 * h), abs=1e-8)


def test_polynomial_is_scaled_front_velocity(state):
    # p(x) = -x * dR/dt with the small-argument chemical field
    for x in (0.08, 0.13, 0.3):
        p, _ = equilibrium_polynomial(x, TABLE1, state)
        assert p == pytest.approx(-x * analytic.front_velocity(x, TABLE1, state), abs=1e-13)


@settings(max_examples=30, deadline=None)
@given(A=st.floats(1.2, 10), omega=st.floats(300, 5000), delta=st.floats(1, 30))
def test_b_negative(A, omega, delta):
    params = TABLE1.replace(A=A, omega=omega, delta=delta)
    s = steady_state(params)
    assert analytic.polynomial_coefficients(params, s).b < 0


def test_equilibrium_radius(state, eq):
    assert eq.R0 == pytest.approx(0.1315, abs=2e-3)
    assert not eq.ambiguous and len(eq.roots) == 1
    p, _ = equilibrium_polynomial(eq.R0, TABLE1, state)
    assert abs(p) < 1e-12
    assert 0 < eq.R0 < R_DISH
    assert eq.u2 < eq.u1
    assert eq.stable and eq.radial_rate < 0


def test_no_equilibrium_without_chemotaxis():
    params = TABLE1.replace(chi0=1e-6)
    s = steady_state(params)
    x = np.linspace(0.01, R_DISH, 500)
    assert np.all(equilibrium_polynomial(x, params, s)[0] > 0)
    with pytest.raises(NoEquilibriumError):
        equilibrium_radius(params, s)


def test_doubling_delta_moves_front_out(eq):
    params = TABLE1.replace(delta=20.0)
    s = steady_state(params)
    base = steady_state(TABLE1)
    assert s.C1 == pytest.approx(2 * base.C1) and s.C2 == pytest.approx(2 * base.C2)
    assert equilibrium_radius(params, s).R0 > eq.R0


def test_stability_numbers(state):
    R0 = 0.1315
    _, c2 = stationary_c_derivatives(R0, state, PAPER)
    assert TABLE1.chi0 * c2 == pytest.approx(3.4409, abs=0.02)
    assert TABLE1.Du / R0**2 == pytest.approx(0.5783, abs=5e-3)
    rate, stable = radial_stability(R0, TABLE1, state)
    assert stable and rate == pytest.approx(TABLE1.Du / R0**2 - TABLE1.chi0 * c2)


def test_no_chemotaxis_is_unstable(state):
    rate, stable = radial_stability(0.13, TABLE1.replace(chi0=0.0), state)
    assert rate == pytest.approx(TABLE1.Du / 0.13**2) and not stable


def test_stability_threshold_by_bisection(state):
    R0 = 0.15
    _, c2 = stationary_c_derivatives(R0, state, PAPER)
    lo, hi = 0.0, 5.0
    assert not radial_stability(R0, TABLE1.replace(chi0=lo), state)[1]
    assert radial_stability(R0, TABLE1.replace(chi0=hi), state)[1]
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if radial_stability(R0, TABLE1.replace(chi0=mid), state)[1]:
            hi = mid
        else:
            lo = mid
    assert hi == pytest.approx(TABLE1.Du / (R0**2 * c2), rel=1e-10)


def test_azimuthal_rates(state, eq):
    radial, _ = radial_stability(eq.R0, TABLE1, state)
    assert azimuthal_mode_rate(0, eq.R0, TABLE1, state) == radial
    rates = [azimuthal_mode_rate(m, eq.R0, TABLE1, state) for m in range(11)]
    assert np.all(np.diff(rates) < 0)
    assert max(rates) < 0
    with pytest.raises(DomainError):
        azimuthal_mode_rate(-1, eq.R0, TABLE1, state)


def test_front_fixed_point(state, eq):
    traj = integrate_front_radius(eq.R0, 5.0, 1e-3, TABLE1, state)
    assert np.max(np.abs(traj.R - eq.R0)) < 1e-6
    assert traj.exit_side is None


@pytest.mark.parametrize("offset", [-0.02, 0.02])
def test_front_converges_monotonically(state, eq, offset):
    rate, _ = radial_stability(eq.R0, TABLE1, state)
    t_end = math.log(100) / abs(rate)
    traj = integrate_front_radius(eq.R0 + offset, t_end, 1e-4, TABLE1, state)
    gap = traj.R - eq.R0
    assert np.all(np.diff(np.abs(gap)) <= 0)
    assert np.all(np.sign(gap) == np.sign(offset))
    assert abs(gap[-1]) < abs(offset) / 50


def test_front_without_chemotaxis_invades(state):
    params = TABLE1.replace(chi0=0.0)
    traj = integrate_front_radius(0.3, 10.0, 1e-3, params, state)
    assert np.all(np.diff(traj.R) < 0)
    assert traj.exit_side == "inner"


def test_front_domain_error(state):
    with pytest.raises(DomainError):
        integrate_front_radius(0.01, 1.0, 1e-3, TABLE1, state)


def test_analytic_report_rows(eq):
    rows = dict(analytic.analytic_report(TABLE1))
    assert rows["R0"] == eq.R0
    assert list(rows)[:9] == ["R1", "C1", "C2", "C3", "R0", "u1", "u2", "s1", "radial_rate"]
    assert [k for k in rows if k.startswith("rate_m")] == [f"rate_m{m}" for m in range(9)]


def test_front_integration_matches_velocity_loop(state):
    traj = integrate_front_radius(0.15, 0.2, 1e-3, TABLE1, state)
    R = 0.15
    for _ in range(200):
        R += 1e-3 * analytic.front_velocity(R, TABLE1, state)
    assert traj.R[-1] == pytest.approx(R, abs=1e-12)


def test_root_inside_plateau_is_not_an_equilibrium():
    params = TABLE1.replace(chi0=1.0)
    s = steady_state(params)
    roots = analytic.find_polynomial_roots(params, s)
    assert roots and max(roots) < s.R1
    with pytest.raises(NoEquilibriumError, match="inside the plateau"):
        equilibrium_radius(params, s)
