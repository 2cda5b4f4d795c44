"""Closed-form stationary states, front equilibrium and its linear stability.

Everything here lives on the disk of unit area, radius ``R_DISH = 1/sqrt(pi)``,
with radially symmetric fields.  The bacteria settle on the plateau
``v = 1`` for ``r < R1`` and the chemical solves ``c''/2 + c'/(2r) + delta*v - c = 0``
with a Neumann condition at the dish edge.  The fungus front sits where
the Nagumo speed, chemotactic drift and curvature balance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import ComplexRootsError, DomainError, NoEquilibriumError, NoPlateauError
from .params import Parameters
from .specfun import EULER_GAMMA, EXACT, PAPER

R_DISH = 1.0 / math.sqrt(math.pi)
SQRT2 = math.sqrt(2.0)
_X_DISH = math.sqrt(2.0 / math.pi)


@dataclass(frozen=True)
class AnalyticSteadyState:
    R1: float
    C1: float
    C2: float
    C3: float
    delta: float


@dataclass(frozen=True)
class PolynomialCoefficients:
    a3: float
    a2: float
    a1: float
    a0: float
    b: float

    def __call__(self, x):
        return self.a3 * x**3 + self.a2 * x**2 + self.a1 * x + self.a0 + self.b * x * np.log(x)

    def derivative(self, x):
        return 3 * self.a3 * x**2 + 2 * self.a2 * x + self.a1 + self.b * (np.log(x) + 1.0)


@dataclass(frozen=True)
class FrontEquilibrium:
    R0: float
    u1: float
    u2: float
    s1: float
    radial_rate: float
    stable: bool
    radial_rate_exact: float = float("nan")
    roots: tuple = ()
    ambiguous: bool = False


@dataclass
class FrontTrajectory:
    t: np.ndarray
    R: np.ndarray
    exit_side: str | None = None  # "inner" (hit the plateau) or "outer" (hit the dish edge)


def plateau_radius(A: float, omega: float, v_star: float) -> float:
    """Radius ``sqrt(ln(A/v_star)/omega)`` of the bacterial plateau."""
    ratio = A / v_star
    if not ratio > 1.0:
        raise NoPlateauError(
            f"A/v_star = {ratio:.6g} <= 1: the colony dies out everywhere", bound="lower"
        )
    if not math.log(ratio) < omega / math.pi:
        raise NoPlateauError(
            f"A/v_star = {ratio:.6g} >= exp(omega/pi): plateau exceeds the dish",
            bound="upper",
        )
    return math.sqrt(math.log(ratio) / omega)


def stationary_v(r, R1):
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0) or np.any(r_arr > R_DISH):
        raise DomainError(f"r outside [0, {R_DISH:.6f}]")
    out = np.where(r_arr <= R1, 1.0, 0.0)
    return float(out) if out.ndim == 0 else out


def chemical_constants(R1: float, delta: float) -> AnalyticSteadyState:
    if not 0 < R1 < R_DISH:
        raise DomainError(f"R1 = {R1} outside (0, 1/sqrt(pi))")
    if not delta > 0:
        raise DomainError("delta must be positive")
    x1 = SQRT2 * R1
    i1_edge = specfun.bessel_i1(_X_DISH)
    k1_edge = specfun.bessel_k1(_X_DISH)
    i1_plat = specfun.bessel_i1(x1)
    k1_plat = specfun.bessel_k1(x1)
    scale = SQRT2 * delta * R1
    C1 = scale * k1_edge * i1_plat / i1_edge
    C2 = scale * i1_plat
    C3 = scale / i1_edge * (k1_edge * i1_plat - i1_edge * k1_plat)
    return AnalyticSteadyState(R1=R1, C1=C1, C2=C2, C3=C3, delta=delta)


def steady_state(params: Parameters) -> AnalyticSteadyState:
    """Plateau plus chemical constants for the Gaussian colony in ``params``."""
    return chemical_constants(plateau_radius(params.A, params.omega, params.v_star), params.delta)


def _check_r(r, lo=0.0):
    if np.any(np.isnan(r)) or np.any(r < lo) or np.any(r > R_DISH * (1 + 1e-12)):
        raise DomainError(f"r outside [{lo:.6g}, 1/sqrt(pi)]")


def stationary_c(r, s: AnalyticSteadyState, mode=EXACT):
    """Stationary chemical concentration at radius ``r``.

    ``mode=PAPER`` swaps the outer-branch Bessel functions for their
    small-argument approximants (the inner branch is always exact).
    """
    r_arr = np.asarray(r, dtype=float)
    _check_r(r_arr)
    x = SQRT2 * r_arr
    inner = r_arr < s.R1
    out = np.empty_like(r_arr)
    if np.any(inner):
        out[inner] = s.C3 * specfun.bessel_i0(x[inner]) + s.delta
    outer = ~inner
    if np.any(outer):
        xo = x[outer]
        out[outer] = s.C1 * specfun.bessel_i0(xo, mode) + s.C2 * specfun.bessel_k0(xo, mode)
    return float(out) if out.ndim == 0 else out


def stationary_c_derivatives(r, s: AnalyticSteadyState, mode=EXACT, inner=False):
    """Return ``(c'(r), c''(r))``.

    The default evaluates the outer branch and requires ``r >= R1``.  With
    ``inner=True`` the inner branch ``C3 I0(sqrt(2) r) + delta`` is
    differentiated instead (``0 < r <= R1``, exact mode only).
    """
    r_arr = np.asarray(r, dtype=float)
    _check_r(r_arr)
    scalar = r_arr.ndim == 0
    if np.any(r_arr <= 0):
        raise DomainError("derivatives need r > 0")
    x = SQRT2 * r_arr
    if inner:
        if np.any(r_arr > s.R1):
            raise DomainError("inner branch requires r <= R1")
        i0, i1 = specfun.bessel_i0(x), specfun.bessel_i1(x)
        d1 = SQRT2 * s.C3 * i1
        d2 = 2.0 * s.C3 * (i0 - i1 / x)
    else:
        if np.any(r_arr < s.R1 * (1 - 1e-12)):
            raise DomainError("outer branch requires r >= R1")
        if mode is PAPER:
            d1 = s.C1 * r_arr - s.C2 / r_arr
            d2 = s.C1 * (1.0 + 0.75 * r_arr**2) + s.C2 / r_arr**2
        else:
            i0, i1 = specfun.bessel_i0(x), specfun.bessel_i1(x)
            k0, k1 = specfun.bessel_k0(x), specfun.bessel_k1(x)
            d1 = SQRT2 * (s.C1 * i1 - s.C2 * k1)
            d2 = 2.0 * (s.C1 * (i0 - i1 / x) + s.C2 * (k0 + k1 / x))
    if scalar:
        return float(d1), float(d2)
    return d1, d2


def delta_c_at(r, s: AnalyticSteadyState, mode=EXACT):
    """Laplacian of the stationary chemical field, ``2(c - delta v)``."""
    c = stationary_c(r, s, mode)
    return 2.0 * (c - s.delta * stationary_v(r, s.R1))


def shifted_equilibria(delta_c, lam, chi0, u_star, first_order=False):
    """Stable and unstable roots ``(u1, u2)`` of ``lam u(1-u)(u-u_star) + chi0 delta_c u``."""
    k = chi0 * delta_c / lam
    if first_order:
        shift = k / (1.0 - u_star)
        return 1.0 + shift, u_star - shift
    disc = (1.0 - u_star) ** 2 + 4.0 * k
    if np.any(np.asarray(disc) < 0):
        raise ComplexRootsError("negative discriminant: the shifted equilibria annihilate")
    root = np.sqrt(disc)
    return 0.5 * (1.0 + u_star) + 0.5 * root, 0.5 * (1.0 + u_star) - 0.5 * root


def nagumo_speed(u1, u2, lam, Du):
    return math.sqrt(2.0 * lam * Du) * (0.5 * u1 - u2)


def polynomial_coefficients(params: Parameters, s: AnalyticSteadyState) -> PolynomialCoefficients:
    chi0, lam, Du, us = params.chi0, params.lam, params.Du, params.u_star
    C1, C2 = s.C1, s.C2
    sq = math.sqrt(2.0 * lam * Du)
    return PolynomialCoefficients(
        a3=3.0 * chi0 * C1 * math.sqrt(Du) / (math.sqrt(2.0 * lam) * (1.0 - us)),
        a2=chi0 * C1,
        a1=sq * (0.5 - us + 3.0 * chi0 / (lam * (1.0 - us))
                 * (C1 + C2 * (math.log(SQRT2) - EULER_GAMMA))),
        a0=Du - chi0 * C2,
        b=-3.0 * chi0 * C2 * math.sqrt(2.0 * Du) / (math.sqrt(lam) * (1.0 - us)),
    )


def equilibrium_polynomial(x, params: Parameters, s: AnalyticSteadyState):
    """Value and derivative of the equilibrium polynomial at ``x > 0``."""
    if np.any(np.asarray(x) <= 0):
        raise DomainError("equilibrium polynomial needs x > 0")
    coef = polynomial_coefficients(params, s)
    return coef(x), coef.derivative(x)


def _newton(coef, x, lo, hi, tol=1e-12, maxiter=100):
    for _ in range(maxiter):
        f = coef(x)
        if abs(f) < tol:
            return x
        df = coef.derivative(x)
        if df == 0:
            return None
        x = x - f / df
        if not lo < x < hi:
            return None
    return None


def _bisect(coef, a, b, tol=1e-12, maxiter=200):
    fa = coef(a)
    for _ in range(maxiter):
        m = 0.5 * (a + b)
        fm = coef(m)
        if abs(fm) < tol or b - a < 1e-15:
            return m
        if (fa < 0) == (fm < 0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def find_polynomial_roots(params: Parameters, s: AnalyticSteadyState, n_starts=32):
    """All distinct zeros of the equilibrium polynomial in (0, 1/sqrt(pi))."""
    coef = polynomial_coefficients(params, s)
    lo, hi = 1e-9, R_DISH
    roots = []

    def add(r):
        if r is None or not lo < r < hi:
            return
        if any(abs(r - q) < 1e-8 for q in roots):
            return
        roots.append(r)

    starts = np.linspace(0.01, R_DISH, n_starts + 2)[1:-1]
    for x0 in starts:
        add(_newton(coef, float(x0), lo, hi))
    # Fallback: bisect every sign change on a fine scan.
    grid = np.linspace(0.01, R_DISH, 400)
    vals = coef(grid)
    for a, b, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if fa == 0:
            add(float(a))
        elif (fa < 0) != (fb < 0):
            add(_bisect(coef, float(a), float(b)))
    return sorted(roots)


def radial_stability(R0, params: Parameters, s: AnalyticSteadyState, mode=PAPER):
    """Growth rate ``Du/R0^2 - chi0 c''(R0)`` of radial front perturbations.

    Returns ``(rate, stable)``.  The default uses the small-argument form of
    ``c''``; pass ``mode=EXACT`` for the Bessel-series value.
    """
    _, c2 = stationary_c_derivatives(R0, s, mode)
    rate = params.Du / R0**2 - params.chi0 * c2
    return rate, bool(rate < 0)


def azimuthal_mode_rate(m, R0, params: Parameters, s: AnalyticSteadyState, mode=PAPER):
    if m < 0 or int(m) != m:
        raise DomainError("mode number must be a non-negative integer")
    radial, _ = radial_stability(R0, params, s, mode)
    return -(params.Du / R0**2) * m * m + radial


def equilibrium_radius(params: Parameters, s: AnalyticSteadyState | None = None) -> FrontEquilibrium:
    """Locate the stationary circular front.

    Newton from 32 starts across the dish plus bisection on every sign
    change; if several distinct roots exist the smallest is reported and
    ``ambiguous`` is set.
    """
    if s is None:
        s = steady_state(params)
    all_roots = find_polynomial_roots(params, s)
    if not all_roots:
        raise NoEquilibriumError("equilibrium polynomial has no zero in (0, 1/sqrt(pi))")
    # The outer chemical field only holds beyond the plateau.
    roots = [r for r in all_roots if r > s.R1]
    if not roots:
        raise NoEquilibriumError(
            f"every zero of the equilibrium polynomial ({', '.join(f'{r:.4g}' for r in all_roots)}) "
            f"lies inside the plateau R1 = {s.R1:.4g}; the front overruns the colony")
    R0 = roots[0]
    dc = delta_c_at(R0, s)
    u1, u2 = shifted_equilibria(dc, params.lam, params.chi0, params.u_star, first_order=True)
    s1 = nagumo_speed(u1, u2, params.lam, params.Du)
    rate, stable = radial_stability(R0, params, s)
    rate_exact, _ = radial_stability(R0, params, s, EXACT)
    return FrontEquilibrium(
        R0=R0, u1=u1, u2=u2, s1=s1, radial_rate=rate, stable=stable,
        radial_rate_exact=rate_exact, roots=tuple(roots), ambiguous=len(roots) > 1,
    )


def front_velocity(R, params: Parameters, s: AnalyticSteadyState, mode=PAPER):
    """Right-hand side ``dR/dt`` of the circular front equation of motion."""
    c = stationary_c(R, s, mode)
    dc = 2.0 * (c - s.delta * stationary_v(R, s.R1))
    u1, u2 = shifted_equilibria(dc, params.lam, params.chi0, params.u_star,
                                first_order=mode is PAPER)
    c1, _ = stationary_c_derivatives(R, s, mode)
    return -nagumo_speed(u1, u2, params.lam, params.Du) - params.chi0 * c1 - params.Du / R


def integrate_front_radius(R_init, t_end, dt, params: Parameters, s: AnalyticSteadyState,
                           mode=PAPER) -> FrontTrajectory:
    """Explicit Euler integration of the circular front radius.

    With the default ``mode=PAPER`` the velocity uses the same small-argument
    forms as the equilibrium polynomial, so ``equilibrium_radius`` is an exact
    fixed point.  Integration stops early when R leaves (R1, 1/sqrt(pi)).
    """
    if not s.R1 < R_init < R_DISH:
        raise DomainError(f"R_init = {R_init} outside (R1, 1/sqrt(pi))")
    if not dt > 0:
        raise DomainError("dt must be positive")
    if mode is PAPER:
        # p(R) = -R dR/dt exactly in this mode; the closed form is much cheaper
        pc = polynomial_coefficients(params, s)

        def velocity(R):
            return -(((pc.a3 * R + pc.a2) * R + pc.a1) * R + pc.a0 + pc.b * R * math.log(R)) / R
    else:
        def velocity(R):
            return front_velocity(R, params, s, mode)
    n = int(math.floor(t_end / dt + 1e-9))
    ts = [0.0]
    Rs = [float(R_init)]
    R = float(R_init)
    exit_side = None
    for k in range(1, n + 1):
        R = R + dt * velocity(R)
        ts.append(k * dt)
        Rs.append(R)
        if R <= s.R1:
            exit_side = "inner"
            break
        if R >= R_DISH:
            exit_side = "outer"
            break
    return FrontTrajectory(np.array(ts), np.array(Rs), exit_side)


def analytic_report(params: Parameters, modes=range(9)):
    """Rows ``(quantity, value)`` summarizing the analytic predictions."""
    s = steady_state(params)
    eq = equilibrium_radius(params, s)
    rows = [
        ("R1", s.R1), ("C1", s.C1), ("C2", s.C2), ("C3", s.C3),
        ("R0", eq.R0), ("u1", eq.u1), ("u2", eq.u2), ("s1", eq.s1),
        ("radial_rate", eq.radial_rate),
    ]
    rows += [(f"rate_m{m}", azimuthal_mode_rate(m, eq.R0, params, s)) for m in modes]
    return rows
