"""Modified Bessel functions of order 0 and 1 for small arguments.

Only the range the model needs is covered (0 < x <= 2, in practice
x <= sqrt(2/pi) ~ 0.8), so everything is built from the ascending power
series.  ``K1`` is not summed separately: it follows from the Wronskian

    K0(x) I1(x) + K1(x) I0(x) = 1/x.

Each function takes a ``mode``: ``EXACT`` sums the series, ``PAPER`` uses
the leading small-argument approximants

    I0 ~ 1 + x^2/4,  I1 ~ x/2,  K0 ~ ln(2/x) - gamma,  K1 ~ 1/x

which are only meaningful for x < 1.
"""
from __future__ import annotations

import enum

import numpy as np

from .errors import DomainError

EULER_GAMMA = 0.577215664901533

_REL_TOL = 1e-16
_MAX_TERMS = 200


class BesselMode(enum.Enum):
    EXACT = "exact"
    PAPER = "paper"


EXACT = BesselMode.EXACT
PAPER = BesselMode.PAPER


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _out(arr, scalar):
    return float(arr) if scalar else arr


def _check(x, strict):
    if np.any(np.isnan(x)):
        raise DomainError("NaN argument")
    if strict and np.any(x <= 0):
        raise DomainError("argument must be positive")
    if not strict and np.any(x < 0):
        raise DomainError("argument must be non-negative")


def _series_i0_h(x):
    """Return (I0(x), sum_{k>=1} (x/2)^{2k}/(k!)^2 H_k)."""
    q = 0.25 * x * x
    term = np.ones_like(x)
    total = np.ones_like(x)
    harmonic_sum = np.zeros_like(x)
    h = 0.0
    for k in range(1, _MAX_TERMS):
        term = term * q / (k * k)
        h += 1.0 / k
        total = total + term
        harmonic_sum = harmonic_sum + term * h
        if np.all(term * h <= _REL_TOL * np.abs(harmonic_sum)) and np.all(
            term <= _REL_TOL * total
        ):
            break
    return total, harmonic_sum


def _series_i1(x):
    q = 0.25 * x * x
    term = 0.5 * x
    total = term.copy()
    for k in range(1, _MAX_TERMS):
        term = term * q / (k * (k + 1))
        total = total + term
        if np.all(term <= _REL_TOL * np.abs(total)):
            break
    return total


def bessel_i0(x, mode=EXACT):
    x, scalar = _as_array(x)
    _check(x, strict=False)
    if mode is PAPER:
        return _out(1.0 + 0.25 * x * x, scalar)
    return _out(_series_i0_h(x)[0], scalar)


def bessel_i1(x, mode=EXACT):
    x, scalar = _as_array(x)
    _check(x, strict=False)
    if mode is PAPER:
        return _out(0.5 * x, scalar)
    return _out(_series_i1(x), scalar)


def bessel_k0(x, mode=EXACT):
    x, scalar = _as_array(x)
    _check(x, strict=True)
    if mode is PAPER:
        return _out(np.log(2.0 / x) - EULER_GAMMA, scalar)
    i0, hsum = _series_i0_h(x)
    return _out(-(np.log(0.5 * x) + EULER_GAMMA) * i0 + hsum, scalar)


def bessel_k1(x, mode=EXACT):
    x, scalar = _as_array(x)
    _check(x, strict=True)
    if mode is PAPER:
        return _out(1.0 / x, scalar)
    i0, hsum = _series_i0_h(x)
    k0 = -(np.log(0.5 * x) + EULER_GAMMA) * i0 + hsum
    return _out((1.0 / x - k0 * _series_i1(x)) / i0, scalar)


def bessel_derivatives(x, mode=EXACT):
    """Return ``(I0'(x), K0'(x)) = (I1(x), -K1(x))``."""
    x, scalar = _as_array(x)
    _check(x, strict=True)
    i1 = bessel_i1(x, mode)
    k1 = bessel_k1(x, mode)
    if scalar:
        return float(i1), -float(k1)
    return i1, -k1
