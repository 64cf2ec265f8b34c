"""Bessel functions of the first kind for integer order.

Miller's backward recurrence, normalised with ``J_0 + 2*sum_k J_2k = 1``.
Accurate to ~1e-15 absolute for ``|n| <= 60`` and ``|x| <= 20``.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq

J0_FIRST_ZERO = 2.404825557695773


def _start_order(nmax: int, x: float) -> int:
    top = max(nmax, int(math.ceil(x)))
    m = top + 20 + int(math.sqrt(40.0 * (top + 1)))
    return m + (m % 2)


def besselj_orders(nmax: int, x: float) -> np.ndarray:
    """``J_0(x), ..., J_nmax(x)`` as one array (one recurrence pass)."""
    if nmax < 0:
        raise ValueError("nmax must be non-negative")
    x = float(x)
    if x == 0.0:
        out = np.zeros(nmax + 1)
        out[0] = 1.0
        return out
    sign_flip = x < 0
    ax = abs(x)
    if ax < 1e-8:
        # leading series term; the next one is smaller by x^2/(4(n+1)) < 1e-16
        out = np.zeros(nmax + 1)
        term = 1.0
        for n in range(nmax + 1):
            out[n] = term
            term *= ax / (2.0 * (n + 1))
        if sign_flip:
            out[1::2] *= -1.0
        return out

    m = _start_order(nmax, ax)
    vals = np.zeros(m + 2)
    vals[m] = 1e-300
    norm = 0.0
    for k in range(m, 0, -1):
        vals[k - 1] = (2.0 * k / ax) * vals[k] - vals[k + 1]
        if abs(vals[k - 1]) > 1e250:
            vals *= 1e-250
            norm *= 1e-250
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * vals[k - 1]
    norm += vals[0]
    out = vals[: nmax + 1] / norm
    if sign_flip:
        out[1::2] *= -1.0
    return out


def besselj(n: int, x):
    """``J_n(x)`` for integer ``n`` (any sign) and real scalar or array ``x``."""
    n = int(n)
    if np.ndim(x):
        return np.array([besselj(n, xi) for xi in np.asarray(x, dtype=float).ravel()]).reshape(np.shape(x))
    an = abs(n)
    val = besselj_orders(an, x)[an]
    if n < 0 and an % 2:
        val = -val
    return float(val)


def bessel_sideband_column(mu: float, theta: float, phi_c: float, width: int) -> np.ndarray:
    """Sideband amplitudes ``exp(i phi_c) exp(i k theta) J_k(mu)`` for ``k = -width..width``.

    Entry ``width + k`` of the result is the amplitude scattered from bin ``j``
    into bin ``j + k`` by a single-tone EOM.
    """
    if width < 0:
        raise ValueError(f"sideband width must be non-negative, got {width}")
    pos = besselj_orders(width, mu)
    ks = np.arange(-width, width + 1)
    j = np.concatenate([pos[:0:-1] * np.where(np.arange(width, 0, -1) % 2, -1.0, 1.0), pos])
    return np.exp(1j * phi_c) * np.exp(1j * ks * theta) * j


def solve_j0_equals_j1(lo: float = 0.5, hi: float = 2.0) -> float:
    """Smallest positive ``mu`` with ``J_0(mu) = J_1(mu)`` (equal-split modulation)."""
    return brentq(lambda m: besselj(0, m) - besselj(1, m), lo, hi, xtol=1e-14)
