"""Cylindrical Bessel and Hankel functions of orders 0 and 1.

Three argument regions are used:

* ``0 <= x <= 8``: Chebyshev series in ``x**2`` for ``J``, and for the
  smooth remainders of ``Y`` once the logarithmic part is split off.
* ``8 < x <= 25``: amplitude/phase form
  ``J = sqrt(2/(pi x)) (P cos chi - Q sin chi)`` with ``P`` and ``Q``
  given by Chebyshev series in ``(8/x)**2``.
* ``x > 25``: the same form with the Hankel asymptotic series for ``P``
  and ``Q``.

The tables live in :mod:`phaselab._bessel_coeffs` and are regenerated by
``tools/gen_bessel_coeffs.py``. All functions broadcast over arrays and are
pure.
"""

import numpy as np

from . import _bessel_coeffs as _c
from .errors import ConfigurationError, DomainError

__all__ = ["bessel_j", "bessel_y", "hankel1", "bessel_jy", "bessel_y_regular", "SMALL", "MID"]

SMALL = _c.SMALL
MID = _c.MID

_TWO_OVER_PI = 2.0 / np.pi
_VLO = (SMALL / MID) ** 2

_J0_SMALL = np.array(_c.J0_SMALL)
_J1X_SMALL = np.array(_c.J1X_SMALL)
_R0_SMALL = np.array(_c.R0_SMALL)
_R1X_SMALL = np.array(_c.R1X_SMALL)
_MID_TABLES = {
    0: (np.array(_c.P0_MID), np.array(_c.Q0X_MID)),
    1: (np.array(_c.P1_MID), np.array(_c.Q1X_MID)),
}
_HANKEL = {0: np.array(_c.HANKEL0), 1: np.array(_c.HANKEL1)}


def _clenshaw(coeffs, s):
    b1 = np.zeros_like(s)
    b2 = np.zeros_like(s)
    two_s = 2.0 * s
    for c in coeffs[:0:-1]:
        b1, b2 = two_s * b1 - b2 + c, b1
    return s * b1 - b2 + coeffs[0]


def _check_order(order):
    if order not in (0, 1):
        raise ConfigurationError(f"order must be 0 or 1, got {order!r}", field="order")


def _as_array(x):
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(np.isnan(x)):
        raise DomainError("Bessel argument must be nonnegative")
    return x


def _small_s(x):
    return 2.0 * (x / SMALL) ** 2 - 1.0


def _pq_mid(order, x):
    v = (SMALL / x) ** 2
    s = 2.0 * (v - _VLO) / (1.0 - _VLO) - 1.0
    ptab, qtab = _MID_TABLES[order]
    return _clenshaw(ptab, s), _clenshaw(qtab, s) / x


def _pq_asymptotic(order, x):
    a = _HANKEL[order]
    inv = 1.0 / x
    inv2 = inv * inv
    p = np.zeros_like(x)
    q = np.zeros_like(x)
    even = a[0::2] * (-1.0) ** np.arange(len(a[0::2]))
    odd = a[1::2] * (-1.0) ** np.arange(len(a[1::2]))
    for c in even[::-1]:
        p = p * inv2 + c
    for c in odd[::-1]:
        q = q * inv2 + c
    return p, q * inv


def _large(order, x, mid):
    """J and Y on the amplitude/phase branch; ``mid`` selects the fitted table."""
    p, q = _pq_mid(order, x) if mid else _pq_asymptotic(order, x)
    amp = np.sqrt(_TWO_OVER_PI / x)
    c, s = np.cos(x), np.sin(x)
    # chi = x - pi/4 (order 0) or x - 3 pi/4 (order 1)
    if order == 0:
        cchi, schi = (c + s) / np.sqrt(2.0), (s - c) / np.sqrt(2.0)
    else:
        cchi, schi = (s - c) / np.sqrt(2.0), -(c + s) / np.sqrt(2.0)
    return amp * (p * cchi - q * schi), amp * (p * schi + q * cchi)


def _j_small(order, x):
    s = _small_s(x)
    if order == 0:
        # J0 <= 1; the series sum overshoots by an ulp near the origin
        return np.minimum(_clenshaw(_J0_SMALL, s), 1.0)
    return x * _clenshaw(_J1X_SMALL, s)


def _y_small(order, x, j):
    s = _small_s(x)
    log_part = _TWO_OVER_PI * np.log(0.5 * x) * j
    if order == 0:
        return log_part + _clenshaw(_R0_SMALL, s)
    return log_part - _TWO_OVER_PI / x + x * _clenshaw(_R1X_SMALL, s)


def _regions(x):
    small = x <= SMALL
    mid = (x > SMALL) & (x <= MID)
    return small, mid, ~(small | mid)


def _unwrap(out, shape):
    return out.reshape(shape)[()] if shape == () else out.reshape(shape)


def bessel_j(order, x):
    """Bessel function of the first kind ``J_order(x)`` for ``x >= 0``."""
    _check_order(order)
    x = _as_array(x)
    shape = x.shape
    xf = x.ravel()
    out = np.empty_like(xf)
    small, mid, large = _regions(xf)
    if small.any():
        out[small] = _j_small(order, xf[small])
    if mid.any():
        out[mid] = _large(order, xf[mid], True)[0]
    if large.any():
        out[large] = _large(order, xf[large], False)[0]
    return _unwrap(out, shape)


def bessel_jy(order, x):
    """Return ``(J_order(x), Y_order(x))`` for ``x > 0`` in one pass.

    Values are bit-identical to separate :func:`bessel_j` and
    :func:`bessel_y` calls.
    """
    _check_order(order)
    x = _as_array(x)
    if np.any(x == 0):
        raise DomainError("Y is singular at x = 0")
    shape = x.shape
    xf = x.ravel()
    j = np.empty_like(xf)
    y = np.empty_like(xf)
    small, mid, large = _regions(xf)
    if small.any():
        xs = xf[small]
        js = _j_small(order, xs)
        j[small] = js
        y[small] = _y_small(order, xs, js)
    for mask, fitted in ((mid, True), (large, False)):
        if mask.any():
            j[mask], y[mask] = _large(order, xf[mask], fitted)
    return _unwrap(j, shape), _unwrap(y, shape)


def bessel_y(order, x):
    """Bessel function of the second kind ``Y_order(x)`` for ``x > 0``.

    Raises
    ------
    ValueError
        At ``x = 0``, where ``Y`` has a logarithmic (order 0) or pole
        (order 1) singularity.
    """
    return bessel_jy(order, x)[1]


def hankel1(order, x):
    """Hankel function of the first kind, ``J_order(x) + i Y_order(x)``."""
    j, y = bessel_jy(order, x)
    return j + 1j * y


def bessel_y_regular(order, x):
    """Smooth remainder of ``Y`` after removing its singular terms.

    ``Y0(x) = (2/pi) ln(x/2) J0(x) + R``, and
    ``Y1(x) = (2/pi) ln(x/2) J1(x) - 2/(pi x) + R``. Returns ``R``,
    computed without cancellation for small ``x``.
    """
    _check_order(order)
    x = _as_array(x)
    shape = x.shape
    xf = x.ravel()
    out = np.empty_like(xf)
    small = xf <= SMALL
    if small.any():
        s = _small_s(xf[small])
        out[small] = _clenshaw(_R0_SMALL, s) if order == 0 else xf[small] * _clenshaw(_R1X_SMALL, s)
    big = ~small
    if big.any():
        xb = xf[big]
        j, y = bessel_jy(order, xb)
        out[big] = y - _TWO_OVER_PI * np.log(0.5 * xb) * j + (_TWO_OVER_PI / xb if order == 1 else 0.0)
    return _unwrap(out, shape)
