"""Truncated Taylor series arithmetic on numpy arrays.

A series is a float64 array of shape ``(order + 1, *shape)``. Row ``k`` holds
the k-th Taylor coefficient, ``f^(k)(x) / k!``, at every point of ``shape``.
Each coefficient is computed from lower coefficients only, so the value of row
``k`` never depends on how many rows the series carries.

Domain checks are left to the caller.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray

Series = NDArray[np.float64]


def variable(points: NDArray[np.float64], order: int) -> Series:
    """Returns the series of the identity function at ``points``."""
    series = np.zeros((order + 1, *points.shape))
    series[0] = points
    if order >= 1:
        series[1] = 1.0
    return series


def constant(value: float, shape: tuple[int, ...], order: int) -> Series:
    """Returns the series of a constant function."""
    series = np.zeros((order + 1, *shape))
    series[0] = value
    return series


def _ramp(k: int, ndim: int) -> NDArray[np.float64]:
    # 1, 2, ..., k shaped to broadcast against series rows
    return np.arange(1, k + 1, dtype=np.float64).reshape((-1,) + (1,) * (ndim - 1))


def mul(a: Series, b: Series) -> Series:
    """Cauchy product of two series."""
    out = np.empty_like(a)
    for k in range(len(a)):
        out[k] = np.sum(a[: k + 1] * b[k::-1], axis=0)
    return out


def div(a: Series, b: Series) -> Series:
    """Quotient of two series; ``b[0]`` must be nonzero."""
    out = np.empty_like(a)
    out[0] = a[0] / b[0]
    for k in range(1, len(a)):
        acc = np.sum(b[1 : k + 1] * out[k - 1 :: -1], axis=0)
        out[k] = (a[k] - acc) / b[0]
    return out


def exp(a: Series) -> Series:
    """Exponential of a series."""
    out = np.empty_like(a)
    out[0] = np.exp(a[0])
    for k in range(1, len(a)):
        out[k] = np.sum(_ramp(k, a.ndim) * a[1 : k + 1] * out[k - 1 :: -1], axis=0) / k
    return out


def log(a: Series) -> Series:
    """Natural logarithm of a series; ``a[0]`` must be positive."""
    out = np.empty_like(a)
    out[0] = np.log(a[0])
    for k in range(1, len(a)):
        if k > 1:
            acc = np.sum(_ramp(k - 1, a.ndim) * out[1:k] * a[k - 1 : 0 : -1], axis=0)
        else:
            acc = np.zeros_like(a[0])
        out[k] = (a[k] - acc / k) / a[0]
    return out


def sincos(a: Series) -> tuple[Series, Series]:
    """Sine and cosine of a series, computed together."""
    s = np.empty_like(a)
    c = np.empty_like(a)
    s[0] = np.sin(a[0])
    c[0] = np.cos(a[0])
    for k in range(1, len(a)):
        weighted = _ramp(k, a.ndim) * a[1 : k + 1]
        s[k] = np.sum(weighted * c[k - 1 :: -1], axis=0) / k
        c[k] = -np.sum(weighted * s[k - 1 :: -1], axis=0) / k
    return s, c


def sqrt(a: Series) -> Series:
    """Square root of a series; ``a[0]`` must be positive."""
    out = np.empty_like(a)
    out[0] = np.sqrt(a[0])
    for k in range(1, len(a)):
        if k > 1:
            acc = np.sum(out[1:k] * out[k - 1 : 0 : -1], axis=0)
        else:
            acc = np.zeros_like(a[0])
        out[k] = (a[k] - acc) / (2.0 * out[0])
    return out


def integer_power(a: Series, exponent: int) -> Series:
    """Raises a series to an integer power by repeated multiplication.

    Valid for any sign of ``a[0]``. Negative exponents divide into one, so
    ``a[0]`` must then be nonzero.
    """
    result = constant(1.0, a.shape[1:], len(a) - 1)
    base = a
    m = abs(exponent)
    while m:
        if m & 1:
            result = mul(result, base)
        m >>= 1
        if m:
            base = mul(base, base)
    if exponent < 0:
        return div(constant(1.0, a.shape[1:], len(a) - 1), result)
    return result


def real_power(a: Series, exponent: float) -> Series:
    """Raises a series to a real power through ``exp(exponent * log(a))``."""
    return exp(exponent * log(a))
