"""NumPy fallback for the dense O(n^2) singular-integral kernels.

Summation order over offsets matches the compiled backend so the two agree
to rounding.
"""

import numpy as np

BACKEND = "numpy"


def stein_apply(values, weights, step):
    """out[j] = step * sum_m weights[m] * (values[(j+m) % n] - values[j])."""
    n = values.shape[0]
    out = np.zeros(n, dtype=np.complex128)
    for m in range(1, n):
        if weights[m] != 0.0:
            out += weights[m] * np.roll(values, -m)
    out -= weights.sum() * values
    return step * out


def phi_apply(values, symbol, t, weights, step):
    """out[j] = step * sum_m w[m] * (e^{i t (s[(j+m)%n] - s[j])} - 1) * values[(j+m)%n]."""
    n = values.shape[0]
    out = np.zeros(n, dtype=np.complex128)
    for m in range(1, n):
        if weights[m] != 0.0:
            phase = np.exp(1j * t * (np.roll(symbol, -m) - symbol)) - 1.0
            out += weights[m] * phase * np.roll(values, -m)
    return step * out
