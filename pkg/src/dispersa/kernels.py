"""Backend selection and shared setup for the singular-integral kernels.

The two O(n^2) hot loops (physical-side difference quadrature, frequency-side
phase-commutator quadrature) come in a compiled Cython flavor and a NumPy
fallback; the compiled one is used when importable.  Set
``DISPERSA_PURE_PYTHON=1`` to force the fallback.
"""

import os

import numpy as np
from scipy.special import zeta

if os.environ.get("DISPERSA_PURE_PYTHON", ""):
    from . import _kernels_py as _backend
else:
    try:
        from . import _kernels_cy as _backend  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _backend

BACKEND: str = _backend.BACKEND


def singular_offset_weights(n: int, step: float, alpha: float) -> np.ndarray:
    """Periodized kernel weights ``sum_j |y_m + j*P|^(-1-alpha)``, ``P = n*step``.

    Index m is the roll offset; the signed in-box offset is ``m*step`` mapped
    to ``(-P/2, P/2]``.  Weight 0 at m = 0 (principal-value truncation at one
    grid spacing).  Periodizing the kernel keeps the full line mass of the
    heavy ``|y|^(-1-alpha)`` tail on the torus; the image sums are Hurwitz
    zeta values.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    period = n * step
    m = np.arange(n)
    y = np.where(m <= n // 2, m, m - n) * step
    s = 1.0 + alpha
    w = np.zeros(n)
    frac = y[1:] / period
    w[1:] = (np.abs(y[1:]) ** (-s)
             + period ** (-s) * (zeta(s, 1.0 + frac) + zeta(s, 1.0 - frac)))
    return w


def stein_apply(values: np.ndarray, weights: np.ndarray, step: float) -> np.ndarray:
    """Dense difference quadrature: ``step * sum_m w[m] (f_{j+m} - f_j)``."""
    return _backend.stein_apply(
        np.ascontiguousarray(values, dtype=np.complex128),
        np.ascontiguousarray(weights, dtype=np.float64),
        float(step),
    )


def phi_apply(values: np.ndarray, symbol: np.ndarray, t: float,
              weights: np.ndarray, step: float) -> np.ndarray:
    """Dense phase-commutator quadrature
    ``step * sum_m w[m] (e^{i t (sigma_{j+m} - sigma_j)} - 1) f_{j+m}``."""
    return _backend.phi_apply(
        np.ascontiguousarray(values, dtype=np.complex128),
        np.ascontiguousarray(symbol, dtype=np.float64),
        float(t),
        np.ascontiguousarray(weights, dtype=np.float64),
        float(step),
    )
