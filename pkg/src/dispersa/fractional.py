"""Fractional differentiation three ways, plus the Hilbert transform.

* ``riesz_derivative``  -- Fourier multiplier |xi|^s (homogeneous order s).
* ``bessel_derivative`` -- Fourier multiplier (1 + xi^2)^(s/2).
* ``stein_derivative``  -- principal-value singular integral of first
  differences with kernel |y|^(-1-alpha), alpha in (0, 1), normalized by a
  constant c_alpha.

The singular integral and the |xi|^alpha multiplier define the same operator
on nice data; ``calibrate_stein_constant`` fits the normalizing constant
against the multiplier once per (alpha, grid) and is the default mode.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gamma as _gamma
from math import pi, sqrt

import numpy as np

from . import kernels
from .errors import NegativeOrderOnNonzeroMean, ValidationError
from .spectral import (Grid1D, GridFunction, PresetDatum, check_edge_decay,
                       inverse_transform, multiplier_apply, sample, spectrum_of)


@dataclass(frozen=True)
class SteinKernelSpec:
    """Parameters of the singular-integral derivative.

    c_alpha modes: ``"calibrated"`` (fit against the Fourier-side operator on
    a gaussian, the default), ``"formula"`` (closed form, see
    :func:`stein_normalizing_constant`), or an explicit float.
    """

    alpha: float
    epsilon: float | None = None
    c_alpha: float | str = "calibrated"

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValidationError(f"stein alpha must lie in (0, 1), got {self.alpha}")
        if self.epsilon is not None and not self.epsilon > 0:
            raise ValidationError("stein epsilon must be positive")
        if isinstance(self.c_alpha, str) and self.c_alpha not in ("calibrated", "formula"):
            raise ValidationError(f"c_alpha mode unknown: {self.c_alpha!r}")


def riesz_derivative(f: GridFunction, s: float) -> GridFunction:
    """Homogeneous derivative of order s: spectrum multiplied by |xi|^s.

    The zero mode is annihilated for s > 0 and left untouched for s == 0.
    Negative orders require a vanishing mean (relative to the largest
    spectral coefficient); otherwise NegativeOrderOnNonzeroMean is raised
    and the inverse power is never formed.
    """
    if s == 0.0:
        return f
    grid = f.grid
    xi = grid.frequencies
    if s < 0:
        coeffs = spectrum_of(f)
        scale = max(1.0, float(np.max(np.abs(coeffs))))
        if abs(coeffs[0]) > 1e-12 * scale:
            raise NegativeOrderOnNonzeroMean(
                f"order {s} < 0 requires a vanishing mean; "
                f"|mean coefficient| = {abs(coeffs[0]):.3e}")
        m = np.zeros(grid.n, dtype=np.complex128)
        m[1:] = np.abs(xi[1:]) ** s
    else:
        m = np.abs(xi).astype(np.complex128) ** s
        m[0] = 0.0
    return multiplier_apply(f, m, hermitian=True)


def bessel_derivative(f: GridFunction, s: float) -> GridFunction:
    """Inhomogeneous derivative of order s: spectrum times (1 + xi^2)^(s/2)."""
    xi = f.grid.frequencies
    return multiplier_apply(f, (1.0 + xi**2) ** (s / 2.0), hermitian=True)


def hilbert_transform(f: GridFunction) -> GridFunction:
    """Multiplier -i*sgn(xi); the zero mode is annihilated."""
    xi = f.grid.frequencies
    return multiplier_apply(f, -1j * np.sign(xi), hermitian=True)


# ---------------------------------------------------------------------------
# normalizing constants
# ---------------------------------------------------------------------------

def stein_normalizing_constant(alpha: float) -> float:
    """Closed form pi^(1/2) 2^(-alpha) Gamma(-alpha/2) / Gamma(3/2).

    Negative on (0, 1).  Does not reproduce the |xi|^alpha multiplier exactly
    (see :func:`stein_reference_constant`); kept as the ``"formula"`` mode.
    """
    return sqrt(pi) * 2.0 ** (-alpha) * _gamma(-alpha / 2.0) / _gamma(1.5)


def stein_reference_constant(alpha: float) -> float:
    """The constant that makes the difference quadrature match |xi|^alpha:

        integral (e^{i xi y} - 1) |y|^(-1-alpha) dy = c(alpha) |xi|^alpha,
        c(alpha) = pi^(1/2) 2^(-alpha) Gamma(-alpha/2) / Gamma((1+alpha)/2).

    Calibrated constants converge to this value as the grid refines.
    """
    return sqrt(pi) * 2.0 ** (-alpha) * _gamma(-alpha / 2.0) / _gamma((1.0 + alpha) / 2.0)


@lru_cache(maxsize=None)
def _calibrated_constant(alpha: float, n: int, length: float) -> float:
    grid = Grid1D(n, length)
    g = sample(PresetDatum("gaussian", amplitude=1.0, width=1.0, center=0.0), grid)
    target = riesz_derivative(g, alpha).values
    raw = kernels.stein_apply(
        g.values, kernels.singular_offset_weights(n, grid.dx, alpha), grid.dx)
    return float(np.real(np.vdot(target, raw) / np.vdot(target, target)))


def calibrate_stein_constant(alpha: float, grid: Grid1D) -> float:
    """Least-squares fit of c_alpha on the unit gaussian so the normalized
    quadrature agrees with ``riesz_derivative(., alpha)`` on this grid."""
    if not 0.0 < alpha < 1.0:
        raise ValidationError(f"alpha must lie in (0, 1), got {alpha}")
    return _calibrated_constant(float(alpha), grid.n, grid.length)


def stein_derivative(f: GridFunction, spec: SteinKernelSpec) -> GridFunction:
    """Singular-integral derivative over grid offsets with periodized kernel.

    The principal-value truncation excludes offsets below one grid spacing
    (spec.epsilon must not exceed dx).  Non-decaying input attaches a
    wrap-around warning.
    """
    grid = f.grid
    if f.space != "physical":
        raise ValidationError("stein_derivative expects physical-space input")
    if spec.epsilon is not None and spec.epsilon > grid.dx * (1 + 1e-12):
        raise ValidationError(
            f"stein epsilon {spec.epsilon} exceeds grid spacing {grid.dx}")
    if spec.c_alpha == "calibrated":
        c = calibrate_stein_constant(spec.alpha, grid)
    elif spec.c_alpha == "formula":
        c = stein_normalizing_constant(spec.alpha)
    else:
        c = float(spec.c_alpha)
    warn = check_edge_decay(f, "stein_derivative")
    w = kernels.singular_offset_weights(grid.n, grid.dx, spec.alpha)
    out = kernels.stein_apply(f.values, w, grid.dx) / c
    return f.with_values(out, extra_warnings=warn)


# ---------------------------------------------------------------------------
# norm equivalence
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NormEquivalenceReport:
    alpha: float
    p: float
    lhs: float      # || (1 - d^2/dx^2)^(alpha/2) f ||_p
    rhs: float      # || f ||_p + || D^alpha f ||_p
    ratio: float


def norm_equivalence_report(f: GridFunction, alpha: float, p: float) -> NormEquivalenceReport:
    """Compare the Bessel-norm of order alpha against Lp + homogeneous term.

    Zero data reports ratio 1 by convention.
    """
    if not 0.0 < alpha < 1.0:
        raise ValidationError(f"alpha must lie in (0, 1), got {alpha}")
    if not (p > 1.0 and not np.isinf(p)):
        raise ValidationError(f"p must lie in (1, inf), got {p}")
    lhs = bessel_derivative(f, alpha).lp_norm(p)
    rhs = f.lp_norm(p) + riesz_derivative(f, alpha).lp_norm(p)
    ratio = 1.0 if rhs == 0.0 else lhs / rhs
    return NormEquivalenceReport(alpha=alpha, p=p, lhs=lhs, rhs=rhs, ratio=ratio)
