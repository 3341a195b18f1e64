"""Weighted Sobolev norms, mixed space-time Lebesgue norms, solution norms.

Conventions: spatial integrals are dx-weighted Riemann sums, temporal ones
composite trapezoid over the stored frames; infinite exponents are exact
maxima over samples (no interpolation between frames).  Values below 1e-300
are clamped to zero before high powers to avoid underflow artifacts.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ValidationError
from .fractional import bessel_derivative
from .spectral import (Grid1D, GridFunction, check_edge_decay,
                       coordinate_weight, zero_nyquist)

_UNDERFLOW_FLOOR = 1e-300


@dataclass(frozen=True, eq=False)
class SpaceTimeField:
    """Time-indexed stack of grid functions with a uniform time step."""

    grid: Grid1D
    times: np.ndarray
    values: np.ndarray          # shape (len(times), grid.n), complex
    is_real: bool = False
    warnings: tuple = ()

    def __post_init__(self):
        times = np.ascontiguousarray(self.times, dtype=float)
        vals = np.ascontiguousarray(self.values, dtype=np.complex128)
        if times.ndim != 1 or len(times) < 2:
            raise ValidationError("a SpaceTimeField needs at least two frames")
        if vals.shape != (len(times), self.grid.n):
            raise ValidationError(
                f"frame stack shape {vals.shape} != ({len(times)}, {self.grid.n})")
        steps = np.diff(times)
        if np.any(steps <= 0) or np.max(np.abs(steps - steps[0])) > 1e-9 * steps[0]:
            raise ValidationError("frame times must be uniformly increasing")
        times.flags.writeable = False
        vals.flags.writeable = False
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_frames(cls, frames: Sequence[GridFunction], times) -> "SpaceTimeField":
        grid = frames[0].grid
        warns = ()
        for f in frames:
            if f.grid != grid or f.space != "physical":
                raise ValidationError("all frames must be physical functions on one grid")
            warns = warns + f.warnings
        vals = np.stack([f.values for f in frames])
        return cls(grid=grid, times=np.asarray(times, dtype=float), values=vals,
                   is_real=all(f.is_real for f in frames), warnings=warns)

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])

    @property
    def n_frames(self) -> int:
        return len(self.times)

    def frame(self, i: int) -> GridFunction:
        return GridFunction(self.grid, self.values[i], space="physical",
                            is_real=self.is_real, warnings=self.warnings)

    def imag_sup(self) -> float:
        return float(np.max(np.abs(self.values.imag)))

    def map_multiplier(self, m: np.ndarray) -> "SpaceTimeField":
        """Apply one FFT-layout multiplier to every frame."""
        coeffs = np.fft.fft(self.values, axis=1)
        vals = np.fft.ifft(m[None, :] * coeffs, axis=1)
        return SpaceTimeField(self.grid, self.times, vals,
                              is_real=False, warnings=self.warnings)


@dataclass(frozen=True)
class WeightedNormSpec:
    """Sobolev order s and coordinate-weight power r >= 0."""

    s: float
    r: float

    def __post_init__(self):
        if self.r < 0:
            raise ValidationError(f"weight power r must be >= 0, got {self.r}")


def weighted_norm(f: GridFunction, spec: WeightedNormSpec) -> float:
    """``||(1 - d^2/dx^2)^(s/2) f||_2 + || |x|^r f ||_2`` with the tapered weight."""
    sobolev = bessel_derivative(f, spec.s).l2_norm()
    if spec.r == 0.0:
        return sobolev + f.l2_norm()
    for message in check_edge_decay(f, "weighted_norm"):
        warnings.warn(message, stacklevel=2)
    wvals = coordinate_weight(f.grid, spec.r) * f.values
    weight_term = float(np.sqrt(f.grid.dx * np.sum(np.abs(wvals) ** 2)))
    return sobolev + weight_term


# ---------------------------------------------------------------------------
# mixed norms
# ---------------------------------------------------------------------------

def _x_norm(a: np.ndarray, p: float, dx: float) -> np.ndarray:
    if np.isinf(p):
        return a.max(axis=-1)
    a = np.where(a < _UNDERFLOW_FLOOR, 0.0, a)
    return (dx * np.sum(a**p, axis=-1)) ** (1.0 / p)

def _t_norm(a: np.ndarray, q: float, dt: float) -> np.ndarray:
    if np.isinf(q):
        return a.max(axis=0)
    a = np.where(a < _UNDERFLOW_FLOOR, 0.0, a)
    return np.trapezoid(a**q, dx=dt, axis=0) ** (1.0 / q)


def mixed_norm(w: SpaceTimeField, p: float, q: float, order: str = "x-outer") -> float:
    """Mixed Lebesgue norm of a space-time field.

    ``p`` always binds to space and ``q`` to time: ``"x-outer"`` computes
    the L_x^p norm of the per-point L_T^q norms, ``"t-outer"`` the L_T^q
    norm of the per-frame L_x^p norms.
    """
    if not (p >= 1.0 and q >= 1.0):
        raise ValidationError(f"exponents must lie in [1, inf], got p={p}, q={q}")
    a = np.abs(w.values)
    if order == "x-outer":
        inner = _t_norm(a, q, w.dt)            # one value per grid point
        return float(_x_norm(inner, p, w.grid.dx))
    if order == "t-outer":
        inner = _x_norm(a, p, w.grid.dx)       # one value per frame
        return float(_t_norm(inner, q, w.dt))
    raise ValidationError(f"order must be x-outer|t-outer, got {order!r}")


# ---------------------------------------------------------------------------
# solution norms
# ---------------------------------------------------------------------------

def _check_window(w: SpaceTimeField, T: float) -> None:
    t0, t1 = float(w.times[0]), float(w.times[-1])
    tol = 1e-9 * max(1.0, abs(T))
    if not ((abs(t0) <= tol and abs(t1 - T) <= tol)
            or (abs(t0 + T) <= tol and abs(t1 - T) <= tol)):
        raise ValidationError(
            f"frames span [{t0}, {t1}], expected [0, {T}] or [-{T}, {T}]")


def _quarter_derivative_fields(w: SpaceTimeField):
    grid = w.grid
    xi = grid.frequencies
    quarter = np.abs(xi) ** 0.25
    ddx = 1j * zero_nyquist(xi, grid)
    return (w.map_multiplier(quarter),
            w.map_multiplier(ddx),
            w.map_multiplier(quarter * ddx))


def mu1(w: SpaceTimeField, T: float) -> float:
    """Five-term solution norm of the quarter-derivative well-posedness class:

        ||D^(1/4) w||_{Linf_T L2_x} + ||w_x||_{L20_x L5/2_T}
        + ||D^(1/4) w||_{L5_x L10_T} + ||D^(1/4) w_x||_{Linf_x L2_T}
        + ||w||_{L4_x Linf_T}.

    Fractional derivatives enter as single spectral multipliers per frame.
    """
    _check_window(w, T)
    wq, wdx, wqdx = _quarter_derivative_fields(w)
    return (mixed_norm(wq, 2.0, np.inf, "t-outer")
            + mixed_norm(wdx, 20.0, 2.5, "x-outer")
            + mixed_norm(wq, 5.0, 10.0, "x-outer")
            + mixed_norm(wqdx, np.inf, 2.0, "x-outer")
            + mixed_norm(w, 4.0, np.inf, "x-outer"))


def mu2(w: SpaceTimeField, T: float) -> float:
    """mu1 plus ``||w||_{Linf_T L2_x} + ||w_x||_{Linf_x L2_T} + ||w||_{L6_T Linf_x}``."""
    _check_window(w, T)
    ddx = 1j * zero_nyquist(w.grid.frequencies, w.grid)
    wdx = w.map_multiplier(ddx)
    return (mixed_norm(w, 2.0, np.inf, "t-outer")
            + mixed_norm(wdx, np.inf, 2.0, "x-outer")
            + mixed_norm(w, np.inf, 6.0, "t-outer")
            + mu1(w, T))


def mu3(w: SpaceTimeField, T: float, r: float = 0.125) -> float:
    """mu2 plus the weighted term ``|| |x|^r w ||_{Linf_T L2_x}`` (default r = 1/8)."""
    wgt = coordinate_weight(w.grid, r)
    weighted = SpaceTimeField(w.grid, w.times, wgt[None, :] * w.values,
                              is_real=w.is_real, warnings=w.warnings)
    return mu2(w, T) + mixed_norm(weighted, 2.0, np.inf, "t-outer")
