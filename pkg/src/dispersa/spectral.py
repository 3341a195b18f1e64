"""Uniform periodic grids, unitary transforms, preset data, multipliers.

Everything downstream consumes the two value types defined here:

* :class:`Grid1D` -- an even-sized uniform grid on ``[-L/2, L/2)`` together
  with its dual frequency set ``xi_k = 2*pi*k/L``.
* :class:`GridFunction` -- complex samples on a grid, either in physical
  space or as unitary DFT coefficients, with a real-valuedness flag and an
  attached tuple of warnings.

Transform convention: forward and inverse each carry ``1/sqrt(n)`` so that
round trips are exact and the dx-weighted discrete L2 norm is preserved
(Parseval).  Frequencies are kept in FFT layout; ``frequencies_sorted``
gives the ascending view used by frequency-side quadratures.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Callable, Iterable

import numpy as np

from .errors import NonFiniteMultiplier, ValidationError

#: Relative edge amplitude above which sampled/weighted data is considered to
#: wrap around the periodic boundary.
EDGE_DECAY_TOL = 1e-14

#: Fraction of points (per side) over which coordinate weights are tapered.
TAPER_FRACTION = 0.05

WRAP_AROUND = "wrap-around"


@dataclass(frozen=True)
class Grid1D:
    """Uniform periodic grid standing in for the real line.

    Points are ``x_j = -L/2 + j*L/n``; frequencies are ``2*pi*k/L`` for
    ``k = -n/2 .. n/2-1`` (stored in FFT layout, single Nyquist mode at
    ``-n/2``).
    """

    n: int
    length: float

    def __post_init__(self):
        if self.n < 2 or self.n % 2 != 0:
            raise ValidationError(f"grid.n must be even and >= 2, got {self.n}")
        if not self.length > 0:
            raise ValidationError(f"grid.length must be positive, got {self.length}")

    @property
    def dx(self) -> float:
        return self.length / self.n

    @property
    def dxi(self) -> float:
        return 2.0 * np.pi / self.length

    @cached_property
    def points(self) -> np.ndarray:
        x = -0.5 * self.length + self.dx * np.arange(self.n)
        x.flags.writeable = False
        return x

    @cached_property
    def frequencies(self) -> np.ndarray:
        xi = 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx)
        xi.flags.writeable = False
        return xi

    @cached_property
    def frequencies_sorted(self) -> np.ndarray:
        xi = np.fft.fftshift(self.frequencies)
        xi.flags.writeable = False
        return xi

    def descriptor(self) -> dict:
        return {"n": self.n, "length": self.length, "taper_fraction": TAPER_FRACTION}


DEFAULT_GRID = Grid1D(1024, 100.0)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Complex samples of a function on a :class:`Grid1D`.

    ``space`` is ``"physical"`` or ``"spectral"``; spectral values are unitary
    DFT coefficients in FFT layout.  ``is_real`` marks functions that are
    real-valued in physical space (conjugate-symmetric spectrum).
    """

    grid: Grid1D
    values: np.ndarray
    space: str = "physical"
    is_real: bool = False
    warnings: tuple = ()

    def __post_init__(self):
        v = np.ascontiguousarray(self.values, dtype=np.complex128)
        if v.shape != (self.grid.n,):
            raise ValidationError(
                f"values shape {v.shape} does not match grid n={self.grid.n}")
        if self.space not in ("physical", "spectral"):
            raise ValidationError(f"space must be physical|spectral, got {self.space!r}")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    # -- norms ------------------------------------------------------------
    def l2_norm(self) -> float:
        """dx-weighted discrete L2 norm (approximates the line integral)."""
        return float(np.sqrt(self.grid.dx * np.sum(np.abs(self.values) ** 2)))

    def lp_norm(self, p: float) -> float:
        if np.isinf(p):
            return self.sup_norm()
        a = np.abs(self.values)
        a = np.where(a < 1e-300, 0.0, a)
        return float((self.grid.dx * np.sum(a**p)) ** (1.0 / p))

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def imag_sup(self) -> float:
        return float(np.max(np.abs(self.values.imag)))

    # -- plumbing ----------------------------------------------------------
    def with_values(self, values, is_real=None, extra_warnings=()) -> "GridFunction":
        return GridFunction(
            grid=self.grid,
            values=values,
            space=self.space,
            is_real=self.is_real if is_real is None else is_real,
            warnings=self.warnings + tuple(extra_warnings),
        )

    def with_warning(self, message: str) -> "GridFunction":
        return replace(self, warnings=self.warnings + (message,))

    def __add__(self, other):
        self._check_compatible(other)
        return GridFunction(self.grid, self.values + other.values, self.space,
                            self.is_real and other.is_real,
                            self.warnings + other.warnings)

    def __sub__(self, other):
        self._check_compatible(other)
        return GridFunction(self.grid, self.values - other.values, self.space,
                            self.is_real and other.is_real,
                            self.warnings + other.warnings)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return GridFunction(self.grid, scalar * self.values, self.space,
                            self.is_real and float(np.imag(scalar)) == 0.0,
                            self.warnings)

    __rmul__ = __mul__

    def _check_compatible(self, other):
        if self.grid != other.grid or self.space != other.space:
            raise ValidationError("operands live on different grids or spaces")


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PresetDatum:
    """Deterministic initial data.

    kind:
        ``gaussian(amplitude, width, center)`` -- ``A*exp(-(x-c)^2/(2 w^2))``;
        ``sech(amplitude, scale, speed)`` -- ``A*sech(x/scale)``, ``speed``
        records the intended traveling-wave speed for solver tests;
        ``cosine(mode)`` -- ``A*cos(2*pi*mode*x/L)``;
        ``zero``.
    """

    kind: str
    amplitude: float = 1.0
    width: float = 1.0
    center: float = 0.0
    scale: float = 1.0
    speed: float = 0.0
    mode: int = 0

    def validate(self, grid: Grid1D | None = None) -> None:
        if self.kind not in ("gaussian", "sech", "cosine", "zero"):
            raise ValidationError(f"datum.kind unknown: {self.kind!r}")
        if self.kind == "gaussian" and not self.width > 0:
            raise ValidationError("datum.width must be positive")
        if self.kind == "sech" and not self.scale > 0:
            raise ValidationError("datum.scale must be positive")
        if self.kind == "cosine":
            if self.mode != int(self.mode):
                raise ValidationError("datum.mode must be an integer")
            if grid is not None and abs(self.mode) >= grid.n // 2:
                raise ValidationError(
                    f"datum.mode |{self.mode}| must be < n/2 = {grid.n // 2}")


def sample(preset: PresetDatum, grid: Grid1D) -> GridFunction:
    """Sample a preset on a grid.

    Gaussian and sech samples whose relative edge amplitude exceeds
    ``EDGE_DECAY_TOL`` get a wrap-around warning attached (not an error).
    """
    preset.validate(grid)
    x = grid.points
    if preset.kind == "zero":
        v = np.zeros(grid.n)
    elif preset.kind == "gaussian":
        v = preset.amplitude * np.exp(-((x - preset.center) ** 2) / (2.0 * preset.width**2))
    elif preset.kind == "sech":
        v = preset.amplitude / np.cosh(x / preset.scale)
    else:  # cosine
        v = preset.amplitude * np.cos(2.0 * np.pi * preset.mode * x / grid.length)
    f = GridFunction(grid, v, space="physical", is_real=True)
    if preset.kind in ("gaussian", "sech"):
        ratio = edge_decay_ratio(f)
        if ratio > EDGE_DECAY_TOL:
            f = f.with_warning(
                f"{WRAP_AROUND}: relative edge amplitude {ratio:.3e} exceeds "
                f"{EDGE_DECAY_TOL:.0e}")
    return f


def edge_decay_ratio(f: GridFunction) -> float:
    """Relative amplitude at the domain boundary (0 for identically zero)."""
    a = np.abs(f.values)
    peak = a.max()
    if peak == 0.0:
        return 0.0
    return float(max(a[0], a[-1]) / peak)


def check_edge_decay(f: GridFunction, context: str) -> tuple:
    """Return a warning tuple when f fails the edge-decay criterion."""
    ratio = edge_decay_ratio(f)
    if ratio > EDGE_DECAY_TOL:
        return (f"{WRAP_AROUND} in {context}: relative edge amplitude {ratio:.3e}",)
    return ()


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------

def forward_transform(f: GridFunction) -> GridFunction:
    """Unitary DFT; physical samples -> spectral coefficients."""
    if f.space != "physical":
        raise ValidationError("forward_transform expects physical-space input")
    coeffs = np.fft.fft(f.values) / np.sqrt(f.grid.n)
    return GridFunction(f.grid, coeffs, space="spectral",
                        is_real=f.is_real, warnings=f.warnings)


def inverse_transform(f: GridFunction) -> GridFunction:
    """Unitary inverse DFT; spectral coefficients -> physical samples."""
    if f.space != "spectral":
        raise ValidationError("inverse_transform expects spectral-space input")
    vals = np.fft.ifft(f.values) * np.sqrt(f.grid.n)
    return GridFunction(f.grid, vals, space="physical",
                        is_real=f.is_real, warnings=f.warnings)


def spectrum_of(f: GridFunction) -> np.ndarray:
    """Unitary coefficients of f regardless of its current space."""
    if f.space == "spectral":
        return f.values
    return np.fft.fft(f.values) / np.sqrt(f.grid.n)


def multiplier_apply(f: GridFunction, m: Callable | np.ndarray,
                     hermitian: bool | None = None) -> GridFunction:
    """Apply a Fourier multiplier ``m(xi)``; the result stays in f's space.

    ``m`` is a callable evaluated on the FFT-layout frequencies or a
    precomputed array in that layout.  Non-finite multiplier values are
    rejected.  The real-valuedness flag survives only Hermitian multipliers
    (``m(-xi) == conj(m(xi))`` on the grid); operators that are Hermitian by
    construction pass ``hermitian=True`` to skip the numeric detection,
    which cannot distinguish rounding noise from genuine asymmetry on fast
    phases.
    """
    grid = f.grid
    marr = np.asarray(m(grid.frequencies) if callable(m) else m, dtype=np.complex128)
    if marr.shape != (grid.n,):
        raise ValidationError(f"multiplier shape {marr.shape} != ({grid.n},)")
    if not np.all(np.isfinite(marr)):
        raise NonFiniteMultiplier("multiplier produced non-finite values on the grid")
    coeffs = spectrum_of(f) * marr
    if hermitian is None:
        hermitian = _is_hermitian(marr, grid.n)
    still_real = f.is_real and hermitian
    if f.space == "spectral":
        return GridFunction(grid, coeffs, space="spectral",
                            is_real=still_real, warnings=f.warnings)
    vals = np.fft.ifft(coeffs) * np.sqrt(grid.n)
    return GridFunction(grid, vals, space="physical",
                        is_real=still_real, warnings=f.warnings)


def _is_hermitian(marr: np.ndarray, n: int) -> bool:
    k = np.arange(n)
    mirrored = marr[(-k) % n]
    scale = np.max(np.abs(marr)) or 1.0
    if np.max(np.abs(mirrored - np.conj(marr))) > 1e-12 * scale:
        return False
    # the Nyquist mode is its own mirror image; it must carry a real factor
    return abs(marr[n // 2].imag) <= 1e-12 * scale


def zero_nyquist(values: np.ndarray, grid: Grid1D) -> np.ndarray:
    """Zero the unpaired Nyquist entry of an FFT-layout array.

    Standard hygiene for odd symbols (i*xi, xi^3, ...), which have no
    conjugate partner at -n/2; see math.mit.edu/~stevenj/fft-deriv.pdf.
    """
    out = np.array(values, dtype=float, copy=True)
    out[grid.n // 2] = 0.0
    return out


def derivative_multiplier(grid: Grid1D, order: int = 1) -> np.ndarray:
    """(i*xi)^order with the Nyquist mode zeroed for odd orders."""
    xi = grid.frequencies
    if order % 2 == 1:
        xi = zero_nyquist(xi, grid)
    return (1j * xi) ** order


# ---------------------------------------------------------------------------
# continuum-transform helpers
# ---------------------------------------------------------------------------
# The unitary DFT of samples on x_j = -L/2 + j*dx relates to the line Fourier
# transform (convention  fhat(xi) = int f e^{-i xi x} dx) by
#     fhat(xi_k) ~= dx * (-1)^j * sqrt(n) * c_j     (FFT layout index j).
# Frequency-side quadratures work on the ascending-xi view of fhat.

def continuum_spectrum(f: GridFunction) -> np.ndarray:
    """Samples of the line Fourier transform on ``frequencies_sorted``."""
    grid = f.grid
    if f.space != "physical":
        raise ValidationError("continuum_spectrum expects physical-space input")
    sgn = (-1.0) ** np.arange(grid.n)
    return np.fft.fftshift(grid.dx * sgn * np.fft.fft(f.values))


def from_continuum_spectrum(grid: Grid1D, fhat_sorted: np.ndarray,
                            is_real: bool = False, warnings: tuple = ()) -> GridFunction:
    """Spectral-space GridFunction whose inverse transform realizes the
    inverse line transform of ``fhat_sorted`` (ascending-xi samples)."""
    sgn = (-1.0) ** np.arange(grid.n)
    coeffs = np.fft.ifftshift(np.asarray(fhat_sorted, dtype=np.complex128))
    coeffs = coeffs * sgn / (grid.dx * np.sqrt(grid.n))
    return GridFunction(grid, coeffs, space="spectral",
                        is_real=is_real, warnings=tuple(warnings))


# ---------------------------------------------------------------------------
# coordinate weights
# ---------------------------------------------------------------------------

def edge_taper(grid: Grid1D, fraction: float = TAPER_FRACTION) -> np.ndarray:
    """Smooth window equal to 1 except for a sin^2 ramp to 0 over the outer
    ``fraction`` of points on each side."""
    n = grid.n
    m = int(round(fraction * n))
    w = np.ones(n)
    if m > 0:
        ramp = np.sin(0.5 * np.pi * np.arange(m) / m) ** 2
        w[:m] = ramp
        w[n - m:] = ramp[::-1]
    return w


def coordinate_weight(grid: Grid1D, power: float,
                      taper_fraction: float = TAPER_FRACTION) -> np.ndarray:
    """|x|^power on centered coordinates, tapered to zero at the edges to
    suppress wrap-around artifacts on decaying data."""
    return np.abs(grid.points) ** power * edge_taper(grid, taper_fraction)
