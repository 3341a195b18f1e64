"""Dispersive groups and the pointwise identities they satisfy.

The Airy group ``U(t)`` (multiplier ``e^{i t xi^3}``) commutes exactly with
the first-order weight operator ``x - 3t d^2/dx^2``; for fractional weights
``|x|^alpha`` the commutation picks up a correction term computed by a
frequency-side singular quadrature (``phi_operator``).  The residual
functions measure how well the discrete realizations satisfy those
identities and the L2 bounds on the correction term.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from . import kernels
from .errors import ValidationError, ZeroData
from .fractional import riesz_derivative
from .spectral import (Grid1D, GridFunction, PresetDatum, check_edge_decay,
                       continuum_spectrum, coordinate_weight,
                       from_continuum_spectrum, inverse_transform,
                       multiplier_apply, sample, spectrum_of, zero_nyquist)


def _cubic(xi):
    return xi**3


@dataclass(frozen=True)
class PhasePolynomial:
    """Real odd dispersion symbol together with a time.

    ``symbol`` maps frequencies to the real phase rate; the propagator is the
    multiplier ``e^{i t symbol(xi)}``.  Default is the Airy symbol ``xi^3``;
    ``dgbo`` gives ``xi |xi|^(1+a)`` for ``a`` in ``[0, 1)``.
    """

    t: float
    symbol: Callable[[np.ndarray], np.ndarray] = _cubic
    label: str = "airy"

    @classmethod
    def airy(cls, t: float) -> "PhasePolynomial":
        return cls(t=t)

    @classmethod
    def dgbo(cls, t: float, a: float) -> "PhasePolynomial":
        if not 0.0 <= a < 1.0:
            raise ValidationError(f"dgbo exponent a must lie in [0, 1), got {a}")
        return cls(t=t, symbol=lambda xi: xi * np.abs(xi) ** (1.0 + a),
                   label=f"dgbo(a={a})")

    def symbol_values(self, grid: Grid1D, ascending: bool = False) -> np.ndarray:
        """Symbol on the grid frequencies, Nyquist mode zeroed (odd symbol)."""
        raw = np.asarray(self.symbol(grid.frequencies))
        if np.iscomplexobj(raw) and np.max(np.abs(raw.imag)) > 1e-12 * max(1.0, np.max(np.abs(raw))):
            raise ValidationError("phase symbol must be real-valued on the frequency grid")
        sig = raw.real.astype(float)
        k = np.arange(grid.n)
        defect = sig[(-k) % grid.n] + sig
        defect[grid.n // 2] = 0.0  # the Nyquist mode is its own mirror image
        if np.max(np.abs(defect)) > 1e-9 * max(1.0, np.max(np.abs(sig))):
            raise ValidationError("phase symbol must be odd on the frequency grid")
        sig = zero_nyquist(sig, grid)
        return np.fft.fftshift(sig) if ascending else sig

    def multiplier(self, grid: Grid1D) -> np.ndarray:
        return np.exp(1j * self.t * self.symbol_values(grid))


def airy_propagate(f: GridFunction, t: float) -> GridFunction:
    """Unitary Airy evolution: spectrum times ``e^{i t xi^3}``.

    t = 0 returns the input unchanged (the group identity, bitwise).
    """
    if t == 0.0:
        return f
    return multiplier_apply(f, PhasePolynomial.airy(t).multiplier(f.grid),
                            hermitian=True)


def dgbo_propagate(f: GridFunction, t: float, a: float) -> GridFunction:
    """Unitary evolution with symbol ``xi |xi|^(1+a)``, ``a`` in ``[0, 1)``."""
    if not 0.0 <= a < 1.0:
        raise ValidationError(f"dgbo exponent a must lie in [0, 1), got {a}")
    if t == 0.0:
        return f
    return multiplier_apply(f, PhasePolynomial.dgbo(t, a).multiplier(f.grid),
                            hermitian=True)


def gamma_apply(f: GridFunction, t: float) -> GridFunction:
    """Weight operator transported by the Airy flow: ``x f - 3 t f''``.

    Coordinate multiplication needs edge decay; failing input gets a
    wrap-around warning.
    """
    grid = f.grid
    if f.space != "physical":
        raise ValidationError("gamma_apply expects physical-space input")
    warn = check_edge_decay(f, "gamma_apply")
    second = multiplier_apply(f, -grid.frequencies.astype(np.complex128) ** 2,
                              hermitian=True)
    vals = grid.points * f.values - 3.0 * t * second.values
    return f.with_values(vals, extra_warnings=warn)


# ---------------------------------------------------------------------------
# identity residual reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IdentityResidualReport:
    """L2 residual of a pointwise identity plus the associated norm-bound ratio.

    ``lhs_l2`` is the norm of the identity's left-hand side (the quantity the
    residual is naturally compared against); ``bound_ratio`` is the correction
    term's norm divided by its claimed bound, or the relative residual for
    identities without a correction term.
    """

    t: float
    residual_l2: float
    lhs_l2: float
    bound_ratio: float
    alpha: float | None = None
    beta: float | None = None
    grid: dict | None = None
    warnings: tuple = ()

    @property
    def relative_residual(self) -> float:
        if self.lhs_l2 == 0.0:
            return 0.0 if self.residual_l2 == 0.0 else float("inf")
        return self.residual_l2 / self.lhs_l2


def gamma_commutation_residual(v0: GridFunction, t: float) -> IdentityResidualReport:
    """Residual of ``(x - 3t d^2)(U(t) v0) == U(t)(x v0)`` in L2.

    Exact on the line; the discrete residual measures boundary truncation
    only, so it vanishes at t = 0 and grows with the dispersed tail.
    """
    u = airy_propagate(v0, t)
    lhs = gamma_apply(u, t)
    xv = v0.with_values(v0.grid.points * v0.values)
    rhs = airy_propagate(xv, t)
    residual = float(np.sqrt(v0.grid.dx * np.sum(np.abs(lhs.values - rhs.values) ** 2)))
    ref = rhs.l2_norm()
    ratio = 0.0 if ref == 0.0 else residual / ref
    return IdentityResidualReport(
        t=t, residual_l2=residual, lhs_l2=ref, bound_ratio=ratio,
        grid=v0.grid.descriptor(), warnings=lhs.warnings)


# ---------------------------------------------------------------------------
# fractional-weight commutator
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _commutator_constant(alpha: float, n: int, length: float) -> float:
    """Normalizing constant of the frequency-side difference quadrature,
    fitted so that it realizes multiplication by |x|^alpha on the gaussian."""
    grid = Grid1D(n, length)
    g = sample(PresetDatum("gaussian", amplitude=1.0, width=1.0, center=0.0), grid)
    uhat = continuum_spectrum(g)
    w = kernels.singular_offset_weights(n, grid.dxi, alpha)
    raw = kernels.stein_apply(uhat, w, grid.dxi)
    realized = inverse_transform(from_continuum_spectrum(grid, raw)).values
    target = coordinate_weight(grid, alpha) * g.values
    return float(np.real(np.vdot(target, realized) / np.vdot(target, target)))


def calibrate_commutator_constant(alpha: float, grid: Grid1D) -> float:
    if not 0.0 < alpha < 1.0:
        raise ValidationError(f"alpha must lie in (0, 1), got {alpha}")
    return _commutator_constant(float(alpha), grid.n, grid.length)


def phi_operator(u0: GridFunction, t: float, alpha: float,
                 phase: PhasePolynomial | None = None,
                 c_alpha: float | str = "calibrated") -> GridFunction:
    """Frequency-side commutator of ``|x|^alpha`` with the phase flow.

    Computes, on the ascending frequency grid with spacing dxi and the
    eta = 0 term excluded,

        Phi(uhat)(xi) = (1/c_alpha) * sum_eta
            (e^{i t (sigma(xi+eta) - sigma(xi))} - 1) / |eta|^(1+alpha)
            * uhat(xi+eta) * dxi,

    with periodized kernel weights and wrapped frequency indexing.  Returns a
    spectral-space GridFunction: its inverse transform is the physical
    correction term entering the weighted identities.  At t = 0 the kernel
    vanishes identically.
    """
    if not 0.0 < alpha < 1.0:
        raise ValidationError(f"alpha must lie in (0, 1), got {alpha}")
    grid = u0.grid
    phase = phase if phase is not None else PhasePolynomial.airy(t)
    uhat = continuum_spectrum(u0)
    edge = np.max(np.abs(uhat[[0, -1]])) / (np.max(np.abs(uhat)) or 1.0)
    warn = ()
    if edge > 1e-10:
        warn = (f"frequency-side tail {edge:.3e}: u0 is under-resolved",)
    if isinstance(c_alpha, str):
        if c_alpha != "calibrated":
            raise ValidationError(f"phi c_alpha mode unknown: {c_alpha!r}")
        c = calibrate_commutator_constant(alpha, grid)
    else:
        c = float(c_alpha)
    sig = phase.symbol_values(grid, ascending=True)
    w = kernels.singular_offset_weights(grid.n, grid.dxi, alpha)
    vals = kernels.phi_apply(uhat, sig, t, w, grid.dxi) / c
    return from_continuum_spectrum(grid, vals, warnings=u0.warnings + warn)


def weighted_identity_residual(u0: GridFunction, t: float, alpha: float,
                               phase: PhasePolynomial | None = None) -> IdentityResidualReport:
    """Residual of the fractional-weight commutation identity

        |x|^alpha U(t) u0 = U(t)(|x|^alpha u0) + U(t) (Phi(uhat0))^v

    in L2, with the tapered coordinate weight.  ``bound_ratio`` is
    ``||(Phi(uhat0))^v||_2 / ((1+|t|)(||u0||_2 + ||D^(2 alpha) u0||_2))``.
    """
    if not 0.0 < alpha < 1.0:
        raise ValidationError(f"alpha must lie in (0, 1), got {alpha}")
    grid = u0.grid
    phase = phase if phase is not None else PhasePolynomial.airy(t)
    mult = np.exp(1j * t * phase.symbol_values(grid))
    wgt = coordinate_weight(grid, alpha)

    flow = multiplier_apply(u0, mult, hermitian=True)
    term1 = flow.with_values(wgt * flow.values)
    term2 = multiplier_apply(u0.with_values(wgt * u0.values), mult, hermitian=True)
    phi_phys = inverse_transform(phi_operator(u0, t, alpha, phase))
    term3 = multiplier_apply(phi_phys, mult)

    diff = term1.values - term2.values - term3.values
    residual = float(np.sqrt(grid.dx * np.sum(np.abs(diff) ** 2)))
    denom = (1.0 + abs(t)) * (u0.l2_norm() + riesz_derivative(u0, 2.0 * alpha).l2_norm())
    warn = u0.warnings + check_edge_decay(flow, "weighted identity (dispersed flow)")
    return IdentityResidualReport(
        t=t, alpha=alpha, residual_l2=residual, lhs_l2=term1.l2_norm(),
        bound_ratio=phi_phys.l2_norm() / denom,
        grid=grid.descriptor(), warnings=warn)


def weighted_identity_residual_beta(u0: GridFunction, t: float, alpha: float,
                                    beta: float) -> IdentityResidualReport:
    """Residual of the differentiated weight identity

        D^beta(|x|^alpha U(t) u0)
            = U(t) D^beta(|x|^alpha u0) + U(t) D^beta (Phi(uhat0))^v

    for 0 < beta < alpha.  ``bound_ratio`` uses
    ``(1+|t|)(||u0||_2 + ||D^(beta+2 alpha) u0||_2)``.
    """
    if not 0.0 < beta < alpha:
        raise ValidationError(
            f"beta must lie in (0, alpha) = (0, {alpha}), got {beta}")
    grid = u0.grid
    phase = PhasePolynomial.airy(t)
    mult = np.exp(1j * t * phase.symbol_values(grid))
    wgt = coordinate_weight(grid, alpha)

    flow = multiplier_apply(u0, mult, hermitian=True)
    lhs = riesz_derivative(flow.with_values(wgt * flow.values), beta)
    rhs1 = multiplier_apply(riesz_derivative(u0.with_values(wgt * u0.values), beta), mult)
    phi_phys = inverse_transform(phi_operator(u0, t, alpha, phase))
    dbeta_phi = riesz_derivative(phi_phys, beta)
    rhs2 = multiplier_apply(dbeta_phi, mult)

    diff = lhs.values - rhs1.values - rhs2.values
    residual = float(np.sqrt(grid.dx * np.sum(np.abs(diff) ** 2)))
    denom = (1.0 + abs(t)) * (u0.l2_norm()
                              + riesz_derivative(u0, beta + 2.0 * alpha).l2_norm())
    warn = u0.warnings + check_edge_decay(flow, "weighted identity (dispersed flow)")
    return IdentityResidualReport(
        t=t, alpha=alpha, beta=beta, residual_l2=residual, lhs_l2=lhs.l2_norm(),
        bound_ratio=dbeta_phi.l2_norm() / denom,
        grid=grid.descriptor(), warnings=warn)


# ---------------------------------------------------------------------------
# space-time integrability of the free evolution
# ---------------------------------------------------------------------------

def strichartz_ratio(u0: GridFunction, t_window: float, n_times: int) -> float:
    """Sixth-root of the trapezoid quadrature of ``||U(t) u0||_inf^6`` over
    ``[-t_window, t_window]``, divided by ``||u0||_2``.

    Scale-invariant: both sides are 1-homogeneous in u0.
    """
    norm = u0.l2_norm()
    if norm == 0.0:
        raise ZeroData("strichartz_ratio requires nonzero data")
    if n_times < 2:
        raise ValidationError("n_times must be at least 2")
    grid = u0.grid
    sig = PhasePolynomial.airy(1.0).symbol_values(grid)
    coeffs = spectrum_of(u0)
    times = np.linspace(-t_window, t_window, n_times)
    sup6 = np.empty(n_times)
    for i, t in enumerate(times):
        vals = np.fft.ifft(np.exp(1j * t * sig) * coeffs) * np.sqrt(grid.n)
        sup6[i] = np.max(np.abs(vals)) ** 6
    return float(np.trapezoid(sup6, times) ** (1.0 / 6.0) / norm)
