"""Solvers for the generalized KdV initial-value problem
``u_t + u_xxx + u^k u_x = 0`` on the periodic desk grid.

Two independent routes:

* ``picard_solve`` iterates the retarded integral form

      u(t) = U(t) u0 - int_0^t U(t - t') (u^k u_x)(t') dt',

  with composite trapezoid in t' and every retarded propagation applied as
  an exact multiplier.  The iteration report records the solution-norm of
  each iterate, successive differences, and contraction ratios.

* ``reference_solve`` is a high-accuracy oracle: integrating-factor
  formulation (exact linear phase per step) with classical 4-stage explicit
  stepping of the nonlinear term and 2/3-rule dealiasing.

``solve_global`` extends the Picard route beyond a single existence window
by patching sub-intervals whose length is recomputed from the running
quarter-derivative bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import BlowupDetected, NonConvergence, ValidationError
from .norms import SpaceTimeField, mu1
from .propagators import PhasePolynomial
from .spectral import Grid1D, GridFunction, check_edge_decay, zero_nyquist


@dataclass(frozen=True)
class SolverConfig:
    """Run parameters for the gKdV solvers.

    ``c0`` is the empirical linear-estimate constant entering the existence
    time 1 / (32 c0^6 ||D^(1/4) u0||_2^4); calibrate it with
    ``experiments.calibrate_constants`` (default 1.0 is a placeholder).
    ``picard_tol`` is a sup-in-time L2-in-space tolerance.  ``T_cap`` bounds
    the existence time reported for degenerate data.
    """

    k: int = 2
    dt: float = 1.0 / 256.0
    T: float = 0.25
    n_picard: int = 25
    picard_tol: float = 1e-10
    c0: float = 1.0
    dealias: bool = True
    T_cap: float = 100.0
    blowup_ceiling: float = 1e6

    def __post_init__(self):
        if self.k < 1:
            raise ValidationError(f"solver.k must be >= 1, got {self.k}")
        if not self.dt > 0:
            raise ValidationError("solver.dt must be positive")
        if not self.T > 0:
            raise ValidationError("solver.T must be positive")
        if self.n_picard < 1:
            raise ValidationError("solver.n_picard must be >= 1")
        if not self.c0 > 0:
            raise ValidationError("solver.c0 must be positive")
        if not self.T_cap > 0:
            raise ValidationError("solver.T_cap must be positive")


@dataclass
class ContractionReport:
    """Diagnostics of one Picard run on a single existence window."""

    T_used: float
    ball_radius: float                       # 2 c0 ||D^(1/4) u0||_2
    iterate_mu1: list = field(default_factory=list)
    successive_diffs: list = field(default_factory=list)        # mu1 metric
    successive_diffs_sup_l2: list = field(default_factory=list)  # stopping metric
    contraction_ratios: list = field(default_factory=list)
    converged: bool = False
    warnings: tuple = ()


def quarter_derivative_norm(u0: GridFunction) -> float:
    """||D^(1/4) u0||_2, the datum size controlling the existence time."""
    xi = u0.grid.frequencies
    coeffs = np.fft.fft(u0.values) / np.sqrt(u0.grid.n)
    return float(np.sqrt(u0.grid.dx * np.sum(np.abs(xi) ** 0.5 * np.abs(coeffs) ** 2)))


def local_existence_time(u0: GridFunction, cfg: SolverConfig) -> float:
    """min(1 / (32 c0^6 ||D^(1/4) u0||_2^4), T_cap); T_cap for zero data."""
    size = quarter_derivative_norm(u0)
    if size == 0.0:
        return cfg.T_cap
    return min(1.0 / (32.0 * cfg.c0**6 * size**4), cfg.T_cap)


# ---------------------------------------------------------------------------
# shared spectral machinery
# ---------------------------------------------------------------------------

def _dealias_mask(grid: Grid1D, enabled: bool) -> np.ndarray:
    if not enabled:
        return np.ones(grid.n)
    k = np.fft.fftfreq(grid.n, d=1.0 / grid.n)
    return (np.abs(k) <= grid.n // 3).astype(float)


def _nonlinear_term(coeffs: np.ndarray, grid: Grid1D, k: int,
                    mask: np.ndarray, ddx: np.ndarray) -> np.ndarray:
    """Spectral coefficients of -u^k u_x, products dealiased by the 2/3 rule."""
    rn = np.sqrt(grid.n)
    u = np.fft.ifft(mask * coeffs) * rn
    ux = np.fft.ifft(mask * ddx * coeffs) * rn
    return -mask * (np.fft.fft(u**k * ux) / rn)


def _check_ceiling(vals: np.ndarray, t: float, ceiling: float) -> None:
    sup = float(np.max(np.abs(vals)))
    if not np.isfinite(sup) or sup > ceiling:
        raise BlowupDetected(
            f"sup norm {sup:.3e} exceeded ceiling {ceiling:.3e} at t = {t:.6g}",
            time=t, sup_norm=sup)


# ---------------------------------------------------------------------------
# reference integrator (oracle)
# ---------------------------------------------------------------------------

def reference_solve(u0: GridFunction, cfg: SolverConfig,
                    record_stride: int = 1) -> SpaceTimeField:
    """March over [0, cfg.T] with step cfg.dt, recording every
    ``record_stride``-th step (the initial frame included).

    The linear phase is exact per step; the nonlinear term is advanced by
    the classical 4-stage scheme, fourth order in dt.
    """
    grid = u0.grid
    if u0.space != "physical":
        raise ValidationError("reference_solve expects physical-space data")
    nsteps = int(round(cfg.T / cfg.dt))
    if abs(nsteps * cfg.dt - cfg.T) > 1e-9 * cfg.T or nsteps < 1:
        raise ValidationError(
            f"solver.T = {cfg.T} is not a positive multiple of solver.dt = {cfg.dt}")
    if nsteps % record_stride != 0:
        raise ValidationError("record_stride must divide the step count")

    mask = _dealias_mask(grid, cfg.dealias)
    ddx = 1j * zero_nyquist(grid.frequencies, grid)
    sig = PhasePolynomial.airy(1.0).symbol_values(grid)
    half = np.exp(1j * (cfg.dt / 2.0) * sig)
    full = half * half
    rn = np.sqrt(grid.n)

    coeffs = np.fft.fft(u0.values) / rn
    frames = [u0.values.copy()]
    times = [0.0]
    warn = u0.warnings + check_edge_decay(u0, "reference_solve datum")
    for step in range(nsteps):
        n1 = _nonlinear_term(coeffs, grid, cfg.k, mask, ddx)
        stage_a = half * (coeffs + (cfg.dt / 2.0) * n1)
        n2 = _nonlinear_term(stage_a, grid, cfg.k, mask, ddx)
        stage_b = half * coeffs + (cfg.dt / 2.0) * n2
        n3 = _nonlinear_term(stage_b, grid, cfg.k, mask, ddx)
        stage_c = full * coeffs + cfg.dt * half * n3
        n4 = _nonlinear_term(stage_c, grid, cfg.k, mask, ddx)
        coeffs = full * coeffs + (cfg.dt / 6.0) * (full * n1 + 2.0 * half * (n2 + n3) + n4)
        t = (step + 1) * cfg.dt
        vals = np.fft.ifft(coeffs) * rn
        _check_ceiling(vals, t, cfg.blowup_ceiling)
        if (step + 1) % record_stride == 0:
            frames.append(vals)
            times.append(t)
    return SpaceTimeField(grid, np.array(times), np.stack(frames),
                          is_real=u0.is_real, warnings=warn)


# ---------------------------------------------------------------------------
# Picard iteration on the integral equation
# ---------------------------------------------------------------------------

def picard_solve(u0: GridFunction, cfg: SolverConfig, *,
                 override_horizon: bool = False,
                 nonlinear: bool = True) -> tuple[SpaceTimeField, ContractionReport]:
    """Iterate the retarded integral map starting from the free evolution.

    The horizon cfg.T must not exceed ``local_existence_time`` unless
    ``override_horizon`` is set.  ``nonlinear=False`` disables the forcing
    term (consistency switch: the output then equals the free evolution).
    Raises NonConvergence when contraction ratios exceed 1 three times in a
    row; the exception carries the last iterate.
    """
    grid = u0.grid
    if u0.space != "physical":
        raise ValidationError("picard_solve expects physical-space data")
    t_exist = local_existence_time(u0, cfg)
    if cfg.T > t_exist * (1 + 1e-12) and not override_horizon:
        raise ValidationError(
            f"solver.T = {cfg.T:.6g} exceeds the existence time {t_exist:.6g}; "
            "pass override_horizon=True to force")
    n_frames = int(round(cfg.T / cfg.dt))
    if n_frames < 1 or abs(n_frames * cfg.dt - cfg.T) > 1e-9 * cfg.T:
        raise ValidationError(
            f"solver.T = {cfg.T} is not a positive multiple of solver.dt = {cfg.dt}")

    mask = _dealias_mask(grid, cfg.dealias)
    ddx = 1j * zero_nyquist(grid.frequencies, grid)
    sig = PhasePolynomial.airy(1.0).symbol_values(grid)
    rn = np.sqrt(grid.n)
    times = cfg.dt * np.arange(n_frames + 1)
    forward = np.exp(1j * np.outer(times, sig))     # U(t_i) rows
    backward = np.conj(forward)                     # U(-t_l) rows

    u0_hat = np.fft.fft(u0.values) / rn
    free = forward * u0_hat[None, :]
    warn = u0.warnings + check_edge_decay(u0, "picard_solve datum")

    ball_radius = 2.0 * cfg.c0 * quarter_derivative_norm(u0)
    report = ContractionReport(T_used=cfg.T, ball_radius=ball_radius, warnings=warn)

    def to_field(spectral_frames):
        vals = np.fft.ifft(spectral_frames, axis=1) * rn
        return SpaceTimeField(grid, times, vals, is_real=u0.is_real, warnings=warn)

    current = free.copy()
    field_now = to_field(current)
    report.iterate_mu1.append(mu1(field_now, cfg.T))
    consecutive_expansions = 0

    for _ in range(cfg.n_picard):
        if nonlinear:
            forcing = np.stack([
                _nonlinear_term(current[i], grid, cfg.k, mask, ddx)
                for i in range(n_frames + 1)])
            retarded = backward * forcing           # U(-t_l) F(t_l)
            new = free.copy()
            acc = 0.5 * cfg.dt * retarded[0]
            for i in range(1, n_frames + 1):
                # composite trapezoid of U(t_i - t') F(t') over [0, t_i]
                integral = acc + 0.5 * cfg.dt * retarded[i]
                new[i] = free[i] + forward[i] * integral
                acc += cfg.dt * retarded[i]
        else:
            new = free.copy()

        _check_ceiling(np.fft.ifft(new[-1]) * rn, cfg.T, cfg.blowup_ceiling)
        diff_vals = np.fft.ifft(new - current, axis=1) * rn
        diff_sup_l2 = float(np.max(np.sqrt(grid.dx * np.sum(np.abs(diff_vals) ** 2, axis=1))))
        diff_field = SpaceTimeField(grid, times, diff_vals, warnings=())
        diff_mu1 = mu1(diff_field, cfg.T)

        report.successive_diffs.append(diff_mu1)
        report.successive_diffs_sup_l2.append(diff_sup_l2)
        if len(report.successive_diffs) >= 2 and report.successive_diffs[-2] > 0:
            ratio = diff_mu1 / report.successive_diffs[-2]
            report.contraction_ratios.append(ratio)
            consecutive_expansions = consecutive_expansions + 1 if ratio > 1.0 else 0

        current = new
        field_now = to_field(current)
        report.iterate_mu1.append(mu1(field_now, cfg.T))

        if diff_sup_l2 < cfg.picard_tol:
            report.converged = True
            break
        if consecutive_expansions >= 3:
            raise NonConvergence(
                "contraction ratios exceeded 1 for 3 consecutive iterations",
                field=field_now, reports=[report])

    return field_now, report


def duhamel_map(w: SpaceTimeField, u0: GridFunction, cfg: SolverConfig) -> SpaceTimeField:
    """One application of the integral map to a space-time field (fixed-point
    residual checks)."""
    grid = w.grid
    mask = _dealias_mask(grid, cfg.dealias)
    ddx = 1j * zero_nyquist(grid.frequencies, grid)
    sig = PhasePolynomial.airy(1.0).symbol_values(grid)
    rn = np.sqrt(grid.n)
    times = w.times
    forward = np.exp(1j * np.outer(times, sig))
    u0_hat = np.fft.fft(u0.values) / rn
    free = forward * u0_hat[None, :]
    spectral = np.fft.fft(w.values, axis=1) / rn
    forcing = np.stack([_nonlinear_term(spectral[i], grid, cfg.k, mask, ddx)
                        for i in range(len(times))])
    retarded = np.conj(forward) * forcing
    out = free.copy()
    acc = 0.5 * w.dt * retarded[0]
    for i in range(1, len(times)):
        out[i] = free[i] + forward[i] * (acc + 0.5 * w.dt * retarded[i])
        acc += w.dt * retarded[i]
    return SpaceTimeField(grid, times, np.fft.ifft(out, axis=1) * rn,
                          is_real=w.is_real, warnings=w.warnings)


# ---------------------------------------------------------------------------
# conserved quantities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConservedTrajectory:
    times: np.ndarray
    mass: np.ndarray      # int u dx
    l2: np.ndarray        # ||u||_2
    energy: np.ndarray    # int( (u_x)^2/2 - u^(k+2)/((k+1)(k+2)) ) dx


def conserved_quantities(w: SpaceTimeField, k: int) -> ConservedTrajectory:
    """Per-frame mass, L2 norm, and energy of a (real) solution field."""
    grid = w.grid
    dx = grid.dx
    u = w.values.real
    ddx = 1j * zero_nyquist(grid.frequencies, grid)
    ux = (np.fft.ifft(ddx[None, :] * np.fft.fft(w.values, axis=1), axis=1)).real
    mass = dx * np.sum(u, axis=1)
    l2 = np.sqrt(dx * np.sum(np.abs(w.values) ** 2, axis=1))
    energy = dx * np.sum(0.5 * ux**2 - u ** (k + 2) / ((k + 1) * (k + 2)), axis=1)
    return ConservedTrajectory(times=w.times.copy(), mass=mass, l2=l2, energy=energy)


# ---------------------------------------------------------------------------
# globalization by interval patching
# ---------------------------------------------------------------------------

def solve_global(u0: GridFunction, T_star: float,
                 cfg: SolverConfig) -> tuple[SpaceTimeField, list[ContractionReport]]:
    """Cover [0, T_star] with Picard patches of length
    ``1 / (32 c0^6 K^4)`` where K is the running maximum of
    ``||D^(1/4) u(t)||_2`` over all frames seen so far.

    Patch lengths are snapped down to multiples of cfg.dt so the stitched
    field keeps a uniform time grid.  NonConvergence from a patch aborts
    with the partial trajectory attached to the exception.
    """
    if not T_star > 0:
        raise ValidationError("T_star must be positive")
    grid = u0.grid
    n_total = int(round(T_star / cfg.dt))
    if n_total < 1 or abs(n_total * cfg.dt - T_star) > 1e-9 * T_star:
        raise ValidationError(
            f"T_star = {T_star} is not a positive multiple of solver.dt = {cfg.dt}")

    reports: list[ContractionReport] = []
    all_vals = [u0.values.copy()]
    datum = u0
    running_K = quarter_derivative_norm(u0)
    frames_done = 0
    while frames_done < n_total:
        t_patch = min(1.0 / (32.0 * cfg.c0**6 * running_K**4), cfg.T_cap) \
            if running_K > 0 else cfg.T_cap
        m = max(1, int(np.floor(t_patch / cfg.dt + 1e-9)))
        m = min(m, n_total - frames_done)
        patch_cfg = replace(cfg, T=m * cfg.dt)
        try:
            patch, rep = picard_solve(datum, patch_cfg)
        except NonConvergence as exc:
            partial = SpaceTimeField(
                grid, cfg.dt * np.arange(frames_done + 1), np.stack(all_vals),
                is_real=u0.is_real) if frames_done else None
            raise NonConvergence(
                f"patch starting at t = {frames_done * cfg.dt:.6g} failed: {exc}",
                field=partial, reports=reports + exc.reports) from exc
        reports.append(rep)
        all_vals.extend(patch.values[1:])
        frames_done += m
        datum = patch.frame(patch.n_frames - 1)
        patch_K = max(quarter_derivative_norm(patch.frame(i))
                      for i in range(patch.n_frames))
        running_K = max(running_K, patch_K)

    times = cfg.dt * np.arange(n_total + 1)
    stitched = SpaceTimeField(grid, times, np.stack(all_vals),
                              is_real=u0.is_real, warnings=u0.warnings)
    return stitched, reports


def patch_count_for(u0: GridFunction, T_star: float, cfg: SolverConfig) -> int:
    """Number of patches solve_global uses when the running bound stays at
    its initial value: ceil(T_star / T') with T' snapped down to a dt grid."""
    K = quarter_derivative_norm(u0)
    t_patch = min(1.0 / (32.0 * cfg.c0**6 * K**4), cfg.T_cap) if K > 0 else cfg.T_cap
    m = max(1, int(np.floor(t_patch / cfg.dt + 1e-9)))
    return int(np.ceil(int(round(T_star / cfg.dt)) / m))


# ---------------------------------------------------------------------------
# exact traveling wave (k = 2)
# ---------------------------------------------------------------------------

def solitary_wave(grid: Grid1D, speed: float, center: float = 0.0,
                  time: float = 0.0) -> GridFunction:
    """Exact solitary wave of the k = 2 equation.

    Substituting ``u = A sech(B(x - c t))`` into ``u_t + u_xxx + u^2 u_x = 0``
    forces ``A = sqrt(6 c)`` and ``B = sqrt(c)`` for speed c > 0; the profile
    travels right at speed c with fixed shape.
    """
    if not speed > 0:
        raise ValidationError("solitary wave speed must be positive")
    b = np.sqrt(speed)
    arg = b * (grid.points - center - speed * time)
    return GridFunction(grid, np.sqrt(6.0 * speed) / np.cosh(arg),
                        space="physical", is_real=True)
