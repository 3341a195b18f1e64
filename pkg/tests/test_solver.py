import numpy as np
import pytest

from dispersa import (Grid1D, GridFunction, PresetDatum, SolverConfig,
                      conserved_quantities, local_existence_time, picard_solve,
                      quarter_derivative_norm, reference_solve, sample,
                      solitary_wave, solve_global)
from dispersa.errors import BlowupDetected, NonConvergence, ValidationError
from dispersa.experiments import linear_flow_field
from dispersa.norms import mu1
from dispersa.solver import duhamel_map, patch_count_for


def small_gaussian(grid):
    return sample(PresetDatum("gaussian", amplitude=0.1, width=1.0), grid)


def sup_l2_distance(a, b):
    assert np.allclose(a.times, b.times)
    d = a.values - b.values
    per_frame = np.sqrt(a.grid.dx * np.sum(np.abs(d) ** 2, axis=1))
    ref = np.sqrt(a.grid.dx * np.sum(np.abs(b.values) ** 2, axis=1))
    return float(per_frame.max()), float(ref.max())


# ---------------------------------------------------------------------------
# existence time
# ---------------------------------------------------------------------------

def test_existence_time_zero_datum(desk_grid):
    cfg = SolverConfig(T_cap=42.0)
    z = sample(PresetDatum("zero"), desk_grid)
    assert local_existence_time(z, cfg) == 42.0


def test_existence_time_formula(circle_grid):
    # unit-size datum: on the 2*pi box the first mode sits at frequency 1,
    # so e^{ix}/sqrt(2 pi) has quarter-derivative norm exactly 1 and the
    # existence time at c0 = 1 is 1/32
    grid = circle_grid
    vals = np.exp(1j * grid.points) / np.sqrt(grid.length)
    u0 = GridFunction(grid, vals)
    assert quarter_derivative_norm(u0) == pytest.approx(1.0, rel=1e-12)
    cfg = SolverConfig(c0=1.0)
    assert local_existence_time(u0, cfg) == pytest.approx(1.0 / 32.0, rel=1e-12)


def test_existence_time_quartic_scaling(desk_grid):
    cfg = SolverConfig(c0=2.0, T_cap=1e9)
    u0 = small_gaussian(desk_grid)
    t1 = local_existence_time(u0, cfg)
    t2 = local_existence_time(2.0 * u0, cfg)
    assert t1 == pytest.approx(16.0 * t2, rel=1e-12)


# ---------------------------------------------------------------------------
# Picard iteration
# ---------------------------------------------------------------------------

def test_picard_zero_datum(desk_grid):
    cfg = SolverConfig(dt=1.0 / 64, T=0.25)
    field, report = picard_solve(sample(PresetDatum("zero"), desk_grid), cfg)
    assert report.converged
    assert len(report.successive_diffs) == 1
    assert np.all(field.values == 0.0)


def test_picard_linear_consistency(desk_grid):
    u0 = small_gaussian(desk_grid)
    cfg = SolverConfig(dt=1.0 / 128, T=6.0 / 128, c0=4.0)
    field, _ = picard_solve(u0, cfg, nonlinear=False)
    free = linear_flow_field(u0, cfg.T, cfg.dt)
    diff = np.max(np.abs(field.values - free.values))
    assert diff <= 1e-12 * np.max(np.abs(free.values))


def test_picard_contraction_and_oracle(desk_grid, calibrated):
    u0 = small_gaussian(desk_grid)
    probe = SolverConfig(c0=calibrated["c0"], dt=1.0 / 256, picard_tol=1e-10)
    n_frames = max(1, int(np.floor(local_existence_time(u0, probe) / probe.dt)))
    cfg = SolverConfig(c0=calibrated["c0"], dt=1.0 / 256, picard_tol=1e-10,
                       T=n_frames * (1.0 / 256))
    field, report = picard_solve(u0, cfg)

    assert report.converged
    assert all(r <= 0.5 for r in report.contraction_ratios)
    assert all(m <= report.ball_radius for m in report.iterate_mu1)
    assert field.imag_sup() <= 1e-10

    ref = reference_solve(u0, SolverConfig(k=2, dt=cfg.dt / 8.0, T=cfg.T),
                          record_stride=8)
    dist, scale = sup_l2_distance(field, ref)
    assert dist <= 1e-5 * scale


def test_picard_fixed_point_residual(desk_grid, calibrated):
    u0 = small_gaussian(desk_grid)
    cfg = SolverConfig(c0=calibrated["c0"], dt=1.0 / 256, T=14.0 / 256,
                       picard_tol=1e-10)
    field, report = picard_solve(u0, cfg)
    assert report.converged
    mapped = duhamel_map(field, u0, cfg)
    from dispersa import SpaceTimeField
    diff = SpaceTimeField(field.grid, field.times, mapped.values - field.values)
    assert mu1(diff, cfg.T) <= 2.0 * cfg.picard_tol


def test_picard_horizon_guard(desk_grid, calibrated):
    u0 = small_gaussian(desk_grid)
    cfg = SolverConfig(c0=calibrated["c0"], dt=1.0 / 64, T=1.0)
    assert local_existence_time(u0, cfg) < 1.0
    with pytest.raises(ValidationError):
        picard_solve(u0, cfg)
    field, _ = picard_solve(u0, cfg, override_horizon=True)
    assert field.n_frames == 65


def test_picard_nonconvergence(small_grid):
    # far outside the contraction regime: tiny c0 admits a huge horizon
    big = sample(PresetDatum("gaussian", amplitude=3.0), small_grid)
    cfg = SolverConfig(c0=0.01, dt=1.0 / 128, T=1.0, n_picard=10,
                       blowup_ceiling=1e12)
    with pytest.raises(NonConvergence) as info:
        picard_solve(big, cfg)
    assert info.value.field is not None


# ---------------------------------------------------------------------------
# reference integrator
# ---------------------------------------------------------------------------

def test_reference_zero_datum(desk_grid):
    cfg = SolverConfig(dt=1.0 / 64, T=0.5)
    out = reference_solve(sample(PresetDatum("zero"), desk_grid), cfg)
    assert np.all(out.values == 0.0)


def test_solitary_profile_satisfies_equation_symbolically():
    # independent oracle for the traveling wave used below: substitute
    # u = sqrt(6 c) sech(sqrt(c) (x - c t)) into u_t + u_xxx + u^2 u_x
    import sympy as sp
    x, t, c = sp.symbols("x t c", positive=True)
    u = sp.sqrt(6 * c) * sp.sech(sp.sqrt(c) * (x - c * t))
    residual = sp.diff(u, t) + sp.diff(u, x, 3) + u**2 * sp.diff(u, x)
    assert sp.simplify(residual) == 0


def test_soliton_shape_preserved(desk_grid):
    speed = 1.44
    u0 = solitary_wave(desk_grid, speed)
    cfg = SolverConfig(k=2, dt=1e-3, T=1.0)
    out = reference_solve(u0, cfg, record_stride=1000)
    exact = solitary_wave(desk_grid, speed, time=1.0)
    err = (out.frame(out.n_frames - 1) - exact).l2_norm() / exact.l2_norm()
    assert err <= 1e-6


def test_reference_fourth_order_in_dt(desk_grid):
    speed = 1.44
    u0 = solitary_wave(desk_grid, speed)
    errors = []
    for dt in (1e-3, 5e-4, 2.5e-4):
        cfg = SolverConfig(k=2, dt=dt, T=1.0)
        out = reference_solve(u0, cfg, record_stride=int(round(1.0 / dt)))
        exact = solitary_wave(desk_grid, speed, time=1.0)
        errors.append((out.frame(out.n_frames - 1) - exact).l2_norm())
    orders = [np.log2(a / b) for a, b in zip(errors, errors[1:])]
    slope = np.mean(orders)
    assert 3.5 <= slope <= 4.6


def test_reference_l2_conservation(desk_grid, gaussian):
    cfg = SolverConfig(k=2, dt=1e-3, T=1.0)
    out = reference_solve(gaussian, cfg, record_stride=50)
    traj = conserved_quantities(out, cfg.k)
    drift = np.max(np.abs(traj.l2 - traj.l2[0])) / traj.l2[0]
    assert drift <= 1e-8
    # mass and energy drifts stay at quadrature floor as well
    assert np.max(np.abs(traj.mass - traj.mass[0])) <= 1e-10 * max(1.0, abs(traj.mass[0]))
    assert np.max(np.abs(traj.energy - traj.energy[0])) <= 1e-8 * max(1.0, abs(traj.energy[0]))


def test_picard_l2_drift(desk_grid, calibrated):
    u0 = small_gaussian(desk_grid)
    cfg = SolverConfig(c0=calibrated["c0"], dt=1.0 / 256, T=14.0 / 256)
    field, _ = picard_solve(u0, cfg)
    traj = conserved_quantities(field, cfg.k)
    drift = np.max(np.abs(traj.l2 - traj.l2[0])) / traj.l2[0]
    assert drift <= 1e-4


def test_conserved_quantities_zero(desk_grid):
    cfg = SolverConfig(dt=1.0 / 64, T=0.25)
    out = reference_solve(sample(PresetDatum("zero"), desk_grid), cfg)
    traj = conserved_quantities(out, 2)
    assert np.all(traj.mass == 0) and np.all(traj.l2 == 0) and np.all(traj.energy == 0)


def test_quartic_blowup_smoke(small_grid):
    # for k >= 4 large data may or may not blow up at desk scale; both
    # outcomes are legitimate, the run must end in one of them
    u0 = sample(PresetDatum("gaussian", amplitude=8.0, width=0.8), small_grid)
    cfg = SolverConfig(k=4, dt=1e-4, T=0.05, blowup_ceiling=100.0)
    try:
        out = reference_solve(u0, cfg, record_stride=100)
        outcome = ("completed", float(np.max(np.abs(out.values))))
        assert np.isfinite(outcome[1])
    except BlowupDetected as exc:
        outcome = ("blowup", exc.sup_norm)
        assert exc.time is not None and exc.sup_norm > 100.0
    assert outcome[0] in ("completed", "blowup")


# ---------------------------------------------------------------------------
# globalization
# ---------------------------------------------------------------------------

def test_solve_global_single_patch(desk_grid, calibrated):
    u0 = small_gaussian(desk_grid)
    cfg = SolverConfig(c0=calibrated["c0"], dt=1.0 / 256, T=8.0 / 256)
    direct, _ = picard_solve(u0, cfg)
    stitched, reports = solve_global(u0, 8.0 / 256, cfg)
    assert len(reports) == 1
    assert np.max(np.abs(direct.values - stitched.values)) <= 1e-14


def test_solve_global_five_patches_match_reference(desk_grid, calibrated):
    u0 = small_gaussian(desk_grid)
    cfg = SolverConfig(c0=calibrated["c0"], dt=1.0 / 256, T=0.25, picard_tol=1e-11)
    t_star = 0.25
    assert patch_count_for(u0, t_star, cfg) == 5
    stitched, reports = solve_global(u0, t_star, cfg)
    assert len(reports) == 5
    ref = reference_solve(u0, SolverConfig(k=2, dt=cfg.dt / 8.0, T=t_star),
                          record_stride=8)
    dist, scale = sup_l2_distance(stitched, ref)
    assert dist <= 1e-4 * scale


def test_patch_count_arithmetic(desk_grid, calibrated):
    # for constant K the count is exactly ceil(T*/T') with T' dt-snapped
    u0 = small_gaussian(desk_grid)
    cfg = SolverConfig(c0=calibrated["c0"], dt=1.0 / 256)
    t_exist = local_existence_time(u0, cfg)
    frames_per_patch = int(np.floor(t_exist / cfg.dt + 1e-9))
    for n_patches in (1, 2, 3):
        t_star = n_patches * frames_per_patch * cfg.dt
        assert patch_count_for(u0, t_star, cfg) == n_patches
