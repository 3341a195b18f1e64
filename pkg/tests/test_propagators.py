import numpy as np
import pytest

from dispersa import (Grid1D, GridFunction, PhasePolynomial, PresetDatum,
                      airy_propagate, dgbo_propagate, gamma_apply,
                      gamma_commutation_residual, inverse_transform,
                      phi_operator, sample, strichartz_ratio,
                      weighted_identity_residual,
                      weighted_identity_residual_beta)
from dispersa.errors import ValidationError, ZeroData

from conftest import rel_l2


def single_mode(grid, freq_index=1):
    """exp(i k x): a one-coefficient function (unlike cosine's pair)."""
    vals = np.exp(1j * 2 * np.pi * freq_index * grid.points / grid.length)
    return GridFunction(grid, vals)


# ---------------------------------------------------------------------------
# groups
# ---------------------------------------------------------------------------

def test_airy_identity_at_zero_time(gaussian):
    assert rel_l2(airy_propagate(gaussian, 0.0), gaussian) == 0.0


def test_airy_single_mode_phase(circle_grid):
    f = single_mode(circle_grid, 1)  # xi = 1, phase rate xi^3 = 1
    t = 0.83
    out = airy_propagate(f, t)
    assert np.max(np.abs(out.values - np.exp(1j * t) * f.values)) <= 1e-13


def test_airy_group_law(gaussian):
    t, s = 0.3, -0.7
    two_step = airy_propagate(airy_propagate(gaussian, s), t)
    one_step = airy_propagate(gaussian, t + s)
    assert (two_step - one_step).l2_norm() <= 1e-13 * gaussian.l2_norm()


@pytest.mark.parametrize("preset", [PresetDatum("gaussian"),
                                    PresetDatum("sech"),
                                    PresetDatum("cosine", mode=7)])
@pytest.mark.parametrize("t", [0.1, 1.0, 5.0, -3.0])
def test_airy_unitarity(desk_grid, preset, t):
    f = sample(preset, desk_grid)
    assert abs(airy_propagate(f, t).l2_norm() - f.l2_norm()) <= 1e-12 * f.l2_norm()


def test_airy_preserves_realness(gaussian):
    out = airy_propagate(gaussian, 1.3)
    assert out.is_real and out.imag_sup() <= 1e-12


def test_dgbo_matches_airy_on_unit_frequency(circle_grid):
    f = single_mode(circle_grid, 1)  # at |xi| = 1 the symbols coincide for every a
    for a in (0.0, 0.5, 0.999):
        d = dgbo_propagate(f, 0.9, a)
        u = airy_propagate(f, 0.9)
        assert np.max(np.abs(d.values - u.values)) <= 1e-13


def test_dgbo_trivialities(gaussian):
    assert rel_l2(dgbo_propagate(gaussian, 0.0, 0.5), gaussian) == 0.0
    out = dgbo_propagate(gaussian, 1.0, 0.5)
    assert abs(out.l2_norm() - gaussian.l2_norm()) <= 1e-12 * gaussian.l2_norm()
    with pytest.raises(ValidationError):
        dgbo_propagate(gaussian, 1.0, 1.0)
    with pytest.raises(ValidationError):
        dgbo_propagate(gaussian, 1.0, -0.1)


def test_phase_symbol_must_be_odd(desk_grid):
    even = PhasePolynomial(t=1.0, symbol=lambda xi: xi**2)
    with pytest.raises(ValidationError):
        even.symbol_values(desk_grid)


# ---------------------------------------------------------------------------
# first-order weight operator
# ---------------------------------------------------------------------------

def test_gamma_at_zero_time_is_coordinate_multiplication(gaussian):
    out = gamma_apply(gaussian, 0.0)
    assert np.max(np.abs(out.values - gaussian.grid.points * gaussian.values)) == 0.0


def test_gamma_parity(gaussian):
    # x * exp(-x^2/2) is odd; x_j pairs with x_{n-j} for j >= 1
    out = gamma_apply(gaussian, 0.0).values
    mirrored = np.concatenate([out[:1], out[:0:-1]])
    assert np.max(np.abs(out + mirrored)) <= 1e-12 * np.max(np.abs(out))


def test_gamma_warns_on_nondecaying_input(desk_grid):
    f = sample(PresetDatum("cosine", mode=1), desk_grid)
    out = gamma_apply(f, 1.0)
    assert any("wrap-around" in w for w in out.warnings)


def test_gamma_commutation_exact_at_zero_time(gaussian):
    rep = gamma_commutation_residual(gaussian, 0.0)
    assert rep.residual_l2 == 0.0


@pytest.mark.parametrize("t", [-1.0, -0.5, 0.25, 0.5, 1.0])
def test_gamma_commutation_residual_small(desk_grid, t):
    # width 2: the dispersed support stays inside the box for |t| <= 1,
    # so only roundoff-level truncation remains
    v0 = sample(PresetDatum("gaussian", width=2.0), desk_grid)
    rep = gamma_commutation_residual(v0, t)
    assert rep.relative_residual <= 1e-8


def test_gamma_commutation_truncation_dominated():
    # width-1 data disperses past the box edge by t = 0.5; doubling the box
    # at fixed dx collapses the residual toward the floor
    t = 0.5
    r_small = gamma_commutation_residual(
        sample(PresetDatum("gaussian"), Grid1D(1024, 100.0)), t)
    r_large = gamma_commutation_residual(
        sample(PresetDatum("gaussian"), Grid1D(2048, 200.0)), t)
    assert r_large.relative_residual <= max(r_small.relative_residual, 1e-12)
    assert r_large.relative_residual <= 1e-9


# ---------------------------------------------------------------------------
# fractional-weight commutator
# ---------------------------------------------------------------------------

def test_phi_vanishes_at_zero_time(gaussian):
    out = phi_operator(gaussian, 0.0, 0.5)
    assert np.all(out.values == 0.0)


def test_phi_is_linear(desk_grid, gaussian, sech):
    t, alpha = 1.0, 0.5
    sum_then_apply = phi_operator(gaussian + sech, t, alpha)
    apply_then_sum = phi_operator(gaussian, t, alpha) + phi_operator(sech, t, alpha)
    scale = max(apply_then_sum.l2_norm(), 1e-30)
    assert (sum_then_apply - apply_then_sum).l2_norm() <= 1e-12 * scale


def test_phi_rejects_bad_alpha(gaussian):
    for alpha in (0.0, 1.0, -0.5):
        with pytest.raises(ValidationError):
            phi_operator(gaussian, 1.0, alpha)


def test_phi_self_convergence_under_frequency_refinement():
    # doubling n at fixed L halves the frequency spacing
    norms = []
    for n in (1024, 2048):
        grid = Grid1D(n, 100.0)
        u0 = sample(PresetDatum("gaussian"), grid)
        norms.append(inverse_transform(phi_operator(u0, 1.0, 0.5)).l2_norm())
    assert abs(norms[1] - norms[0]) <= 0.02 * norms[0]


def test_phi_with_dgbo_phase(gaussian):
    out = phi_operator(gaussian, 1.0, 0.5, phase=PhasePolynomial.dgbo(1.0, 0.5))
    val = inverse_transform(out).l2_norm()
    assert np.isfinite(val) and val > 0


# ---------------------------------------------------------------------------
# weighted identities
# ---------------------------------------------------------------------------

def test_weighted_identity_exact_at_zero_time(gaussian):
    rep = weighted_identity_residual(gaussian, 0.0, 0.5)
    assert rep.relative_residual <= 1e-13


def test_weighted_identity_residual_and_refinement(gaussian):
    rep = weighted_identity_residual(gaussian, 0.5, 0.5)
    assert rep.relative_residual <= 5e-2
    fine = sample(PresetDatum("gaussian"), Grid1D(2048, 200.0))
    rep_fine = weighted_identity_residual(fine, 0.5, 0.5)
    assert rep_fine.relative_residual <= 0.6 * rep.relative_residual


def test_weighted_identity_beta_exact_at_zero_time(gaussian):
    rep = weighted_identity_residual_beta(gaussian, 0.0, 0.5, 0.25)
    assert rep.relative_residual <= 1e-12


def test_weighted_identity_beta_residual(gaussian):
    rep = weighted_identity_residual_beta(gaussian, 1.0, 0.5, 0.25)
    assert rep.relative_residual <= 5e-2
    assert np.isfinite(rep.bound_ratio)


def test_weighted_identity_beta_validation(gaussian):
    for beta in (0.0, 0.5, 0.7):
        with pytest.raises(ValidationError):
            weighted_identity_residual_beta(gaussian, 1.0, 0.5, beta)


def test_bound_ratio_grows_toward_the_order_limit(gaussian):
    # the differentiated bound degenerates as beta approaches alpha; the
    # measured ratio should reflect that trend at desk scale
    alpha = 0.5
    ratios = [weighted_identity_residual_beta(gaussian, 1.0, alpha, b).bound_ratio
              for b in (0.05, 0.25, 0.45)]
    assert all(np.isfinite(r) for r in ratios)
    assert ratios[-1] >= ratios[0]


def test_bound_ratio_scan_bounded(gaussian):
    ratios = [weighted_identity_residual(gaussian, t, a).bound_ratio
              for a in (0.25, 0.75) for t in (0.1, 5.0)]
    assert max(ratios) <= 10.0


# ---------------------------------------------------------------------------
# space-time integrability
# ---------------------------------------------------------------------------

def test_strichartz_rejects_zero_data(desk_grid):
    with pytest.raises(ZeroData):
        strichartz_ratio(sample(PresetDatum("zero"), desk_grid), 10.0, 101)


def test_strichartz_scale_invariance(gaussian):
    a = strichartz_ratio(gaussian, 10.0, 401)
    b = strichartz_ratio(2.0 * gaussian, 10.0, 401)
    assert abs(a - b) <= 1e-12 * a


def test_strichartz_tail_convergence(gaussian):
    r10 = strichartz_ratio(gaussian, 10.0, 801)
    r20 = strichartz_ratio(gaussian, 20.0, 1601)
    assert r20 - r10 <= 0.05 * r10
