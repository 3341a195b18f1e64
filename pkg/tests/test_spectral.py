import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dispersa import (Grid1D, GridFunction, PresetDatum, continuum_spectrum,
                      forward_transform, from_continuum_spectrum,
                      inverse_transform, multiplier_apply, sample)
from dispersa.errors import NonFiniteMultiplier, ValidationError

from conftest import rel_l2


# ---------------------------------------------------------------------------
# grid
# ---------------------------------------------------------------------------

def test_grid_validation():
    with pytest.raises(ValidationError):
        Grid1D(7, 100.0)
    with pytest.raises(ValidationError):
        Grid1D(64, -1.0)


def test_frequency_set_symmetric_except_nyquist():
    g = Grid1D(64, 10.0)
    xi = np.sort(g.frequencies)
    # one unpaired mode at -n/2, all others mirror
    assert xi[0] == pytest.approx(-2 * np.pi * 32 / 10.0)
    assert np.allclose(xi[1:], -xi[1:][::-1])
    assert g.points[0] == pytest.approx(-5.0)
    assert g.dx == pytest.approx(10.0 / 64)


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("preset", [
    PresetDatum("gaussian", amplitude=1.0, width=1.0),
    PresetDatum("sech", amplitude=0.5, scale=2.0),
    PresetDatum("cosine", mode=3),
])
def test_round_trip(desk_grid, preset):
    f = sample(preset, desk_grid)
    back = inverse_transform(forward_transform(f))
    assert rel_l2(back, f) <= 1e-13


def test_parseval(gaussian):
    spec = forward_transform(gaussian)
    assert abs(gaussian.l2_norm() - spec.l2_norm()) <= 1e-12 * gaussian.l2_norm()


def test_zero_has_zero_spectrum(desk_grid):
    f = sample(PresetDatum("zero"), desk_grid)
    assert forward_transform(f).l2_norm() == 0.0


def test_cosine_two_coefficients(circle_grid):
    f = sample(PresetDatum("cosine", mode=1), circle_grid)
    coeffs = forward_transform(f).values
    nonzero = np.flatnonzero(np.abs(coeffs) > 1e-13 * np.max(np.abs(coeffs)))
    assert set(nonzero) == {1, circle_grid.n - 1}
    assert coeffs[1] == pytest.approx(np.conj(coeffs[-1]))


def test_gaussian_spectrum_matches_closed_form():
    # Oracle: the line transform of exp(-x^2/2) is sqrt(2 pi) exp(-xi^2/2);
    # on the sample grid x_j = -L/2 + j dx the unitary DFT coefficient is
    # fhat(xi_k) * (-1)^k / (dx sqrt(n)).
    grid = Grid1D(512, 50.0)
    f = sample(PresetDatum("gaussian", amplitude=1.0, width=1.0), grid)
    computed = forward_transform(f).values
    xi = grid.frequencies
    k = np.rint(xi / grid.dxi).astype(int)
    expected = (np.sqrt(2 * np.pi) * np.exp(-xi**2 / 2.0)
                * (-1.0) ** k / (grid.dx * np.sqrt(grid.n)))
    assert np.max(np.abs(computed - expected)) <= 1e-10 * np.max(np.abs(expected))


def test_continuum_spectrum_round_trip(gaussian):
    fhat = continuum_spectrum(gaussian)
    back = inverse_transform(from_continuum_spectrum(gaussian.grid, fhat))
    assert rel_l2(back, gaussian) <= 1e-13
    # pointwise against the closed form on the ascending grid
    xi = gaussian.grid.frequencies_sorted
    expected = np.sqrt(2 * np.pi) * np.exp(-xi**2 / 2.0)
    assert np.max(np.abs(fhat - expected)) <= 1e-10 * np.max(expected)


# ---------------------------------------------------------------------------
# multipliers
# ---------------------------------------------------------------------------

def test_identity_multiplier(gaussian):
    out = multiplier_apply(gaussian, lambda xi: np.ones_like(xi))
    assert rel_l2(out, gaussian) <= 1e-14


def test_derivative_multiplier_on_cosine(circle_grid):
    f = sample(PresetDatum("cosine", mode=1), circle_grid)
    out = multiplier_apply(f, lambda xi: 1j * xi)
    expected = -np.sin(circle_grid.points)
    assert np.max(np.abs(out.values - expected)) <= 1e-13


def test_phase_multiplier_unitary_inverse(gaussian):
    t = 0.37
    xi3 = gaussian.grid.frequencies ** 3
    once = multiplier_apply(gaussian, np.exp(1j * t * xi3))
    back = multiplier_apply(once, np.exp(-1j * t * xi3))
    assert rel_l2(back, gaussian) <= 1e-13


def test_nonfinite_multiplier_rejected(gaussian):
    with np.errstate(divide="ignore"), pytest.raises(NonFiniteMultiplier):
        multiplier_apply(gaussian, lambda xi: 1.0 / xi)


def test_hermitian_multiplier_preserves_realness(desk_grid):
    for preset in (PresetDatum("gaussian"), PresetDatum("cosine", mode=5)):
        f = sample(preset, desk_grid)
        out = multiplier_apply(f, lambda xi: np.abs(xi) ** 0.5)
        assert out.is_real
        assert out.imag_sup() <= 1e-12
    # non-Hermitian multiplier drops the flag
    out = multiplier_apply(sample(PresetDatum("gaussian"), desk_grid),
                           lambda xi: np.exp(1j * xi**2))
    assert not out.is_real


# ---------------------------------------------------------------------------
# sampling and the edge monitor
# ---------------------------------------------------------------------------

def test_sample_zero(desk_grid):
    f = sample(PresetDatum("zero"), desk_grid)
    assert np.all(f.values == 0.0)
    assert f.warnings == ()


def test_narrow_gaussian_no_warning():
    grid = Grid1D(512, 50.0)
    f = sample(PresetDatum("gaussian", amplitude=1.0, width=1.0), grid)
    assert np.abs(f.values[0]) < 1e-100
    assert f.warnings == ()


def test_wide_gaussian_warns():
    # tail amplitude exp(-(L/2)^2 / (2 w^2)) = exp(-3.125) ~ 4.4e-2 >> 1e-14
    grid = Grid1D(512, 50.0)
    assert np.exp(-(25.0**2) / (2 * 10.0**2)) > 1e-14
    f = sample(PresetDatum("gaussian", amplitude=1.0, width=10.0), grid)
    assert any("wrap-around" in w for w in f.warnings)


def test_preset_validation(desk_grid):
    with pytest.raises(ValidationError):
        PresetDatum("gaussian", width=0.0).validate()
    with pytest.raises(ValidationError):
        PresetDatum("cosine", mode=desk_grid.n).validate(desk_grid)
    with pytest.raises(ValidationError):
        sample(PresetDatum("wavelet"), desk_grid)


# ---------------------------------------------------------------------------
# properties
# ---------------------------------------------------------------------------

@settings(max_examples=25, deadline=None)
@given(a=st.floats(-3, 3), b=st.floats(-3, 3),
       width=st.floats(0.5, 3), mode=st.integers(-20, 20))
def test_round_trip_and_parseval_on_combinations(a, b, width, mode):
    grid = Grid1D(256, 80.0)
    f = sample(PresetDatum("gaussian", amplitude=a, width=width), grid)
    g = sample(PresetDatum("cosine", amplitude=b, mode=mode), grid)
    h = f + g
    spec = forward_transform(h)
    back = inverse_transform(spec)
    scale = max(h.l2_norm(), 1e-30)
    assert (back - h).l2_norm() <= 1e-13 * scale
    assert abs(spec.l2_norm() - h.l2_norm()) <= 1e-12 * scale
