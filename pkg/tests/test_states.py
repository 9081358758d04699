"""Ground-state expansions, eigenstate overlaps, ladder identities on states,
coherent states, moment problems and superpotential reconstruction."""

import math

import numpy as np
import pytest

from trisusy.errors import (DecoupledChainWarning, DivergenceError, QuadratureError,
                            TruncationWarning, UnsupportedModelError, WindowError)
from trisusy.invariance import spectrum
from trisusy.models import (basis_eval, eigenstate_eval_oscillator, kinetic, make_model,
                            morse, morse_zeta, oscillator, potential_eval, shifted)
from trisusy.operators import ExpansionVector
from trisusy.quadrature import gauss_legendre_panels
from trisusy.specfun import laguerre, ln_gamma, pochhammer
from trisusy.states import (coherent_coefficients, eigenstate_basis_overlap,
                            ground_state_closed_form, ground_state_coefficients,
                            ground_wavefunction, lowering_check_oscillator, moment_check,
                            morse_product_closed_form, morse_superpotential_closed_form,
                            product_term, raise_state, superpotential_eval)

HO_PARAMS = oscillator(l=0, omega=1.0, lam=2.0)
MO_PARAMS = morse(alpha=1.0, D=2.0, gamma=2.0)


# ------------------------------------------------------ ground-state algebra

def test_ho_ground_coefficients_closed_form():
    # Q_n = t^n sqrt(Gamma(n+nu+1) / (n! Gamma(nu+1))), t = (w - l^2)/(w + l^2)
    model = make_model(HO_PARAMS)
    gse = ground_state_coefficients(model, 30)
    t = (1.0 - 4.0) / (1.0 + 4.0)
    nu = 0.5
    for n in range(31):
        want = t ** n * math.exp(0.5 * (ln_gamma(n + nu + 1) - ln_gamma(n + 1)
                                        - ln_gamma(nu + 1)))
        assert gse.Q[n] == pytest.approx(want, rel=1e-12)


def test_ho_lambda0_closed_form():
    # Lambda_0^{-2} = (1 - t^2)^{-nu-1}
    model = make_model(HO_PARAMS)
    gse = ground_state_coefficients(model, 400)
    t_sq = 0.36
    assert gse.lambda0 == pytest.approx((1.0 - t_sq) ** (0.75), rel=1e-12)


def test_morse_ground_coefficients_closed_form():
    # Q_n = (gamma + 1/2 - D)_n / sqrt(n! (2 gamma + 1)_n)
    model = make_model(MO_PARAMS)
    gse = ground_state_coefficients(model, 25)
    for n in range(26):
        want = pochhammer(0.5, n) / math.sqrt(math.factorial(n) * pochhammer(5.0, n))
        assert gse.Q[n] == pytest.approx(want, rel=1e-12)
        assert gse.Q[n] > 0.0


def test_morse_lambda0_gauss_closed_form():
    # Lambda_0 = Gamma(gamma + 1/2 + D) / sqrt(Gamma(2 gamma + 1) Gamma(2 D))
    model = make_model(MO_PARAMS)
    gse = ground_state_coefficients(model, 60)
    want = math.gamma(4.5) / math.sqrt(math.gamma(5.0) * math.gamma(4.0))
    assert gse.lambda0 == pytest.approx(want, rel=1e-6)


def test_kinetic_ground_state_diverges():
    with pytest.raises(DivergenceError):
        ground_state_coefficients(make_model(kinetic(l=0, lam=1.0)), 40)


def test_morse_degenerate_gamma_terminates():
    # gamma + 1/2 = D: the basis ground state is the exact ground state
    model = make_model(morse(alpha=1.0, D=2.0, gamma=1.5))
    gse = ground_state_coefficients(model, 10)
    assert gse.Q[0] == 1.0
    assert np.all(gse.Q[1:] == 0.0)
    assert gse.lambda0 == 1.0


def test_morse_series_approaches_gauss_limit():
    """Partial sums of sum_n (g+1/2-D)_n/(2g+1)_n L_n^{2g}(zeta) reach the
    closed form Gamma(2g+1)/Gamma(g+1/2+D) zeta^{D-g-1/2} (slow, Abel-type)."""
    g, d_par = 2.0, 2.0
    for zeta in (0.5, 1.0, 2.0):
        closed = math.gamma(2 * g + 1) / math.gamma(g + 0.5 + d_par) \
            * zeta ** (d_par - g - 0.5)
        coef = 1.0
        partials = {}
        total = 0.0
        for n in range(401):
            if n >= 1:
                coef *= (g + 0.5 - d_par + n - 1) / (2 * g + n)
            total += coef * laguerre(n, 2 * g, zeta)
            if n in (100, 400):
                partials[n] = total
        assert abs(partials[400] - closed) <= 1e-3
        assert abs(partials[400] - closed) <= abs(partials[100] - closed) + 1e-4


# -------------------------------------------------------- wavefunction grids

def test_ho_ground_wavefunction_matches_closed_form():
    r = np.linspace(0.05, 6.0, 120)
    closed = ground_state_closed_form(HO_PARAMS, r)
    for lam in (1.3, 2.0):
        params = oscillator(l=0, omega=1.0, lam=lam)
        wf = ground_wavefunction(params, r, 80)
        assert np.max(np.abs(wf.values - closed)) <= 1e-7


def test_morse_ground_wavefunction_matches_closed_form():
    x = np.linspace(-1.0, 3.0, 121)
    closed = ground_state_closed_form(MO_PARAMS, x)
    for gamma, n_terms in ((1.5, 40), (2.0, 800)):
        params = morse(alpha=1.0, D=2.0, gamma=gamma)
        wf = ground_wavefunction(params, x, n_terms)
        assert np.max(np.abs(wf.values - closed)) <= 1e-6


def test_ground_wavefunction_normalized():
    val = gauss_legendre_panels(
        lambda r: ground_wavefunction(HO_PARAMS, r, 60).values ** 2,
        1e-9, 12.0, panels=16, order=32)
    assert abs(val - 1.0) <= 1e-6


def test_scale_invariance_sup_norm():
    r = np.linspace(0.05, 6.0, 120)
    a = ground_wavefunction(oscillator(lam=1.3), r, 80).values
    b = ground_wavefunction(oscillator(lam=2.0), r, 80).values
    assert np.max(np.abs(a - b)) <= 1e-6
    x = np.linspace(-1.0, 3.0, 121)
    c = ground_wavefunction(morse(gamma=1.5), x, 800).values
    d = ground_wavefunction(morse(gamma=2.0), x, 800).values
    assert np.max(np.abs(c - d)) <= 1e-6


def test_truncation_warning_on_short_morse_series():
    x = np.linspace(-1.0, 3.0, 61)
    with pytest.warns(TruncationWarning):
        ground_wavefunction(MO_PARAMS, x, 40)


# ------------------------------------------------------------------ overlaps

def test_overlap_against_quadrature():
    params = oscillator(l=0, omega=1.0, lam=1.5)
    for n, m in [(0, 1), (1, 1), (2, 1), (3, 1), (4, 1), (5, 1), (5, 2), (2, 3)]:
        quad = gauss_legendre_panels(
            lambda r: basis_eval(params, n, r) * eigenstate_eval_oscillator(params, m, r),
            1e-9, 12.0, panels=24, order=32)
        assert eigenstate_basis_overlap(params, n, m) == pytest.approx(quad, abs=1e-10)


def test_overlap_eigenbasis_edge():
    with pytest.warns(DecoupledChainWarning):
        params = oscillator(l=0, omega=1.0, lam=1.0)
    assert eigenstate_basis_overlap(params, 3, 3) == 1.0
    assert eigenstate_basis_overlap(params, 2, 3) == 0.0


def test_overlap_column_is_normalized():
    params = oscillator(l=0, omega=1.0, lam=1.5)
    col = np.array([eigenstate_basis_overlap(params, n, 2) for n in range(60)])
    assert np.sum(col ** 2) == pytest.approx(1.0, abs=1e-12)


def test_overlap_morse_unsupported():
    with pytest.raises(UnsupportedModelError):
        eigenstate_basis_overlap(MO_PARAMS, 0, 0)


# ---------------------------------------------------------- lowering/raising

def test_lowering_identity():
    params = oscillator(l=0, omega=1.0, lam=1.5)
    assert lowering_check_oscillator(params, 0, 60) <= 1e-8   # annihilation
    for m in (1, 2, 3):
        assert lowering_check_oscillator(params, m, 60) <= 1e-7


def test_lowering_eigenbasis_edge():
    with pytest.warns(DecoupledChainWarning):
        params = oscillator(l=0, omega=1.0, lam=1.0)
    for m in (1, 2):
        assert lowering_check_oscillator(params, m, 40) <= 1e-10


def test_lowering_truncation_guard():
    params = oscillator(l=0, omega=1.0, lam=2.0)
    with pytest.raises(DivergenceError):
        lowering_check_oscillator(params, 1, 12)


def test_raise_state_ladder():
    params = oscillator(l=0, omega=1.0, lam=1.5)
    model = make_model(params)
    n_top = 60
    for m in (0, 1, 2):
        eig = ExpansionVector(np.array([eigenstate_basis_overlap(params, n, m)
                                        for n in range(n_top + 1)]))
        raised = raise_state(model, eig, m)
        assert raised.norm() == pytest.approx(1.0, abs=1e-6)
        target = np.array([eigenstate_basis_overlap(params, n, m + 1)
                           for n in range(n_top + 1)])
        assert abs(np.dot(raised.coeffs, target)) >= 1.0 - 1e-6
        # eigenvector relation: H (raised) = eps_{m+1} (raised)
        h_op = model.operator(n_top)
        image = h_op.apply(raised).coeffs
        want = spectrum(model, m + 1) * raised.coeffs
        assert np.linalg.norm(image[: n_top - 1] - want[: n_top - 1]) <= 1e-6


def test_raise_state_rejects_wrong_input():
    model = make_model(oscillator(l=0, omega=1.0, lam=1.5))
    junk = ExpansionVector(np.ones(40) / math.sqrt(40.0))
    with pytest.raises(ValueError, match="not the level"):
        raise_state(model, junk, 0)


def test_raise_state_unsupported_model():
    model = make_model(MO_PARAMS)
    with pytest.raises(UnsupportedModelError):
        raise_state(model, ExpansionVector(np.ones(5)), 0)


# -------------------------------------------------------------- product term

def test_product_term_values():
    ho = make_model(HO_PARAMS)
    assert product_term(ho, 0) == 1.0
    assert product_term(ho, 3) == pytest.approx(48.0, rel=1e-12)   # n! (2w)^n
    mo = make_model(MO_PARAMS)
    assert product_term(mo, 1) == pytest.approx(1.5, rel=1e-14)
    assert product_term(mo, 2) == pytest.approx(1.0, rel=1e-13)


def test_product_term_matches_morse_closed_form():
    mo = make_model(MO_PARAMS)
    for n in range(0, 3):
        assert product_term(mo, n) == pytest.approx(
            morse_product_closed_form(MO_PARAMS, n), rel=1e-12)
    big = make_model(morse(alpha=1.3, D=5.2, gamma=2.0))
    for n in range(0, big.m_max + 1):
        assert product_term(big, n) == pytest.approx(
            morse_product_closed_form(morse(alpha=1.3, D=5.2, gamma=2.0), n), rel=1e-9)


def test_product_term_window():
    mo = make_model(MO_PARAMS)
    with pytest.raises(WindowError):
        product_term(mo, 3)
    with pytest.raises(WindowError):
        morse_product_closed_form(MO_PARAMS, 3)


# ------------------------------------------------------------ coherent states

def test_coherent_zero_is_ground_state():
    for model in (make_model(HO_PARAMS), make_model(MO_PARAMS)):
        top = 20 if model.m_max is None else model.m_max
        state = coherent_coefficients(model, 0.0, top)
        assert state.energy_coeffs[0] == 1.0
        assert np.all(state.energy_coeffs[1:] == 0.0)


def test_coherent_ho_poisson_profile():
    model = make_model(HO_PARAMS)
    z = 0.5
    state = coherent_coefficients(model, z, 12)
    for n in range(13):
        want = math.exp(-abs(z) ** 2) * z ** n * math.sqrt(2.0 ** n / math.factorial(n))
        assert state.energy_coeffs[n].real == pytest.approx(want, rel=1e-12)
        assert state.energy_coeffs[n].imag == 0.0


def test_coherent_normalization():
    model = make_model(HO_PARAMS)
    for z in (1.0, 0.3 + 0.9j):
        state = coherent_coefficients(model, z, 60)
        assert abs(state.norm_sq() - 1.0) <= 1e-8


def test_coherent_morse_window():
    model = make_model(MO_PARAMS)
    state = coherent_coefficients(model, 0.4, 2)
    assert state.norm_sq() <= 1.0 + 1e-12
    with pytest.raises(WindowError):
        coherent_coefficients(model, 0.4, 5)


# ------------------------------------------------------------- moment checks

def test_moment_ho_flat_density():
    model = make_model(HO_PARAMS)
    lhs, rhs, rel = moment_check(model, lambda x: 4.0, 3)
    assert rhs == pytest.approx(1.5, rel=1e-12)        # 2 (3!)^2 / (n! (2w)^n)
    assert lhs == pytest.approx(1.5, rel=1e-10)
    assert rel <= 1e-8


def test_moment_ho_all_orders():
    model = make_model(HO_PARAMS)
    for n in range(9):
        _, _, rel = moment_check(model, lambda x: 4.0, n)
        assert rel <= 1e-8


def test_moment_morse_rhs_matches_printed_relation():
    # 2^{n+1} n! / alpha^{2n} * Gamma(2D-2n+1)/Gamma(2D-n+1)
    model = make_model(MO_PARAMS)
    for n in (0, 1, 2):
        _, rhs, _ = moment_check(model, lambda x: 1.0, n)
        want = 2.0 ** (n + 1) * math.factorial(n) * math.gamma(4.0 - 2 * n + 1) \
            / math.gamma(4.0 - n + 1)
        assert rhs == pytest.approx(want, rel=1e-12)


def test_moment_kinetic_unsupported():
    with pytest.raises(UnsupportedModelError):
        moment_check(make_model(kinetic()), lambda x: 1.0, 2)


def test_moment_quadrature_guard():
    model = make_model(HO_PARAMS)
    with pytest.raises(QuadratureError):
        moment_check(model, lambda x: np.cos(60.0 * x), 4)


# ------------------------------------------------------------- superpotential

def test_morse_superpotential_series_matches_closed_form():
    x = np.linspace(-1.0, 3.0, 81)
    w = superpotential_eval(MO_PARAMS, x, 1200)
    closed = morse_superpotential_closed_form(MO_PARAMS, x)
    assert np.max(np.abs(w.values - closed)) <= 1e-5


def test_superpotential_series_vs_finite_difference():
    x = np.linspace(-1.0, 3.0, 41)
    series = superpotential_eval(MO_PARAMS, x, 400).values
    fd = superpotential_eval(MO_PARAMS, x, 400, channel="fd").values
    assert np.max(np.abs(series - fd)) <= 1e-4


def test_ho_superpotential_series():
    # W(r) = (omega r - (l+1)/r) / sqrt(2) from the closed-form ground state
    r = np.linspace(0.3, 4.0, 41)
    w = superpotential_eval(HO_PARAMS, r, 80).values
    want = (1.0 * r - 1.0 / r) / math.sqrt(2.0)
    assert np.max(np.abs(w - want)) <= 1e-7


def _fd_derivative(f, x, h):
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h)


def test_ho_potential_reconstruction():
    r = np.linspace(0.4, 4.0, 37)
    h = 5e-3

    def w_of(x):
        return superpotential_eval(HO_PARAMS, x, 80).values

    w = w_of(r)
    w_prime = _fd_derivative(w_of, r, h)
    v_minus = w ** 2 - w_prime / math.sqrt(2.0)
    v_plus = w ** 2 + w_prime / math.sqrt(2.0)
    assert np.max(np.abs(v_minus - potential_eval(HO_PARAMS, "V", r))) <= 1e-4
    assert np.max(np.abs(v_plus - potential_eval(HO_PARAMS, "V_plus", r))) <= 1e-4


def test_morse_potential_reconstruction():
    """V_minus reproduces the Morse potential as printed; the partner comes out
    as the table V_plus evaluated on the grid translated by the change of the
    exponential scale (2D+1) -> (2D-1) that the eta shift induces."""
    params = MO_PARAMS
    x = np.linspace(-1.0, 3.0, 33)
    h = 5e-3

    def w_of(xv):
        return superpotential_eval(params, xv, 1200).values

    w = w_of(x)
    w_prime = _fd_derivative(w_of, x, h)
    v_minus = w ** 2 - w_prime / math.sqrt(2.0)
    v_plus = w ** 2 + w_prime / math.sqrt(2.0)
    assert np.max(np.abs(v_minus - potential_eval(params, "V", x))) <= 1e-4

    shift = math.log((2 * params.D + 1) / (2 * params.D - 1)) / params.alpha
    table_plus = potential_eval(params, "V_plus", x - shift)
    assert np.max(np.abs(v_plus - table_plus)) <= 1e-4

    # same statement without the translation: partner written in the chain's own zeta
    zeta = morse_zeta(params, x)
    direct = (params.alpha ** 2 * zeta ** 2 / 8.0
              - params.alpha ** 2 * (2 * params.D - 1) * zeta / 4.0
              + params.alpha ** 2 * params.D ** 2 / 2.0)
    assert np.max(np.abs(v_plus - direct)) <= 1e-4


def test_superpotential_rejects_vanishing_wavefunction():
    from trisusy.errors import SingularityError
    grid = np.array([0.5, 1.0, 20.0])
    with pytest.raises(SingularityError):
        superpotential_eval(HO_PARAMS, grid, 60)


def test_ground_state_closed_form_guard():
    with pytest.raises(UnsupportedModelError):
        ground_state_closed_form(kinetic(), np.array([1.0]))
    with pytest.raises(UnsupportedModelError):
        morse_superpotential_closed_form(HO_PARAMS, np.array([1.0]))
