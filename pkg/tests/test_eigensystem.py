import cmath
import json
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from abring import (
    Branch,
    InvalidParameter,
    ModelParams,
    SingularConstruction,
    bethe_state,
    biorthogonality_report,
    build_hamiltonian,
    derived_quantities,
    eigen_coefficients,
    residual,
    singular_state,
    singularity_locus,
)
from abring.eigensystem import (
    beta_coefficients,
    inner,
    lambda_coefficient,
    parity_matrix,
    site_labels,
    spinor_amplitudes,
)
from abring.params import locus_distance

BETHE = (Branch.PSI1, Branch.PSI2, Branch.BAR1, Branch.BAR2)
S = 1 / math.sqrt(2)

# 50-digit evaluation of the beta formulas at (0.5, 0.3, 1.2), alpha = (1, 1)/sqrt2
GOLDEN_BETA = {
    "beta1_minus": 1.0171519949146506 - 0.3675463190810155j,
    "beta1_plus": 0.3618639199353262 - 0.3589463017341969j,
    "beta2_minus": 1.0264473797324227 + 0.34072606896053675j,
    "beta2_plus": -0.3711593047530984 - 0.3493260863073554j,
    "beta1_bar_minus": 0.3618639199353262 - 0.3589463017341969j,
    "beta1_bar_plus": 1.0171519949146506 - 0.3675463190810155j,
    "beta2_bar_minus": 0.3711593047530984 + 0.3493260863073554j,
    "beta2_bar_plus": -1.0264473797324227 - 0.34072606896053675j,
}

regular = st.tuples(st.floats(0.05, 1.5), st.floats(-math.pi / 2, math.pi / 2), st.floats(0.2, math.pi - 0.2))


def test_hermitian_limit_matrix():
    h = build_hamiltonian(2, 0.0, 0.0)
    assert np.allclose(h.entries, h.entries.T) and np.all(h.entries.imag == 0)
    for j in (-1, 1):
        for c in ("+", "-"):
            assert h[j, c] == pytest.approx(S)
    assert h.dimension == 6


def test_center_entries():
    h = build_hamiltonian(2, 0.5, 0.3)
    assert h[-1, "+"] == pytest.approx(cmath.exp(-0.3j) * S, abs=1e-16)
    assert h[1, "+"] == pytest.approx(cmath.exp(0.3j) * S, abs=1e-16)
    assert h[-1, "-"] == pytest.approx(cmath.exp(0.3j) * S, abs=1e-16)
    assert h["+", "+"] == 0.5j and h["-", "-"] == -0.5j
    assert h[-2, -1] == 1 and h[1, 2] == 1


def test_dagger_is_conjugate_transpose():
    h = build_hamiltonian(5, 0.7, 0.4)
    hd = build_hamiltonian(5, 0.7, 0.4, dagger=True)
    assert np.array_equal(hd.entries, h.entries.conj().T)
    assert np.allclose(hd.entries, build_hamiltonian(5, -0.7, 0.4).entries, atol=0)


def test_matrix_is_read_only():
    h = build_hamiltonian(3, 0.5, 0.3)
    with pytest.raises(ValueError):
        h.entries[0, 0] = 1.0


def test_small_lattice_rejected():
    with pytest.raises(InvalidParameter):
        build_hamiltonian(1, 0.5, 0.3)


@settings(max_examples=100, deadline=None)
@given(st.floats(-2, 2), st.floats(-math.pi, math.pi), st.integers(2, 12))
def test_parity_flux_symmetry(g, phi, n):
    p = parity_matrix(n)
    lhs = p @ build_hamiltonian(n, g, phi).entries @ p
    assert np.max(np.abs(lhs - build_hamiltonian(n, g, -phi).entries)) <= 1e-14


def test_golden_betas():
    c = eigen_coefficients(ModelParams(0.5, 0.3, 1.2), S, S)
    for name, expected in GOLDEN_BETA.items():
        assert abs(getattr(c, name) - expected) < 1e-13, name


def test_coefficients_normalised_and_real():
    c = eigen_coefficients(ModelParams(0.5, 0.3, 1.2), 3.0, 4.0j)
    assert abs(c.alpha_minus) ** 2 + abs(c.alpha_plus) ** 2 == pytest.approx(1, abs=1e-12)
    for value in (c.c1, c.c2, c.c1_bar, c.c2_bar):
        assert isinstance(value, float) and value > 0


def test_lambda_reproduces_normalisation():
    p = ModelParams(0.5, 0.3, 1.2)
    d = derived_quantities(p)
    for am, ap in ((S, S), (0.6, 0.8j), (1.0, 0.0)):
        c = eigen_coefficients(p, am, ap)
        for (sigma, sigma_p), value in (((1, 1), c.c1), ((-1, -1), c.c2)):
            lam = lambda_coefficient(d, c.alpha_minus, c.alpha_plus, sigma, sigma_p)
            assert d.chi_abs / math.sqrt(2 * d.chi_abs ** 2 + lam) == pytest.approx(value, rel=1e-12)


def test_alpha_must_be_nonzero():
    with pytest.raises(InvalidParameter):
        eigen_coefficients(ModelParams(0.5, 0.3, 1.2), 0, 0)


def test_singular_construction_raised():
    with pytest.raises(SingularConstruction):
        eigen_coefficients(ModelParams(1.0, math.pi / 4, math.pi / 2))


def test_uniform_chain_scattering_state():
    p = ModelParams(0.0, 0.0, 1.0, 40)
    c = eigen_coefficients(p)
    assert abs(c.beta1_minus) < 1e-12 and abs(c.beta1_plus - 1) < 1e-12
    state = bethe_state(p, c, Branch.PSI1)
    assert residual(build_hamiltonian(40, 0.0, 0.0), state, 2 * math.cos(1.0)) < 1e-12


def test_example_state_residual():
    p = ModelParams(0.5, 0.3, 1.2, 60)
    c = eigen_coefficients(p, S, S)
    for br in BETHE:
        h = build_hamiltonian(60, 0.5, 0.3, dagger=br.barred)
        assert residual(h, bethe_state(p, c, br), 2 * math.cos(1.2)) < 1e-10


def test_random_vector_and_boundary_residuals():
    p = ModelParams(0.5, 0.3, 1.2, 60)
    h = build_hamiltonian(60, 0.5, 0.3)
    rng = np.random.default_rng(3)
    state = bethe_state(p, eigen_coefficients(p, S, S), Branch.PSI1)
    noise = state.__class__(rng.normal(size=122) + 0j, 60, 1.2, Branch.PSI1)
    assert residual(h, noise, 2 * math.cos(1.2)) > 0.1
    assert residual(h, state, 2 * math.cos(1.2), include_boundary=True) > 1e-3


@settings(max_examples=60, deadline=None)
@given(regular, st.complex_numbers(max_magnitude=5), st.complex_numbers(max_magnitude=5))
def test_bethe_states_are_eigenstates(params, am, ap):
    assume(abs(am) + abs(ap) > 1e-3)
    p = ModelParams(*params, n_sites=50)
    assume(locus_distance(p) > 1e-2 and derived_quantities(p).chi_abs > 1e-3)
    c = eigen_coefficients(p, am, ap)
    for br in BETHE:
        h = build_hamiltonian(50, p.gamma, p.phi, dagger=br.barred)
        assert residual(h, bethe_state(p, c, br), 2 * math.cos(p.k)) < 1e-10


@settings(max_examples=100, deadline=None)
@given(regular, st.complex_numbers(max_magnitude=5), st.complex_numbers(max_magnitude=5))
def test_barred_coefficients_are_flux_reversed(params, am, ap):
    assume(abs(am) + abs(ap) > 1e-3)
    p = ModelParams(*params)
    assume(derived_quantities(p).chi_abs > 1e-3)
    c = eigen_coefficients(p, am, ap)
    r = eigen_coefficients(p.replace(phi=-p.phi), am, ap)
    assert c.beta1_bar_minus == pytest.approx(r.beta1_minus, rel=1e-12, abs=1e-12)
    assert c.beta2_bar_plus == pytest.approx(r.beta2_plus, rel=1e-12, abs=1e-12)
    assert c.c1_bar == pytest.approx(r.c1, rel=1e-12)
    assert c.c2_bar == pytest.approx(r.c2, rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(regular, st.complex_numbers(max_magnitude=5), st.complex_numbers(max_magnitude=5))
def test_spinor_identity(params, am, ap):
    assume(abs(am) + abs(ap) > 1e-3)
    p = ModelParams(*params)
    assume(derived_quantities(p).chi_abs > 1e-3)
    c = eigen_coefficients(p, am, ap)
    assert biorthogonality_report(p, c, 4).spinor_identity_error < 1e-12 * max(1.0, derived_quantities(p).chi_abs ** 2)


def test_beta_matches_recovered_spinor():
    p = ModelParams(0.5, 0.3, 1.2, 30)
    c = eigen_coefficients(p, 0.6, 0.8j)
    a, b = spinor_amplitudes(bethe_state(p, c, Branch.PSI1))
    scale = c.c1 / math.sqrt(30)
    assert a.minus / scale == pytest.approx(0.6) and a.plus / scale == pytest.approx(0.8j)
    assert b.minus / scale == pytest.approx(c.beta1_minus)
    assert b.plus / scale == pytest.approx(c.beta1_plus)
    d = derived_quantities(p)
    assert beta_coefficients(d, 0.6, 0.8j) == pytest.approx((c.beta1_minus, c.beta1_plus))


def test_biorthogonality_report_example():
    p = ModelParams(0.5, 0.3, 1.2)
    c = eigen_coefficients(p, S, S)
    r200, r400 = biorthogonality_report(p, c, 200), biorthogonality_report(p, c, 400)
    assert r200.spinor_identity_error < 1e-12
    assert r400.offdiag < 0.6 * r200.offdiag
    for got, want in zip(r400.diag, r400.expected_diag):
        assert abs(got - want) < 0.01


@pytest.mark.parametrize("g, phi", [(0.0, 0.3), (0.5, 0.0)])
def test_plain_states_orthogonal_for_special_parameters(g, phi):
    p = ModelParams(g, phi, 1.2, 200)
    c = eigen_coefficients(p, S, S)
    assert abs(inner(bethe_state(p, c, Branch.PSI1), bethe_state(p, c, Branch.PSI2))) < 1e-12


def test_plain_states_not_orthogonal_generically():
    p = ModelParams(0.5, 0.3, 1.2, 200)
    c = eigen_coefficients(p, S, S)
    assert abs(inner(bethe_state(p, c, Branch.PSI1), bethe_state(p, c, Branch.PSI2))) > 0.1


def test_singular_state_amplitude():
    n = 60
    st_ = singular_state(1, False, n)
    assert st_[-1] == pytest.approx(-1j / math.sqrt(2 * n), abs=1e-16)
    assert st_[1] == pytest.approx(1j * cmath.exp(-1j * math.pi / 2) / math.sqrt(2 * n), abs=1e-16)


ON_LOCUS = [(1.0, math.pi / 4), (math.sin(math.pi / 4), math.pi / 8),
            (0.707, singularity_locus(0.707)[0]), (0.707, singularity_locus(0.707)[1])]


@pytest.mark.parametrize("g, phi", ON_LOCUS)
@pytest.mark.parametrize("sign", [1, -1])
@pytest.mark.parametrize("barred", [False, True])
def test_singular_state_residual(g, phi, sign, barred):
    st_ = singular_state(sign, barred, 60, g, phi)
    assert residual(build_hamiltonian(60, g, phi, dagger=barred), st_, 0.0) < 1e-10


@pytest.mark.parametrize("barred", [False, True])
def test_singular_spinor_patterns(barred):
    flip = -1 if barred else 1
    a, b = spinor_amplitudes(singular_state(1, barred, 40), math.pi / 2)
    assert abs(a.plus - flip * 1j * a.minus) < 1e-12 and abs(b.minus) < 1e-12 and abs(b.plus) < 1e-12
    a, b = spinor_amplitudes(singular_state(-1, barred, 40), math.pi / 2)
    assert abs(b.plus + flip * 1j * b.minus) < 1e-12 and abs(a.minus) < 1e-12 and abs(a.plus) < 1e-12


@pytest.mark.parametrize("sign", [1, -1])
def test_singular_biorthogonality_destroyed(sign):
    for n in (50, 100, 200, 400):
        overlap = inner(singular_state(sign, True, n), singular_state(sign, False, n))
        assert abs(overlap) <= 1.0 / n


def test_singular_state_bad_sign():
    with pytest.raises(InvalidParameter):
        singular_state(0, False, 10)


def test_bethe_state_rejects_singular_branch():
    p = ModelParams(0.5, 0.3, 1.2)
    with pytest.raises(InvalidParameter):
        bethe_state(p, eigen_coefficients(p), Branch.SINGULAR_PLUS)


def test_state_json_records():
    st_ = singular_state(1, False, 3)
    records = json.loads(st_.to_json())
    assert [r["site"] for r in records] == site_labels(3)
    assert set(records[0]) == {"site", "re", "im"}
    assert complex(records[2]["re"], records[2]["im"]) == st_[-1]
