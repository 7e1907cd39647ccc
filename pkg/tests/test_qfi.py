import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gradmetro import qfi as Q
from gradmetro import states as S
from gradmetro.spatial import DoubleWell
from gradmetro.spin_algebra import SpinSystem, collective, embed, gradient_generator_spin_part, single_spin_matrices


def herm(rng, dim):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (m + m.conj().T) / 2


def jz(n, j=0.5):
    return collective("z", SpinSystem(n, j))


def test_identity_generator_gives_zero():
    rng = np.random.default_rng(3)
    state = S.random_mixed(SpinSystem(2, 0.5), rng)
    assert abs(Q.qfi_ab(state, np.eye(4), np.eye(4))) < 1e-12


@pytest.mark.parametrize("state,expected", [
    (lambda: S.polarized_y(SpinSystem(2, 0.5)), 2.0),
    (lambda: S.ghz(SpinSystem(4, 0.5)), 16.0),
    (lambda: S.dicke(SpinSystem(4, 0.5), "x"), 12.0),
    (lambda: S.dicke(SpinSystem(4, 0.5), "z"), 0.0),
    (lambda: S.ghz(SpinSystem(2, 0.5)), 4.0),
])
def test_collective_qfi_values(state, expected):
    s = state()
    gen = jz(s.system.n_particles)
    assert np.isclose(Q.qfi(s, gen), expected, atol=1e-10)
    assert np.isclose(Q.qfi_alt(s, gen, gen), expected, atol=1e-10)


def test_singlet_single_site():
    s = S.singlet_mixture(S.singlet_basis(SpinSystem(2, 0.5)), [1])
    z1 = embed(single_spin_matrices(0.5)[2], 1, s.system)
    assert np.isclose(Q.qfi(s, z1), 1.0)


def test_maximally_mixed():
    s = S.maximally_mixed(SpinSystem(1, 0.5))
    z = jz(1)
    assert abs(Q.qfi(s, z)) < 1e-15
    assert abs(Q.qfi_alt(s, z, z)) < 1e-12
    assert np.max(np.abs(Q.sld(s, herm(np.random.default_rng(0), 2)).matrix)) < 1e-15


def test_qfi_matrix_examples():
    p = S.polarized_y(SpinSystem(2, 0.5))
    fm = Q.qfi_matrix(p, jz(2), gradient_generator_spin_part([1, 2], p.system))
    assert np.isclose(fm.f00, 2)
    d = S.dicke(SpinSystem(2, 0.5))
    fm = Q.qfi_matrix(d, jz(2), gradient_generator_spin_part([1, 2], d.system))
    assert abs(fm.f00) < 1e-12 and abs(fm.f01) < 1e-12
    b = S.best_separable(SpinSystem(2, 0.5))
    fm = Q.qfi_matrix(b, jz(2), gradient_generator_spin_part([-1, 1], b.system))
    assert abs(fm.f01) < 1e-12
    assert fm.f10 == fm.f01
    assert np.allclose(fm.as_array(), fm.as_array().T)


def test_qfi_matrix_rejects_indefinite():
    with pytest.raises(ValueError):
        Q.QfiMatrix(1.0, 2.0, 1.0)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        Q.qfi(S.polarized_y(SpinSystem(2, 0.5)), np.eye(3))


def test_non_hermitian_generator_is_internal_error():
    rng = np.random.default_rng(11)
    s = S.random_mixed(SpinSystem(2, 0.5), rng)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    with pytest.raises(Q.QfiInternalError):
        Q.qfi(s, a)


def test_sld_properties():
    p = S.polarized_y(SpinSystem(2, 0.5))
    gen = jz(2)
    lmat = Q.sld(p, gen).matrix
    assert np.max(np.abs(lmat - lmat.conj().T)) <= 1e-12
    assert np.isclose(np.trace(p.rho @ lmat @ lmat).real, Q.qfi(p, gen), atol=1e-8)
    assert np.max(np.abs(Q.sld(S.dicke(SpinSystem(4, 0.5)), jz(4)).matrix)) < 1e-12


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), rank=st.integers(1, 8))
def test_sld_defining_equation(seed, rank):
    rng = np.random.default_rng(seed)
    s = S.random_mixed(SpinSystem(3, 0.5), rng, rank)
    a = herm(rng, 8)
    lmat = Q.sld(s, a).matrix
    lhs = (lmat @ s.rho + s.rho @ lmat) / 2
    assert np.max(np.abs(lhs - 1j * (s.rho @ a - a @ s.rho))) <= 1e-9


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), rank=st.integers(1, 9))
def test_symmetry_bilinearity_and_alt_form(seed, rank):
    rng = np.random.default_rng(seed)
    s = S.random_mixed(SpinSystem(2, 1), rng, rank)
    a1, a2, b = herm(rng, 9), herm(rng, 9), herm(rng, 9)
    fab = Q.qfi_ab(s, a1, b)
    assert np.isclose(fab, Q.qfi_ab(s, b, a1), rtol=1e-9, atol=1e-9)
    lhs = Q.qfi_ab(s, a1 + a2, b)
    assert abs(lhs - fab - Q.qfi_ab(s, a2, b)) <= 1e-9 * max(1.0, abs(lhs))
    assert np.isclose(Q.qfi_alt(s, a1, b), fab, rtol=1e-8, atol=1e-8)
    assert Q.qfi(s, a1) <= 4 * s.variance(a1) + 1e-9


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_pure_state_identity(seed):
    rng = np.random.default_rng(seed)
    s = S.random_pure(SpinSystem(3, 0.5), rng)
    a, b = herm(rng, 8), herm(rng, 8)
    psi = s.state_vector()
    ea, eb = np.vdot(psi, a @ psi), np.vdot(psi, b @ psi)
    expected = 4 * (np.vdot(psi, (a @ b + b @ a) / 2 @ psi) - ea * eb).real
    assert abs(Q.qfi_ab(s, a, b) - expected) <= 1e-9 * max(1.0, abs(expected))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), p=st.floats(0.01, 0.99))
def test_convexity(seed, p):
    rng = np.random.default_rng(seed)
    system = SpinSystem(2, 0.5)
    r1, r2 = S.random_mixed(system, rng, 2), S.random_pure(system, rng)
    a = herm(rng, 4)
    mixed = r1.mix(r2, p)
    assert Q.qfi(mixed, a) <= p * Q.qfi(r1, a) + (1 - p) * Q.qfi(r2, a) + 1e-9


@pytest.mark.parametrize("name", ["singlet", "dicke_z", "polarized_z", "two_well_optimal"])
def test_insensitive_identity(name):
    system = SpinSystem(4, 0.5)
    state = S.state_zoo(system)[name]
    ops = [embed(single_spin_matrices(0.5)[2], n, system) for n in range(1, 5)]
    f = Q.qfi_site_matrix(state, ops)
    assert abs((f.sum() - np.trace(f)) + np.trace(f)) <= 1e-8


def test_compatibility_for_pi_mean_position_form():
    for name, state in S.state_zoo(SpinSystem(4, 0.5)).items():
        if state.is_permutation_invariant():
            assert Q.compatibility_check(state, jz(4), 0.7 * jz(4)) <= 1e-8, name


def test_compatibility_chain_value_is_finite():
    p = S.polarized_y(SpinSystem(2, 0.5))
    norm = Q.compatibility_check(p, jz(2), gradient_generator_spin_part([1, 2], p.system))
    assert np.isfinite(norm) and norm >= 0


def test_two_well_ghz_weak_compatibility():
    g = S.ghz(SpinSystem(2, 0.5))
    gg = S.two_well_product(g, g)
    h1 = gradient_generator_spin_part(DoubleWell(1.0, 4).positions(), gg.system)
    assert Q.weak_compatibility(gg, jz(4), h1) <= 1e-8
