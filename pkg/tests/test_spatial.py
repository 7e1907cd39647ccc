import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gradmetro.spatial import Bec, Chain, DoubleWell, ParametricPI, SpatialModel, eta_range


def generic_moments(model: SpatialModel):
    return SpatialModel.summary_moments(model)


def test_first_moments():
    assert Chain(1.0, 3).first_moment(2) == 2
    assert DoubleWell(2.0, 4).first_moment(1) == -2
    assert ParametricPI(0.0, 1.0, 0.2, 3).first_moment(3) == 0


def test_second_moments():
    assert Chain(1.0, 2).second_moment(1, 2) == 2
    assert DoubleWell(1.0, 4).second_moment(1, 3) == -1
    assert DoubleWell(1.0, 4).second_moment(3, 1) == -1
    assert DoubleWell(1.0, 4).second_moment(3, 4) == 1
    assert Bec(0.0, 1.0, 3).second_moment(1, 2) == 0


def test_site_range():
    with pytest.raises(IndexError):
        Chain(1.0, 3).first_moment(4)
    with pytest.raises(IndexError):
        Bec(0.0, 1.0, 2).second_moment(0, 1)


def test_summary_moments_examples():
    mu, s2, eta = Chain(1.0, 2).summary_moments()
    assert np.isclose(s2, 0.25) and np.isclose(eta, -0.25) and np.isclose(mu, 1.5)
    mu, s2, _ = DoubleWell(3.0, 2).summary_moments()
    assert (mu, s2) == (0.0, 9.0)


@pytest.mark.parametrize("model", [
    Chain(1.3, 5, origin=-2.0), Chain(1.0, 2), DoubleWell(0.7, 6, 1.5), DoubleWell(2.0, 2),
    ParametricPI(0.4, 2.0, -0.5, 5), Bec(-1.0, 0.3, 4),
])
def test_closed_form_moments_match_definition(model):
    assert np.allclose(model.summary_moments(), generic_moments(model), rtol=1e-12, atol=1e-12)
    _, s2, eta = model.summary_moments()
    low, high = eta_range(s2, model.n_particles)
    assert low - 1e-12 <= eta <= high + 1e-12


def test_translate_examples():
    t = ParametricPI(0.0, 1.0, 0.3, 4).translate(5)
    assert t.summary_moments() == (5.0, 1.0, 0.3)
    assert Chain(1.0, 3).translate(-2).first_moment(2) == 0
    dw = DoubleWell(1.0, 2).translate(1)
    assert np.allclose(dw.positions(), [0, 2])


def test_center():
    assert np.isclose(Chain(1.0, 3).center().summary_moments()[0], 0)
    pi = ParametricPI(0.0, 1.0, 0.1, 3)
    assert pi.center() == pi
    assert Bec(4.0, 1.0, 2).center() == Bec(0.0, 1.0, 2)


@settings(max_examples=50, deadline=None)
@given(d1=st.floats(-10, 10), d2=st.floats(-10, 10), a=st.floats(0.1, 3), n=st.integers(2, 8))
def test_translation_composes(d1, d2, a, n):
    m = Chain(a, n)
    assert np.allclose(m.translate(d1).translate(d2).positions(), m.translate(d1 + d2).positions())
    c = m.translate(d1).center()
    assert np.allclose(c.center().positions(), c.positions())
    assert np.allclose(c.covariance_matrix(), m.covariance_matrix(), atol=1e-9)


def test_eta_range():
    assert eta_range(1.0, 5) == (-0.25, 1.0)
    assert eta_range(2.0, 2) == (-2.0, 2.0)
    assert -1e-6 < eta_range(1.0, 10 ** 7)[0] < 0
    with pytest.raises(ValueError):
        eta_range(1.0, 1)


def test_parametric_pi_rejects_bad_eta():
    with pytest.raises(ValueError):
        ParametricPI(0.0, 1.0, 1.01, 3)
    with pytest.raises(ValueError):
        ParametricPI(0.0, 1.0, -0.6, 3)
    with pytest.raises(ValueError):
        ParametricPI(0.0, -1.0, 0.0, 3)
    ParametricPI(0.0, 1.0, -0.5, 3)
    ParametricPI(0.0, 1.0, 1.0, 3)


def test_double_well_rejects_odd_n():
    with pytest.raises(ValueError):
        DoubleWell(1.0, 3)


@pytest.mark.parametrize("model", [ParametricPI(0.5, 1.0, 0.2, 4), Bec(0.5, 1.0, 4)])
def test_pi_second_moments_depend_only_on_diagonal(model):
    s = model.second_moment_matrix()
    off = s[~np.eye(4, dtype=bool)]
    assert np.allclose(off, off[0])
    assert np.allclose(np.diag(s), s[0, 0])
