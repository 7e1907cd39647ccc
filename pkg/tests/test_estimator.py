import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from gradmetro import GradientBoundEstimator, bounds as B, states as S
from gradmetro.spatial import Chain, ParametricPI
from gradmetro.spin_algebra import SpinSystem


@pytest.fixture
def zoo():
    return S.state_zoo(SpinSystem(4, 0.5))


def test_params_roundtrip():
    est = GradientBoundEstimator(ParametricPI(0, 1, 0.2, 4), spin=0.5, centered=False)
    params = est.get_params()
    assert params["centered"] is False and params["spin"] == 0.5
    twin = clone(est)
    assert twin.get_params()["spatial_model"] == est.spatial_model
    est.set_params(centered=True)
    assert est.centered


def test_predict_matches_general_bound(zoo):
    model = ParametricPI(0, 1, 0.2, 4)
    states = list(zoo.values())
    est = GradientBoundEstimator(model).fit(states)
    expected = [B.general_bound(s, model).bound for s in states]
    assert np.allclose(est.predict(states), expected)
    batch = np.stack([s.rho for s in states])
    assert np.allclose(est.predict(batch), expected)


def test_transform_columns(zoo):
    model = Chain(1.0, 4)
    out = GradientBoundEstimator(model).fit_transform(zoo["ghz"].rho)
    report = B.general_bound(zoo["ghz"], model)
    assert out.shape == (1, 4)
    assert np.allclose(out[0], [report.qfi_matrix.f00, report.qfi_matrix.f01, report.qfi_matrix.f11, report.bound])
    assert list(GradientBoundEstimator(model).get_feature_names_out()) == ["f00", "f01", "f11", "bound"]


def test_not_fitted(zoo):
    with pytest.raises(NotFittedError):
        GradientBoundEstimator(Chain(1.0, 4)).predict(zoo["ghz"])


def test_shape_validation(zoo):
    est = GradientBoundEstimator(Chain(1.0, 4))
    with pytest.raises(ValueError):
        est.fit(np.eye(8) / 8)
    with pytest.raises(TypeError):
        GradientBoundEstimator(None).fit(zoo["ghz"])
    est.fit(zoo["ghz"])
    with pytest.raises(ValueError):
        est.predict(S.polarized_y(SpinSystem(3, 0.5)))
