import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from maxkxor import parisi, qaoa, threshold
from maxkxor.estimators import Depth1QAOA, ParisiMinimizer, ThresholdAlgorithm
from maxkxor.instances import XorInstance, evaluate_fraction, generate_regular_triangle_free


@pytest.fixture(scope="module")
def inst():
    return generate_regular_triangle_free(3, 3, 60, seed=5)


def test_params_and_clone():
    est = ThresholdAlgorithm(mu=2)
    assert est.get_params() == {"mu": 2}
    assert clone(est).set_params(mu=1).mu == 1
    assert Depth1QAOA(gamma=0.1).get_params()["gamma"] == 0.1
    assert ParisiMinimizer(grid=401).get_params()["grid"] == 401


def test_qaoa_estimator(inst):
    est = Depth1QAOA().fit(inst)
    res = qaoa.optimize_finite_D(3, 2)
    assert est.gamma_ == pytest.approx(res.angles.gamma) and est.beta_ == pytest.approx(res.angles.beta)
    assert est.predict(inst) == pytest.approx(res.fraction, abs=1e-12)
    fixed = Depth1QAOA(gamma=0.3, beta=0.2).fit(inst)
    assert fixed.score(inst) == pytest.approx(qaoa.instance_fraction(inst, 0.3, 0.2))


def test_not_fitted(inst):
    with pytest.raises(NotFittedError):
        Depth1QAOA().predict(inst)
    with pytest.raises(NotFittedError):
        ThresholdAlgorithm().transform(np.ones((1, inst.n)))


def test_irregular_needs_angles():
    inst = XorInstance(2, 3, (((0, 1), 1), ((1, 2), 1)))
    with pytest.raises(ValueError, match="regular"):
        Depth1QAOA().fit(inst)
    assert Depth1QAOA(gamma=0.5, beta=0.3).fit(inst).expected_fraction_ > 0


def test_threshold_estimator(inst):
    est = ThresholdAlgorithm().fit(inst)
    assert (est.mu_, est.expected_fraction_) == threshold.optimize_mu(3, 2)
    X = np.random.default_rng(0).choice([-1, 1], size=(5, inst.n))
    Y = est.fit_transform(inst, X)
    np.testing.assert_array_equal(Y, threshold.threshold_round(inst, X, est.mu_))
    assert est.predict(X) == [float(evaluate_fraction(inst, y)) for y in Y]


def test_parisi_estimator():
    est = ParisiMinimizer(pieces=0).fit(2)
    assert est.value_ == pytest.approx(2 / math.sqrt(math.pi))
    assert est.predict(8) == pytest.approx(parisi.optimal_fraction_kxor(2, 8, est.value_))
    mixed = ParisiMinimizer(pieces=0).fit(parisi.MixedXi([(2, 1.0), (3, 1.0)]))
    with pytest.raises(ValueError, match="pure"):
        mixed.predict(4)
