"""Estimator-style wrappers (``fit``/``predict``/``transform`` plus ``get_params``).

They carry no logic of their own; each delegates to the functional API.
"""

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from . import parisi as _parisi
from . import qaoa as _qaoa
from . import threshold as _threshold
from .instances import evaluate_fraction, require_consistent
from .validation import check_assignments


def _regular_other_degree(inst):
    if not inst.is_regular():
        raise ValueError("instance must be regular to pick parameters from the closed form")
    return int(inst.degrees()[0]) - 1


class Depth1QAOA(BaseEstimator):
    """Depth-1 QAOA with angles optimised for the instance's degree unless given."""

    def __init__(self, gamma=None, beta=None):
        self.gamma = gamma
        self.beta = beta

    def fit(self, inst, y=None):
        require_consistent(inst)
        if self.gamma is None or self.beta is None:
            res = _qaoa.optimize_finite_D(inst.k, _regular_other_degree(inst))
            self.gamma_, self.beta_ = res.angles.gamma, res.angles.beta
        else:
            self.gamma_, self.beta_ = float(self.gamma), float(self.beta)
        self.expected_fraction_ = _qaoa.instance_fraction(inst, self.gamma_, self.beta_)
        return self

    def predict(self, inst):
        """Closed-form expected satisfied fraction at the fitted angles."""
        check_is_fitted(self, "gamma_")
        return _qaoa.instance_fraction(inst, self.gamma_, self.beta_)

    def score(self, inst, y=None):
        return self.predict(inst)


class ThresholdAlgorithm(BaseEstimator):
    """One synchronous threshold flip round on a fixed instance."""

    def __init__(self, mu=None):
        self.mu = mu

    def fit(self, inst, y=None):
        require_consistent(inst)
        D = int(inst.degrees().max()) - 1
        if self.mu is None:
            self.mu_, self.expected_fraction_ = _threshold.optimize_mu(inst.k, _regular_other_degree(inst))
        else:
            self.mu_ = int(self.mu)
            self.expected_fraction_ = _threshold.exact_F(inst.k, D, self.mu_) if 0 <= self.mu_ <= D else None
        self.instance_ = inst
        return self

    def transform(self, X):
        """Assignments after one flip round (rows of +-1)."""
        check_is_fitted(self, "mu_")
        return _threshold.threshold_round(self.instance_, X, self.mu_)

    def predict(self, X):
        """Satisfied fraction of each row after the flip round."""
        Y = self.transform(X)
        return [float(evaluate_fraction(self.instance_, y)) for y in Y]

    def fit_transform(self, inst, X):
        return self.fit(inst).transform(check_assignments(X, inst.n))


class ParisiMinimizer(BaseEstimator):
    """Minimise the zero-temperature Parisi functional for a covariance ``xi``."""

    def __init__(self, pieces=2, grid=1601, quad=61, method="exact", n_restarts=3, seed=0):
        self.pieces = pieces
        self.grid = grid
        self.quad = quad
        self.method = method
        self.n_restarts = n_restarts
        self.seed = seed

    def fit(self, xi, y=None):
        """``xi`` is a :class:`~maxkxor.parisi.MixedXi` or an arity for the pure model."""
        if not isinstance(xi, _parisi.MixedXi):
            xi = _parisi.MixedXi.pure(xi)
        settings = _parisi.ParisiSettings(self.grid, self.quad, self.method)
        self.result_ = _parisi.minimize_parisi(xi, self.pieces, settings, self.seed, n_restarts=self.n_restarts)
        self.xi_ = xi
        self.value_ = self.result_.value
        self.order_param_ = self.result_.order_param
        return self

    def predict(self, D):
        """Optimal-fraction prediction ``1/2 + (P/2) sqrt(k/D)`` for a pure model."""
        check_is_fitted(self, "value_")
        if len(self.xi_.terms) != 1:
            raise ValueError("fraction prediction needs a pure k-spin model")
        k = self.xi_.terms[0][0]
        return _parisi.optimal_fraction_kxor(k, D, self.value_)
