import math
from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxkxor import threshold as th
from maxkxor.instances import XorInstance, evaluate_fraction, generate_regular_triangle_free
from maxkxor.reference import LARGE_DEGREE_TABLE
from maxkxor.verify import mc_instance_size


def naive_F(k, D, mu):
    """Oracle straight from the definitions, in exact rationals."""
    g = Fraction(sum(comb(D, i) for i in range(mu + 1)), 2**D)
    delta = Fraction(comb(D, mu), 2**D)
    return Fraction(1, 2) + ((1 - 2 * g + 2 * delta) ** k - (1 - 2 * g) ** k) / 4


def test_quantities_identities():
    for D in range(65):
        for mu in range(D + 1):
            q = th.threshold_quantities(D, mu, exact=True)
            assert q.delta == Fraction(comb(D, mu), 2**D)
            assert q.g - q.r == q.delta and q.h == 1 - q.g and q.s_sat == 1 - q.r
            assert 0 <= q.r <= q.g <= 1
            assert 1 - 2 * q.g + 2 * q.delta == 1 - 2 * q.r


def test_exact_F_matches_definition():
    for k in (2, 3, 4, 7):
        for D in range(0, 25, 3):
            for mu in range(D + 1):
                assert th.exact_F(k, D, mu, exact=True) == naive_F(k, D, mu)


def test_k2_closed_form_all_small_degrees():
    for D in range(65):
        for mu in range(D + 1):
            q = th.threshold_quantities(D, mu)
            assert abs(th.exact_F(2, D, mu) - (0.5 + q.delta * (1 - 2 * q.g + q.delta))) <= 1e-15


def test_worked_example():
    q = th.threshold_quantities(2, 1, exact=True)
    assert (q.g, q.delta) == (Fraction(3, 4), Fraction(1, 2))
    assert th.exact_F(2, 2, 1) == 0.5


def test_mu_out_of_range():
    with pytest.raises(ValueError, match="outside"):
        th.exact_F(3, 4, 5)
    with pytest.raises(ValueError):
        th.exact_F(3, 4, -1)


def test_large_degree_no_overflow():
    for mu in (0, 1, 512, 1024):
        F = th.exact_F(5, 1024, mu)
        assert 0 <= F <= 1 and math.isfinite(F)
    assert th.threshold_quantities(1024, 0).delta > 0


def test_optimize_mu_is_exhaustive():
    for k in (2, 3, 4):
        for D in range(12):
            mu, F = th.optimize_mu(k, D)
            vals = [th.exact_F(k, D, m) for m in range(D + 1)]
            assert F == max(vals) and mu == vals.index(max(vals))


def test_odd_k_reflection():
    for k in (3, 5):
        for D in range(31):
            for mu in range(D + 1):
                assert th.exact_F(k, D, mu, exact=True) == th.exact_F(k, D, D - mu, exact=True)
            mus = th.optimal_mus(k, D)
            if 2 * mus[0] != D:
                assert len(mus) == 2 and mus[0] + mus[1] == D


def test_large_degree_examples():
    C, alpha = th.large_d_constant_threshold(2)
    assert abs(C - 0.33649) <= 1e-5 and abs(alpha + 0.43845) <= 1e-5
    C, alpha = th.large_d_constant_threshold(5)
    assert abs(C - 0.37008) <= 1e-5 and abs(alpha + 0.70408) <= 1e-5
    for k in range(2, 20):
        C, alpha = th.large_d_constant_threshold(k)
        assert abs(C - LARGE_DEGREE_TABLE[k][3]) <= 1e-5
        assert abs(alpha - LARGE_DEGREE_TABLE[k][4]) <= 1e-5


def test_alpha_grows_with_k():
    alphas = [abs(th.large_d_constant_threshold(k)[1]) for k in range(2, 20)]
    assert all(b > a for a, b in zip(alphas, alphas[1:]))


def test_bracket_failure_reports_trace():
    with pytest.raises(RuntimeError, match="no sign change"):
        th.large_d_constant_threshold(3, bracket=(-0.1, -0.05))


def test_finite_degree_converges():
    for k in (2, 3, 5):
        C, _ = th.large_d_constant_threshold(k)
        assert abs(th.finite_d_constant(k, 10**4)[0] - C) <= 0.01


def test_threshold_round_rule():
    # one clause x0 x1 = +1 with both variables at -1: each node sees 0 satisfied clauses
    inst = XorInstance(2, 2, (((0, 1), 1),))
    X = np.array([[-1, 1], [1, 1]])
    np.testing.assert_array_equal(th.threshold_round(inst, X, 0), [[1, -1], [1, 1]])
    np.testing.assert_array_equal(th.threshold_round(inst, X, 1), [[1, -1], [-1, -1]])


def test_always_flip_even_k_keeps_half():
    inst = generate_regular_triangle_free(2, 3, 40, seed=3)
    mean, se = th.monte_carlo_run(inst, 3, 20000, seed=0)
    assert abs(mean - 0.5) <= 3 * se


def test_always_flip_is_global_negation():
    inst = generate_regular_triangle_free(3, 2, 15, seed=1)
    X = np.random.default_rng(0).choice([-1, 1], size=(50, inst.n))
    Y = th.threshold_round(inst, X, 2)
    np.testing.assert_array_equal(Y, -X)


@pytest.mark.parametrize("k,D,mu", [(2, 2, 0), (3, 4, 1), (4, 1, 1)])
def test_monte_carlo_matches_exact(k, D, mu):
    n = mc_instance_size(k, D + 1)
    inst = generate_regular_triangle_free(k, D + 1, n, seed=17)
    mean, se = th.monte_carlo_run(inst, mu, 200_000, seed=5)
    assert abs(mean - th.exact_F(k, D, mu)) <= 3 * se


def test_monte_carlo_deterministic():
    inst = generate_regular_triangle_free(3, 3, 60, seed=2)
    assert th.monte_carlo_run(inst, 1, 5000, seed=9) == th.monte_carlo_run(inst, 1, 5000, seed=9)
    assert th.monte_carlo_run(inst, 1, 5000, seed=9) != th.monte_carlo_run(inst, 1, 5000, seed=10)


def test_monte_carlo_against_plain_simulation():
    # bit-packed simulator vs threshold_round on explicit samples, same instance
    inst = generate_regular_triangle_free(3, 2, 15, seed=8)
    X = np.random.default_rng(1).choice([-1, 1], size=(40000, inst.n))
    Y = th.threshold_round(inst, X, 1)
    direct = np.mean([float(evaluate_fraction(inst, y)) for y in Y])
    mean, se = th.monte_carlo_run(inst, 1, 40000, seed=1)
    assert abs(mean - direct) <= 4 * math.hypot(se, se)


def test_simulate_missing_neighbours():
    inst = XorInstance(3, 9, (((0, 1, 2), 1), ((2, 3, 4), -1), ((4, 5, 6), 1), ((6, 7, 8), -1), ((0, 5, 8), 1)))
    for mu in range(3):
        mean, se = th.monte_carlo_run(inst, mu, 200_000, seed=1, degree=3, simulate_missing=True)
        assert abs(mean - th.exact_F(3, 2, mu)) <= 3 * se


def test_degree_context_too_small():
    inst = generate_regular_triangle_free(3, 3, 60, seed=2)
    with pytest.raises(ValueError, match="degree context"):
        th.monte_carlo_run(inst, 1, 64, seed=0, degree=2)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 9), st.integers(0, 40), st.data())
def test_F_in_unit_interval(k, D, data):
    mu = data.draw(st.integers(0, D))
    assert 0 <= th.exact_F(k, D, mu) <= 1
