"""One-round local threshold algorithm on (D+1)-regular triangle-free Max kXOR.

Every node starts from a uniformly random +-1 value and flips iff at most
``mu`` of its clauses are satisfied. For a fixed clause the member flip
probabilities are ``g`` (clause unsatisfied) and ``r`` (clause satisfied),
``delta = g - r = C(D, mu) / 2^D``, and the satisfied probability is
``F = 1/2 + ((1 - 2g + 2 delta)^k - (1 - 2g)^k) / 4``.

All finite-D quantities are computed from exact integer binomial sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq
from scipy.special import erf

from .instances import require_consistent
from .validation import check_arity, check_assignments, check_nonneg_int, check_positive_int, make_rng

_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


@dataclass(frozen=True)
class ThresholdQuantities:
    g: float
    h: float
    r: float
    s_sat: float
    delta: float


def _tail_sums(D):
    """Cumulative sums ``sum_{i<=mu} C(D, i)`` for mu = -1..D (exact ints)."""
    sums = [0]
    term = 1
    for i in range(D + 1):
        sums.append(sums[-1] + term)
        term = term * (D - i) // (i + 1)
    return sums


def _check_mu(D, mu):
    mu = check_nonneg_int(mu, "mu")
    if mu > D:
        raise ValueError(f"threshold mu={mu} outside [0, D={D}]")
    return mu


def threshold_quantities(D, mu, exact=False):
    """Flip probabilities as floats, or as fractions when ``exact``."""
    D = check_nonneg_int(D, "D")
    mu = _check_mu(D, mu)
    sums = _tail_sums(D)
    N = 1 << D
    g = Fraction(sums[mu + 1], N)
    r = Fraction(sums[mu], N)
    vals = (g, 1 - g, r, 1 - r, g - r)
    return ThresholdQuantities(*(vals if exact else map(float, vals)))


def _F_numerators(k, D):
    """Exact integers ``num[mu]`` with ``F(mu) = 1/2 + num[mu] / (4 * 2^(D k))``."""
    sums = _tail_sums(D)
    N = 1 << D
    return [(N - 2 * sums[mu]) ** k - (N - 2 * sums[mu + 1]) ** k for mu in range(D + 1)]


def exact_F(k, D, mu, exact=False):
    """Satisfied probability of one clause after the flip round.

    Returns a float, or a :class:`~fractions.Fraction` when ``exact``.
    """
    k = check_arity(k)
    D = check_nonneg_int(D, "D")
    mu = _check_mu(D, mu)
    sums = _tail_sums(D)
    N = 1 << D
    num = (N - 2 * sums[mu]) ** k - (N - 2 * sums[mu + 1]) ** k
    value = Fraction(1, 2) + Fraction(num, 4 * N**k)
    return value if exact else float(value)


def optimize_mu(k, D):
    """Best threshold by exhaustive scan; ties go to the smaller ``mu``."""
    k = check_arity(k)
    D = check_nonneg_int(D, "D")
    nums = _F_numerators(k, D)
    best = max(range(D + 1), key=lambda mu: (nums[mu], -mu))
    return best, float(Fraction(1, 2) + Fraction(nums[best], 4 * (1 << D) ** k))


def optimal_mus(k, D):
    """Every threshold attaining the exact maximum."""
    nums = _F_numerators(check_arity(k), check_nonneg_int(D, "D"))
    top = max(nums)
    return [mu for mu, v in enumerate(nums) if v == top]


def finite_d_constant(k, D):
    """``C_{k,D} = (F_opt - 1/2) sqrt(D)`` and the optimal threshold."""
    mu, F = optimize_mu(k, D)
    return (F - 0.5) * math.sqrt(D), mu


def _limit_stationarity(k, alpha):
    return (k - 1) * _SQRT_2_OVER_PI * math.exp(-2 * alpha * alpha) - 2 * alpha * erf(alpha * math.sqrt(2))


def large_d_constant_threshold(k, bracket=(-3.0, -1e-12)):
    """Limit constant ``C_k`` and scaled threshold ``alpha`` (``mu = D/2 + alpha sqrt(D)``)."""
    k = check_arity(k)
    lo, hi = bracket
    f_lo, f_hi = _limit_stationarity(k, lo), _limit_stationarity(k, hi)
    if f_lo * f_hi > 0:
        trace = ", ".join(
            f"{a:.3f}:{_limit_stationarity(k, a):.3e}" for a in np.linspace(lo, hi, 7)
        )
        raise RuntimeError(f"k={k}: stationarity condition has no sign change on {bracket}; scan {trace}")
    alpha = brentq(lambda a: _limit_stationarity(k, a), lo, hi, xtol=1e-15, rtol=1e-15)
    C = 0.5 * k * _SQRT_2_OVER_PI * math.exp(-2 * alpha * alpha) * erf(-alpha * math.sqrt(2)) ** (k - 1)
    return C, alpha


def threshold_round(inst, X, mu):
    """Apply one synchronous flip round to each row of ``X`` (+-1 assignments)."""
    X = check_assignments(X, inst.n)
    sat = np.prod(X[:, inst.var_array], axis=2) == inst.sign_array
    counts = np.zeros((X.shape[0], inst.n), dtype=np.int64)
    for j in range(inst.k):
        np.add.at(counts.T, inst.var_array[:, j], sat.T)
    return np.where(counts <= mu, -X, X).astype(np.int8)


def _incidence(inst):
    slots = [[] for _ in range(inst.n)]
    for c, vars_ in enumerate(inst.var_array):
        for v in vars_:
            slots[v].append(c)
    width = max(len(s) for s in slots)
    inc = np.full((inst.n, width), -1, dtype=np.int64)
    for v, s in enumerate(slots):
        inc[v, : len(s)] = s
    return inc


def _le_mask(planes, mu, max_count):
    """Bitwise ``count <= mu`` for a bit-sliced counter."""
    ones = np.uint64(0xFFFFFFFFFFFFFFFF)
    if mu < 0:
        return np.zeros_like(planes[0])
    if mu >= max_count:
        return np.full_like(planes[0], ones)
    mask = np.zeros_like(planes[0])
    for value in range(mu + 1):
        eq = np.full_like(planes[0], ones)
        for b, plane in enumerate(planes):
            eq &= plane if (value >> b) & 1 else ~plane
        mask |= eq
    return mask


def _clause_sat_words(X, var_array, flip_target):
    par = X[var_array[:, 0]].copy()
    for j in range(1, var_array.shape[1]):
        par ^= X[var_array[:, j]]
    return ~(par ^ flip_target[:, None])


def monte_carlo_run(inst, mu, trials, seed, *, degree=None, simulate_missing=False, block_words=512):
    """Empirical mean satisfied fraction after one flip round, and its standard error.

    Trials are bit-packed 64 per machine word. ``degree`` is the clauses-per-
    variable context ``D + 1`` (default: the maximum degree). With
    ``simulate_missing``, each variable below that degree receives independent
    fair-coin "satisfied" votes for its missing clauses.
    """
    require_consistent(inst)
    trials = check_positive_int(trials, "trials")
    mu = int(mu)
    deg = inst.degrees()
    if degree is None:
        degree = int(deg.max())
    if deg.max() > degree:
        raise ValueError(f"a variable has {deg.max()} clauses, above the degree context {degree}")
    rng = make_rng(seed)
    inc = _incidence(inst)
    var_array = inst.var_array
    # bit = 1 encodes x = -1; clause satisfied iff parity of -1s matches (sign == -1)
    flip_target = np.where(inst.sign_array < 0, np.uint64(0xFFFFFFFFFFFFFFFF), np.uint64(0))
    slots = degree if simulate_missing else inc.shape[1]
    n_planes = max(1, int(slots).bit_length())
    words_total = -(-trials // 64)
    counts = []
    done = 0
    while done < words_total:
        wb = min(block_words, words_total - done)
        X = rng.bit_generator.random_raw(inst.n * wb).reshape(inst.n, wb)
        sat = _clause_sat_words(X, var_array, flip_target)
        planes = [np.zeros((inst.n, wb), dtype=np.uint64) for _ in range(n_planes)]
        for slot in range(slots):
            if slot < inc.shape[1]:
                real = inc[:, slot] >= 0
                word = np.where(real[:, None], sat[np.maximum(inc[:, slot], 0)], np.uint64(0))
            else:
                real = np.zeros(inst.n, dtype=bool)
                word = np.zeros((inst.n, wb), dtype=np.uint64)
            if simulate_missing:
                missing = ~real
                if missing.any():
                    coins = rng.bit_generator.random_raw(int(missing.sum()) * wb).reshape(-1, wb)
                    word[missing] = coins
            carry = word
            for plane in planes:
                nxt = plane & carry
                plane ^= carry
                carry = nxt
        X ^= _le_mask(planes, mu, slots)
        sat = _clause_sat_words(X, var_array, flip_target)
        unpacked = np.unpackbits(sat.view(np.uint8), axis=1, bitorder="little")
        counts.append(unpacked.sum(axis=0, dtype=np.int64))
        done += wb
    per_trial = np.concatenate(counts)[:trials] / inst.m
    mean = float(per_trial.mean())
    stderr = float(per_trial.std(ddof=1) / math.sqrt(trials)) if trials > 1 else math.nan
    return mean, stderr
