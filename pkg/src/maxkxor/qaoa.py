"""Depth-1 QAOA on triangle-free Max kXOR: closed forms, optimisers, and an
exact statevector oracle.

Angles follow ``U_C = exp(-i gamma C)`` and ``U_B = exp(-i beta sum_j X_j)``
applied to ``|+>^n``. Throughout, ``p = cos 2beta``, ``q = sin 2beta``,
``c = cos gamma`` and ``s = sin gamma``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize, minimize_scalar

from .instances import require_consistent
from .validation import check_angle, check_arity, check_nonneg_int

STATEVECTOR_CAP = 24


class QaoaOptimizationError(RuntimeError):
    pass


@dataclass(frozen=True)
class QaoaAngles:
    gamma: float
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "gamma", check_angle(self.gamma, "gamma"))
        object.__setattr__(self, "beta", check_angle(self.beta, "beta"))

    @property
    def p(self):
        return math.cos(2 * self.beta)

    @property
    def q(self):
        return math.sin(2 * self.beta)

    @property
    def c(self):
        return math.cos(self.gamma)

    @property
    def s(self):
        return math.sin(self.gamma)


@dataclass(frozen=True)
class QaoaClosedFormResult:
    """Optimised depth-1 performance.

    ``expectation`` is the per-clause value of ``<d Z...Z>``; the satisfied
    fraction is ``0.5 + expectation``. For finite ``D`` the large-degree
    constant is ``expectation * sqrt(D)``; limit results have ``D=None`` and
    carry the constant and scaled angle ``t = gamma * sqrt(D)`` only.
    """

    k: int
    D: int | None
    expectation: float | None
    angles: QaoaAngles
    constant: float
    t: float
    stationarity_residual: float = 0.0

    @property
    def fraction(self):
        if self.expectation is None:
            raise AttributeError("limit results have no finite-D fraction")
        return 0.5 + self.expectation


def closed_form_regular(k, D, gamma, beta):
    """Per-clause ``<d Z...Z>`` on a (D+1)-regular triangle-free instance.

    Equals ``(s/2) Im[(p + i q c^D)^k]``; accepts broadcastable array angles.
    """
    k = check_arity(k)
    D = check_nonneg_int(D, "D")
    gamma = np.asarray(gamma, dtype=float)
    beta = np.asarray(beta, dtype=float)
    z = np.cos(2 * beta) + 1j * np.sin(2 * beta) * np.cos(gamma) ** D
    out = 0.5 * np.sin(gamma) * (z**k).imag
    return float(out) if out.ndim == 0 else out


def closed_form_triangle_free(degrees, gamma, beta):
    """Per-clause ``<d Z...Z>`` for a clause whose members have ``degrees[i]``
    other clauses each. Uses ``prod_i (p + i q c^{D_i})``, whose odd-order
    terms are the odd-size subset sums over the clause members."""
    degrees = np.asarray(degrees, dtype=np.int64)
    if degrees.ndim != 1 or degrees.size < 2:
        raise ValueError("degrees must be a vector with one entry per clause member (k >= 2)")
    if np.any(degrees < 0):
        raise ValueError("other-degrees must be non-negative")
    p, q = math.cos(2 * beta), math.sin(2 * beta)
    c, s = math.cos(gamma), math.sin(gamma)
    z = np.prod(p + 1j * q * c ** degrees.astype(float))
    return 0.5 * s * z.imag


def instance_fraction(inst, gamma, beta):
    """Closed-form expected satisfied fraction, averaged over clauses.

    Exact for triangle-free instances (and, in expectation over signs, for
    instances whose clauses pairwise share at most one variable).
    """
    require_consistent(inst)
    values = [closed_form_triangle_free(row, gamma, beta) for row in inst.other_degrees()]
    return 0.5 + float(np.mean(values))


def _branch_value(k, D, gamma, branch):
    s, c = math.sin(gamma), math.cos(gamma)
    q = c / (s * math.sqrt(k * D))
    if q > 1.0:
        return -math.inf, math.nan
    p = branch * math.sqrt(max(0.0, 1.0 - q * q))
    z = complex(p, q * c**D)
    return 0.5 * s * (z**k).imag, q


def scan_optimum_2d(k, D, points=1000, gamma_range=(0.0, math.pi), beta_range=(0.0, math.pi)):
    """Unconstrained dense grid over both angles followed by simplex refinement."""
    g = np.linspace(*gamma_range, points)
    b = np.linspace(*beta_range, points)
    G, B = np.meshgrid(g, b, indexing="ij")
    V = closed_form_regular(k, D, G, B)
    i, j = np.unravel_index(int(np.argmax(V)), V.shape)
    res = minimize(
        lambda x: -closed_form_regular(k, D, x[0], x[1]),
        x0=[G[i, j], B[i, j]],
        method="Nelder-Mead",
        options={"xatol": 1e-12, "fatol": 1e-16, "maxiter": 4000},
    )
    return float(-res.fun), float(res.x[0]), float(res.x[1])


def fold_angles(gamma, beta, D):
    """Value-preserving representative with ``gamma`` in [0, pi/2] and ``beta`` in [0, pi).

    Symmetries of the regular closed form: ``(g, b) -> (-g, -b)``,
    ``b -> b + pi``, and ``g -> pi - g`` combined with ``b -> -b`` when D is odd.
    """
    gamma = math.remainder(gamma, 2 * math.pi)
    if gamma < 0:
        gamma, beta = -gamma, -beta
    if gamma > math.pi / 2:
        gamma = math.pi - gamma
        if D % 2:
            beta = -beta
    beta = beta % math.pi
    # tiny negative beta rounds to exactly pi
    return gamma, 0.0 if beta >= math.pi else beta


def _polish_stationary(f, x, lo, hi, h):
    # a bounded scalar search stalls near sqrt(eps); refine on the derivative
    d = lambda y: f(y + h) - f(y - h)  # noqa: E731
    a, b = max(lo, x - 1e-6), min(hi, x + 1e-6)
    if a < b and d(a) * d(b) < 0:
        return float(brentq(d, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps))
    return x


def optimize_finite_D(k, D, scan_points=200):
    """Globally maximise :func:`closed_form_regular` over both angles."""
    k = check_arity(k)
    D = check_nonneg_int(D, "D")
    if D == 0:
        # the stationarity relation is undefined at D = 0
        value, g, b = scan_optimum_2d(k, 0, points=400, gamma_range=(0.0, math.pi / 2), beta_range=(0.0, math.pi / 2))
        g = min(g, math.pi / 2)
        return QaoaClosedFormResult(k, 0, value, QaoaAngles(g, b), math.nan, math.nan)

    g_lo = math.atan(1.0 / math.sqrt(k * D))
    grid = np.linspace(g_lo, math.pi / 2, scan_points + 2)[1:-1]
    best = None
    for branch in (1.0, -1.0):
        vals = np.array([_branch_value(k, D, g, branch)[0] for g in grid])
        i = int(np.argmax(vals))
        lo = grid[max(i - 1, 0)] if i > 0 else g_lo
        hi = grid[min(i + 1, len(grid) - 1)] if i < len(grid) - 1 else math.pi / 2
        res = minimize_scalar(
            lambda g: -_branch_value(k, D, g, branch)[0],
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-13},
        )
        g = _polish_stationary(lambda x: _branch_value(k, D, x, branch)[0], float(res.x), lo, hi, max(1e-5 / math.sqrt(D), 1e-7))
        cand = (float(_branch_value(k, D, g, branch)[0]), g, branch)
        if best is None or cand[0] > best[0]:
            best = cand
    value, gamma, branch = best
    q = _branch_value(k, D, gamma, branch)[1]
    half = 0.5 * math.asin(q)
    beta = half if branch > 0 else math.pi / 2 - half
    residual = math.sin(2 * beta) - math.cos(gamma) / (math.sin(gamma) * math.sqrt(k * D))
    return QaoaClosedFormResult(
        k,
        D,
        value,
        QaoaAngles(gamma, beta),
        value * math.sqrt(D),
        gamma * math.sqrt(D),
        residual,
    )


def _large_d_objective(k, t):
    root = math.sqrt(max(t * t * k - 1.0, 0.0))
    z = complex(root, math.exp(-t * t / 2))
    return 0.5 * t ** (1 - k) * k ** (-k / 2) * (z**k).imag


def large_d_constant(k, t_max=6.0, scan_points=4000):
    """Limit constant ``C`` with fraction ``1/2 + C/sqrt(D)``, optimal ``t`` and ``beta``."""
    k = check_arity(k)
    t_min = 1.0 / math.sqrt(k)
    ts = np.linspace(t_min, t_max, scan_points)
    vals = np.array([_large_d_objective(k, t) for t in ts])
    i = int(np.argmax(vals))
    if i == 0 or i == len(ts) - 1:
        raise QaoaOptimizationError(
            f"k={k}: maximum at scan boundary t={ts[i]:.6g} of [{t_min:.6g}, {t_max:.6g}]"
        )
    res = minimize_scalar(
        lambda t: -_large_d_objective(k, t),
        bounds=(ts[i - 1], ts[i + 1]),
        method="bounded",
        options={"xatol": 1e-13},
    )
    if not res.success:
        raise QaoaOptimizationError(f"k={k}: no convergence in bracket [{ts[i - 1]:.6g}, {ts[i + 1]:.6g}]")
    t = float(res.x)
    beta = 0.5 * math.asin(1.0 / (t * math.sqrt(k)))
    return float(-res.fun), t, beta


def _check_statevector_size(inst, cap):
    if inst.n > cap:
        raise ValueError(f"statevector over {inst.n} qubits exceeds cap n <= {cap}")


def _clause_zvalues(inst, idx):
    n = inst.n
    bits = {}

    def bit(j):
        if j not in bits:
            bits[j] = ((idx >> np.uint32(n - 1 - j)) & np.uint32(1)).astype(np.int8)
        return bits[j]

    for vars_ in inst.var_array:
        par = bit(int(vars_[0])).copy()
        for v in vars_[1:]:
            par ^= bit(int(v))
        yield 1 - 2 * par


def qaoa_state(inst, gamma, beta, cap=STATEVECTOR_CAP):
    """Depth-1 state ``U_B U_C |+>^n`` as a dense amplitude vector."""
    _check_statevector_size(inst, cap)
    n = inst.n
    dim = 1 << n
    idx = np.arange(dim, dtype=np.uint32)
    cost = np.zeros(dim)
    for zval, sign in zip(_clause_zvalues(inst, idx), inst.sign_array):
        cost += 0.5 * (1 + int(sign) * zval)
    psi = np.exp(-1j * gamma * cost) / math.sqrt(dim)
    cb, sb = math.cos(beta), -1j * math.sin(beta)
    for j in range(n):
        view = psi.reshape(1 << j, 2, -1)
        a0 = view[:, 0, :].copy()
        a1 = view[:, 1, :]
        view[:, 0, :] = cb * a0 + sb * a1
        view[:, 1, :] = sb * a0 + cb * a1
    return psi


def statevector_clause_expectations(inst, gamma, beta, cap=STATEVECTOR_CAP):
    """Exact ``<d Z...Z>`` for every clause, with ``d = sign/2``."""
    psi = qaoa_state(inst, gamma, beta, cap)
    prob = np.abs(psi) ** 2
    idx = np.arange(prob.size, dtype=np.uint32)
    return np.array(
        [0.5 * int(sign) * float(prob @ zval) for zval, sign in zip(_clause_zvalues(inst, idx), inst.sign_array)]
    )


def statevector_expectation(inst, gamma, beta, cap=STATEVECTOR_CAP):
    """Exact expected satisfied fraction of the depth-1 QAOA state."""
    return 0.5 + float(np.mean(statevector_clause_expectations(inst, gamma, beta, cap)))
