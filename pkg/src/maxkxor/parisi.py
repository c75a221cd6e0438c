"""Zero-temperature Parisi functional for mixed p-spin glasses.

For a step order parameter with breakpoints ``0 = q_0 < ... < q_{mu+1} = 1``
and values ``m_0 <= ... <= m_mu``, the recursion starts from
``Psi_{mu+1}(x) = |x|`` and applies, level by level,

    Psi_i(x) = (1/m_i) log E exp(m_i Psi_{i+1}(x + a_i z)),   a_i^2 = xi'(q_{i+1}) - xi'(q_i),

(a plain Gaussian expectation when ``m_i = 0``). The functional value is
``Psi_0(0) - B`` with ``B = 1/2 sum_i m_i int_{q_i}^{q_{i+1}} t xi''(t) dt``.

Intermediate levels integrate the piecewise-linear interpolant of the grid
values exactly against the Gaussian (tails continue with slope +-1); the
last level, acting on ``|x|``, is done in closed form.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.special import log_ndtr, logsumexp, ndtr, roots_hermite

from .validation import check_arity, check_nonneg_int, check_positive_int, make_rng

_SQRT_2PI = math.sqrt(2 * math.pi)
Q_FLOOR = 1e-4


def parisi_upper_bound_value():
    """Random energy model value ``sqrt(2 log 2)``."""
    return math.sqrt(2 * math.log(2))


class MixedXi:
    """Covariance polynomial ``xi(s) = sum_p c_p s^p``."""

    def __init__(self, terms):
        items = sorted(dict(terms).items()) if not isinstance(terms, MixedXi) else terms.terms
        powers, coefs = [], []
        for p, c in items:
            if isinstance(p, bool) or int(p) != p or p < 1:
                raise ValueError(f"xi power must be a positive integer, got {p!r}")
            c = float(c)
            if not math.isfinite(c) or c < 0:
                raise ValueError(f"xi coefficient for p={p} must be finite and >= 0, got {c!r}")
            if c > 0:
                powers.append(int(p))
                coefs.append(c)
        if not any(p >= 2 for p in powers):
            raise ValueError("xi needs a positive coefficient at some power p >= 2")
        self._p = np.array(powers, dtype=float)
        self._c = np.array(coefs)

    @classmethod
    def pure(cls, k):
        return cls({check_arity(k): 1.0})

    @classmethod
    def from_config(cls, entries):
        """Build from ``[{"p": int, "c": float}, ...]``."""
        try:
            return cls({int(e["p"]): float(e["c"]) for e in entries})
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed xi entry list: {exc}") from exc

    @property
    def terms(self):
        return [(int(p), float(c)) for p, c in zip(self._p, self._c)]

    def to_config(self):
        return [{"p": p, "c": c} for p, c in self.terms]

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.sum(self._c * t[..., None] ** self._p, axis=-1)

    def d1(self, t):
        t = np.asarray(t, dtype=float)
        return np.sum(self._c * self._p * t[..., None] ** (self._p - 1), axis=-1)

    def d2(self, t):
        t = np.asarray(t, dtype=float)
        p = self._p
        return np.sum(self._c * p * (p - 1) * t[..., None] ** np.maximum(p - 2, 0), axis=-1)

    def penalty_integral(self, lo, hi):
        """``int_lo^hi t xi''(t) dt = [t xi'(t) - xi(t)]_lo^hi`` termwise."""
        return float(np.sum(self._c * (self._p - 1) * (hi**self._p - lo**self._p)))

    def __repr__(self):
        return f"MixedXi({dict(self.terms)})"

    def __eq__(self, other):
        return isinstance(other, MixedXi) and self.terms == other.terms


@dataclass(frozen=True)
class StepOrderParam:
    """Step function equal to ``m[i]`` on ``[q[i], q[i+1])``; ``q`` includes both 0 and 1."""

    q: tuple
    m: tuple

    def __post_init__(self):
        q = tuple(float(v) for v in self.q)
        m = tuple(float(v) for v in self.m)
        if len(q) != len(m) + 1 or len(m) < 1:
            raise ValueError("need len(q) == len(m) + 1 with at least one level")
        if q[0] != 0.0 or q[-1] != 1.0:
            raise ValueError("breakpoints must start at 0 and end at 1")
        if any(b <= a for a, b in zip(q, q[1:])):
            raise ValueError(f"breakpoints must be strictly increasing, got {q}")
        if any(not math.isfinite(v) or v < 0 for v in m):
            raise ValueError(f"values must be finite and non-negative, got {m}")
        if any(b < a for a, b in zip(m, m[1:])):
            raise ValueError(f"values must be nondecreasing, got {m}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "m", m)

    @classmethod
    def constant_zero(cls):
        return cls((0.0, 1.0), (0.0,))

    @property
    def levels(self):
        return len(self.m)

    @property
    def pieces(self):
        """Number of pieces beyond the first (``m_0 = 0``) one."""
        return len(self.m) - 1

    def widths(self, xi):
        return np.sqrt(np.diff(xi.d1(np.array(self.q))))

    def penalty(self, xi):
        return 0.5 * sum(mi * xi.penalty_integral(lo, hi) for mi, lo, hi in zip(self.m, self.q, self.q[1:]))

    def to_dict(self):
        return {"q": list(self.q), "m": list(self.m)}


@dataclass(frozen=True)
class ParisiSettings:
    """Numerical settings. ``grid`` is bumped to the next odd count so 0 is a node."""

    grid: int = 1601
    quad: int = 61
    method: str = "exact"
    extent: float | None = None

    def __post_init__(self):
        grid = check_positive_int(self.grid, "grid")
        if grid < 21:
            raise ValueError(f"grid must have at least 21 points, got {grid}")
        check_positive_int(self.quad, "quad")
        if self.method not in ("exact", "hermite"):
            raise ValueError(f"method must be 'exact' or 'hermite', got {self.method!r}")
        if self.extent is not None and not self.extent > 0:
            raise ValueError("extent must be positive")

    @property
    def points(self):
        return self.grid | 1

    def half_width(self, widths):
        required = 4.0 * float(np.sum(widths))
        if self.extent is None:
            return required + 8.0
        if self.extent < required:
            raise ValueError(
                f"grid extent {self.extent:g} is below the required {required:g} (4 x total Gaussian width)"
            )
        return float(self.extent)

    def to_dict(self):
        return {"grid": self.grid, "quad": self.quad, "method": self.method, "extent": self.extent}


@dataclass
class ParisiResult:
    value: float
    order_param: StepOrderParam
    settings: ParisiSettings
    evaluations: int = 0
    converged: bool = True
    warning: bool = False
    improvement_log: list = field(default_factory=list)

    def diagnostics(self):
        return {
            "evaluations": self.evaluations,
            "converged": self.converged,
            "warning": self.warning,
            "improvement_log": [[stage, v] for stage, v in self.improvement_log],
        }


def _log_diff_ndtr(lo, hi):
    """``log(Phi(hi) - Phi(lo))`` for ``hi > lo``, stable in both tails."""
    flip = lo > 0
    a = np.where(flip, -hi, lo)
    b = np.where(flip, -lo, hi)
    lb = log_ndtr(b)
    la = log_ndtr(a)
    return lb + np.log(-np.expm1(np.minimum(la - lb, -1e-300)))


def terminal_level(x, m, a):
    """One level applied to ``|x|`` in closed form."""
    x = np.asarray(x, dtype=float)
    if m == 0:
        return x * (2 * ndtr(x / a) - 1) + 2 * a * np.exp(-x * x / (2 * a * a)) / _SQRT_2PI
    lse = np.logaddexp(m * x + log_ndtr(x / a + m * a), -m * x + log_ndtr(-x / a + m * a))
    return m * a * a / 2 + lse / m


def smooth_level(x, nodes, values, m, a):
    """One level applied to the piecewise-linear interpolant of ``values`` on ``nodes``.

    Beyond the grid the interpolant continues with slope -1 (left) and +1 (right).
    """
    x = np.asarray(x, dtype=float)
    edges = np.concatenate([[-np.inf], nodes, [np.inf]])
    slope = np.concatenate([[-1.0], np.diff(values) / np.diff(nodes), [1.0]])
    anchor = np.concatenate([[nodes[0]], nodes[:-1], [nodes[-1]]])
    anchor_val = np.concatenate([[values[0]], values[:-1], [values[-1]]])
    intercept = anchor_val - slope * anchor
    X = x[:, None]
    lo = (edges[None, :-1] - X) / a
    hi = (edges[None, 1:] - X) / a
    if m == 0:
        mass = np.exp(_log_diff_ndtr(lo, hi))
        dens = (np.exp(-0.5 * lo**2) - np.exp(-0.5 * hi**2)) / _SQRT_2PI
        return (intercept * mass + slope * (X * mass + a * dens)).sum(axis=1)
    shift = m * slope * a
    terms = m * intercept + m * slope * X + 0.5 * shift**2 + _log_diff_ndtr(lo - shift, hi - shift)
    return logsumexp(terms, axis=1) / m


def _hermite_level(x, nodes, values, m, a, quad):
    t, w = roots_hermite(quad)
    pts = np.asarray(x, dtype=float)[:, None] + a * math.sqrt(2) * t[None, :]
    inner = np.interp(pts, nodes, values)
    left, right = pts < nodes[0], pts > nodes[-1]
    inner = np.where(left, values[0] + (nodes[0] - pts), inner)
    inner = np.where(right, values[-1] + (pts - nodes[-1]), inner)
    logw = np.log(w / math.sqrt(math.pi))
    if m == 0:
        return inner @ (w / math.sqrt(math.pi))
    return logsumexp(m * inner + logw, axis=1) / m


def _apply(x, nodes, values, m, a, settings):
    if settings.method == "hermite":
        return _hermite_level(x, nodes, values, m, a, settings.quad)
    return smooth_level(x, nodes, values, m, a)


def psi_levels(xi, op, settings=None):
    """Grid and the list ``[Psi_mu, ..., Psi_1]`` of intermediate levels on it."""
    settings = settings or ParisiSettings()
    a = op.widths(xi)
    L = settings.half_width(a)
    N = settings.points
    x = np.linspace(-L, L, N)
    half = x[N // 2 :]
    if op.levels == 1:
        return x, []
    psi = terminal_level(x, op.m[-1], a[-1])
    out = [psi]
    for i in range(op.levels - 2, 0, -1):
        h = _apply(half, x, psi, op.m[i], a[i], settings)
        psi = np.concatenate([h[:0:-1], h])
        out.append(psi)
    return x, out


def evaluate_functional(xi, op, settings=None):
    """``Psi_0(0) - B`` for the given order parameter."""
    settings = settings or ParisiSettings()
    a = op.widths(xi)
    if np.any(a <= 0):
        raise ValueError("xi' must increase strictly across each piece")
    B = op.penalty(xi)
    if op.levels == 1:
        return float(terminal_level(np.array([0.0]), op.m[0], a[0])[0]) - B
    x, levels = psi_levels(xi, op, settings)
    top = _apply(np.array([0.0]), x, levels[-1], op.m[0], a[0], settings)
    return float(top[0]) - B


def _unpack(u, pieces):
    """Unconstrained vector -> order parameter with ``m_0 = 0`` and ``q_1 >= Q_FLOOR``."""
    q = [0.0]
    prev = 0.0
    for i in range(pieces):
        lo = Q_FLOOR if i == 0 else prev
        z = min(max(u[i], -700.0), 700.0)
        nxt = lo + (1 - lo) / (1 + math.exp(-z))
        if nxt <= prev or nxt >= 1.0:
            return None
        q.append(nxt)
        prev = nxt
    q.append(1.0)
    m = [0.0]
    for i in range(pieces):
        m.append(m[-1] + math.exp(min(u[pieces + i], 50.0)))
    return StepOrderParam(tuple(q), tuple(m))


def _pack(op):
    pieces = op.pieces
    u = []
    prev = 0.0
    for i in range(pieces):
        lo = Q_FLOOR if i == 0 else prev
        frac = (op.q[i + 1] - lo) / (1 - lo)
        frac = min(max(frac, 1e-12), 1 - 1e-12)
        u.append(math.log(frac / (1 - frac)))
        prev = op.q[i + 1]
    for i in range(pieces):
        u.append(math.log(max(op.m[i + 1] - op.m[i], 1e-300)))
    return np.array(u)


def minimize_parisi(
    xi, pieces, settings=None, seed=0, *, n_restarts=3, search_grid=401, seed_points=4, x0=None, maxiter=3000
):
    """Minimise the functional over ``pieces`` nonzero steps (``m_0 = 0`` fixed).

    A coarse grid over the unconstrained coordinates seeds ``n_restarts``
    simplex runs at ``min(search_grid, grid)`` points; the best is polished at
    the full grid. Non-convergence sets the warning flag instead of raising.
    """
    settings = settings or ParisiSettings()
    if not isinstance(xi, MixedXi):
        xi = MixedXi.pure(xi)
    pieces = check_nonneg_int(pieces, "pieces")
    rng = make_rng(seed)
    coarse_settings = ParisiSettings(min(search_grid, settings.grid), settings.quad, settings.method, settings.extent)
    evaluations = 0

    if pieces == 0:
        op = StepOrderParam.constant_zero()
        v = evaluate_functional(xi, op, settings)
        return ParisiResult(v, op, settings, 1, True, False, [("closed-form", v)])

    def objective(u, s):
        nonlocal evaluations
        evaluations += 1
        op = _unpack(u, pieces)
        if op is None:
            return math.inf
        v = evaluate_functional(xi, op, s)
        return v if math.isfinite(v) else math.inf

    log = []
    best_val = math.inf

    def record(stage, v):
        nonlocal best_val
        if v < best_val:
            best_val = v
            log.append((stage, float(v)))

    if x0 is not None:
        starts = [np.asarray(_pack(x0) if isinstance(x0, StepOrderParam) else x0, dtype=float)]
    else:
        axes = [np.linspace(-3, 3, seed_points)] * pieces + [np.linspace(-2, 2, seed_points)] * pieces
        scored = []
        for u in itertools.product(*axes):
            u = np.array(u)
            v = objective(u, coarse_settings)
            scored.append((v, u))
            record("seed", v)
        scored.sort(key=lambda t: t[0])
        starts = [u for _, u in scored[: max(1, n_restarts)]]
        # jitter repeated restarts so they explore distinct basins
        starts = [starts[0]] + [u + rng.normal(scale=0.25, size=u.shape) for u in starts[1:]]

    converged = True
    best = None
    for r, u0 in enumerate(starts):
        res = minimize(
            objective,
            u0,
            args=(coarse_settings,),
            method="Nelder-Mead",
            options={"xatol": 1e-5, "fatol": 1e-8, "maxiter": maxiter},
        )
        record(f"restart-{r}", res.fun)
        if best is None or res.fun < best.fun:
            best = res
    converged &= bool(best.success)

    if settings.points > coarse_settings.points:
        coarse_best = best.x
        res = minimize(
            objective,
            coarse_best,
            args=(settings,),
            method="Nelder-Mead",
            options={"xatol": 1e-5, "fatol": 1e-8, "maxiter": max(1000, maxiter // 3)},
        )
        # the polish restarts the log at the finer grid
        best_val = math.inf
        record("polish", res.fun)
        best = res
        converged &= bool(res.success)

    op = _unpack(best.x, pieces)
    value = evaluate_functional(xi, op, settings)
    if not converged:
        warnings.warn(f"Parisi minimisation did not converge; returning best value {value:.6g}", RuntimeWarning)
    return ParisiResult(value, op, settings, evaluations, converged, not converged, log)


def optimal_fraction_kxor(k, D, P):
    """Typical optimal satisfying fraction ``1/2 + (P/2) sqrt(k/D)`` of sparse random Max kXOR."""
    k = check_arity(k)
    D = check_positive_int(D, "D")
    return 0.5 + 0.5 * P * math.sqrt(k / D)


def maxcut_parisi_constant(P2):
    """The MaxCut normalisation ``P* = P(2)/sqrt(2)``."""
    return P2 / math.sqrt(2)


def ksat_constant(k, B):
    """``C_k = B(k) / 2^k``."""
    return B / 2 ** check_arity(k)


def ksat_fraction(k, C, density):
    """Typical optimal Max kSAT fraction ``1 - 2^-k + C/sqrt(density)``."""
    k = check_arity(k)
    if not density > 0:
        raise ValueError("clause density must be positive")
    return 1 - 2.0**-k + C / math.sqrt(density)


def ksat_mode(k, xi, pieces, settings=None, seed=0, **kwargs):
    """Minimise a caller-supplied kSAT covariance; returns ``(B, C, result)``."""
    if not isinstance(xi, MixedXi):
        raise TypeError("ksat_mode needs an explicit MixedXi configuration")
    result = minimize_parisi(xi, pieces, settings, seed, **kwargs)
    return result.value, ksat_constant(k, result.value), result
