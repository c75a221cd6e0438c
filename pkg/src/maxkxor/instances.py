"""Max kXOR instances: model, generation, serialization and exhaustive solving.

A clause ``(vars, sign)`` is satisfied by ``x in {-1, +1}^n`` iff the product of
``x[v]`` over ``vars`` equals ``sign``. With ``d = sign / 2`` the cost operator
``m/2 + sum_clauses d * Z...Z`` counts satisfied clauses, which is the
convention every analytic module in this package relies on.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path

import numpy as np

from .validation import (
    check_arity,
    check_assignment,
    check_positive_int,
    make_rng,
)

DEFAULT_BRUTE_FORCE_CAP = 24
DEFAULT_GENERATION_BUDGET = 10_000
_CHUNK_BITS = 20


class InstanceFormatError(ValueError):
    """Raised when an instance file cannot be parsed."""


class GenerationError(RuntimeError):
    """Raised when the generator exhausts its rejection budget."""


@dataclass(frozen=True)
class XorInstance:
    """k-uniform XOR constraint satisfaction instance in canonical form.

    Clause variable tuples are stored sorted and clauses are sorted
    lexicographically by ``(vars, sign)``, so two instances with the same
    clause multiset compare equal.
    """

    k: int
    n: int
    clauses: tuple

    def __post_init__(self):
        k = check_arity(self.k)
        n = check_positive_int(self.n, "n")
        canon = []
        for pos, clause in enumerate(self.clauses):
            try:
                vars_, sign = clause
            except (TypeError, ValueError):
                raise ValueError(f"clause {pos}: expected (vars, sign), got {clause!r}") from None
            vars_ = tuple(sorted(int(v) for v in vars_))
            if len(vars_) != k or len(set(vars_)) != k:
                raise ValueError(f"clause {pos}: needs {k} distinct variables, got {list(vars_)}")
            if vars_[0] < 0 or vars_[-1] >= n:
                raise ValueError(f"clause {pos}: variable index out of range [0, {n})")
            if sign not in (1, -1):
                raise ValueError(f"clause {pos}: sign must be +1 or -1, got {sign!r}")
            canon.append((vars_, int(sign)))
        canon.sort()
        for a, b in zip(canon, canon[1:]):
            if a == b:
                raise ValueError(f"duplicate clause {a}")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "clauses", tuple(canon))

    @property
    def m(self):
        return len(self.clauses)

    @property
    def var_array(self):
        """``(m, k)`` array of clause variable indices."""
        return np.array([c[0] for c in self.clauses], dtype=np.int64).reshape(self.m, self.k)

    @property
    def sign_array(self):
        return np.array([c[1] for c in self.clauses], dtype=np.int8)

    def degrees(self):
        """Number of clauses each variable appears in."""
        return np.bincount(self.var_array.ravel(), minlength=self.n)

    def other_degrees(self):
        """``(m, k)`` array: for each clause member, its degree minus one."""
        return self.degrees()[self.var_array] - 1

    def is_regular(self):
        deg = self.degrees()
        return bool(deg.size) and bool(np.all(deg == deg[0]))

    def contradictory_pairs(self):
        """Pairs of clause indices on the same variables with opposite signs."""
        out = []
        for i, (a, b) in enumerate(zip(self.clauses, self.clauses[1:])):
            if a[0] == b[0]:
                out.append((i, i + 1))
        return out

    def flip_all_signs(self):
        return XorInstance(self.k, self.n, tuple((v, -s) for v, s in self.clauses))

    def to_dict(self):
        return {
            "k": self.k,
            "n": self.n,
            "clauses": [{"vars": list(v), "sign": s} for v, s in self.clauses],
        }

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise InstanceFormatError("top-level JSON value must be an object")
        for key in ("k", "n", "clauses"):
            if key not in data:
                raise InstanceFormatError(f"missing field {key!r}")
        if not isinstance(data["clauses"], list):
            raise InstanceFormatError("field 'clauses' must be a list")
        clauses = []
        for pos, item in enumerate(data["clauses"]):
            if not isinstance(item, dict) or "vars" not in item or "sign" not in item:
                raise InstanceFormatError(f"clauses[{pos}]: expected object with 'vars' and 'sign'")
            if not isinstance(item["vars"], list) or not all(
                isinstance(v, int) and not isinstance(v, bool) for v in item["vars"]
            ):
                raise InstanceFormatError(f"clauses[{pos}].vars: expected a list of integers")
            clauses.append((item["vars"], item["sign"]))
        try:
            return cls(data["k"], data["n"], tuple(clauses))
        except ValueError as exc:
            raise InstanceFormatError(str(exc)) from None


def require_consistent(inst):
    """Analytic formulas are undefined on contradictory clause pairs."""
    pairs = inst.contradictory_pairs()
    if pairs:
        raise ValueError(f"instance has contradictory clause pairs {pairs[:3]}; refusing")


def _adjacency(inst):
    adj = [dict() for _ in range(inst.n)]
    for vars_, _ in inst.clauses:
        for u, v in combinations(vars_, 2):
            adj[u][v] = adj[u].get(v, 0) + 1
            adj[v][u] = adj[v].get(u, 0) + 1
    return adj


def check_triangle_free(inst):
    """True iff no variable pair shares two clauses and clause-mates have no
    common neighbour outside their shared clause."""
    adj = _adjacency(inst)
    if any(count > 1 for row in adj for count in row.values()):
        return False
    for vars_, _ in inst.clauses:
        members = set(vars_)
        for u, v in combinations(vars_, 2):
            common = adj[u].keys() & adj[v].keys()
            if common - members:
                return False
    return True


def generate_regular(k, degree, n, seed, *, triangle_free=True, max_attempts=DEFAULT_GENERATION_BUDGET):
    """Random ``degree``-regular k-uniform instance with uniformly random signs.

    Clauses are placed one at a time, each member drawn with probability
    proportional to its remaining stubs (configuration model) among variables
    that keep the partial instance valid. A placement that cannot be completed
    counts as one rejected attempt and frees a random clause, chosen near the
    blocking variable half of the time. With ``triangle_free=False`` only distinct variables
    and distinct clause sets are enforced.
    """
    k = check_arity(k)
    degree = check_positive_int(degree, "degree")
    n = check_positive_int(n, "n")
    if (n * degree) % k:
        raise ValueError(f"n * degree = {n * degree} is not divisible by k = {k}")
    if n < k:
        raise ValueError(f"need at least k = {k} variables")
    rng = make_rng(seed)
    m = n * degree // k
    stubs = np.full(n, degree, dtype=np.int64)
    adj = [dict() for _ in range(n)]
    placed = set()
    rejected = 0

    def update(clause, step):
        for a in clause:
            stubs[a] -= step
            for b in clause:
                if a != b:
                    cnt = adj[a].get(b, 0) + step
                    if cnt:
                        adj[a][b] = cnt
                    else:
                        del adj[a][b]

    while len(placed) < m:
        chosen = []
        for _ in range(k):
            ok = stubs > 0
            for c in chosen:
                ok[c] = False
                if triangle_free or k == 2:
                    for w in adj[c]:
                        ok[w] = False
                        if triangle_free:
                            ok[list(adj[w])] = False
            idx = np.flatnonzero(ok)
            if idx.size == 0:
                break
            weights = stubs[idx] / stubs[idx].sum()
            chosen.append(int(rng.choice(idx, p=weights)))
        clause = tuple(sorted(chosen))
        if len(chosen) == k and clause not in placed:
            placed.add(clause)
            update(clause, 1)
            continue
        rejected += 1
        if rejected > max_attempts:
            raise GenerationError(
                f"rejection budget of {max_attempts} attempts exhausted "
                f"(k={k}, degree={degree}, n={n}); try a larger n"
            )
        if not placed:
            continue
        blocker = chosen[0]
        near = {blocker, *adj[blocker]}
        for w in list(adj[blocker]):
            near.update(adj[w])
        pool = sorted(c for c in placed if near.intersection(c))
        # non-local removals escape traps whose cause lies elsewhere
        if not pool or rng.random() < 0.5:
            pool = sorted(placed)
        victim = pool[int(rng.integers(len(pool)))]
        placed.remove(victim)
        update(victim, -1)

    ordered = sorted(placed)
    signs = rng.choice(np.array([-1, 1]), size=m)
    inst = XorInstance(k, n, tuple((c, int(s)) for c, s in zip(ordered, signs)))
    if triangle_free and not check_triangle_free(inst):
        raise GenerationError("internal error: generated instance is not triangle-free")
    return inst


def generate_regular_triangle_free(k, degree, n, seed, max_attempts=DEFAULT_GENERATION_BUDGET):
    return generate_regular(k, degree, n, seed, triangle_free=True, max_attempts=max_attempts)


def evaluate_fraction(inst, assignment):
    """Exact fraction of clauses satisfied by a +-1 assignment."""
    x = check_assignment(assignment, inst.n)
    if inst.m == 0:
        raise ValueError("instance has no clauses")
    prods = np.prod(x[inst.var_array], axis=1)
    return Fraction(int(np.count_nonzero(prods == inst.sign_array)), inst.m)


def _check_cap(inst, cap):
    if inst.n > cap:
        raise ValueError(f"refusing exhaustive search over 2^{inst.n} assignments (cap n <= {cap})")


def _satisfied_count_chunks(inst):
    """Yield ``(offset, counts)`` over all assignments in lexicographic order.

    Assignment index ``i`` sets ``x[j] = +1`` iff bit ``n-1-j`` of ``i`` is one,
    so index order is lexicographic order with -1 < +1.
    """
    n = inst.n
    total = 1 << n
    chunk = min(total, 1 << _CHUNK_BITS)
    vars_ = inst.var_array
    # parity of minus-ones in a clause must be 0 for sign +1 and 1 for sign -1
    target = ((inst.sign_array < 0).astype(np.uint8) + inst.k) % 2
    for offset in range(0, total, chunk):
        idx = np.arange(offset, offset + chunk, dtype=np.uint64)
        bits = [((idx >> np.uint64(n - 1 - j)) & np.uint64(1)).astype(np.uint8) for j in range(n)]
        counts = np.zeros(chunk, dtype=np.int32)
        for c in range(inst.m):
            par = bits[vars_[c, 0]].copy()
            for v in vars_[c, 1:]:
                par ^= bits[v]
            counts += par == target[c]
        yield offset, counts


def _index_to_assignment(index, n):
    return np.array([1 if (index >> (n - 1 - j)) & 1 else -1 for j in range(n)], dtype=np.int8)


def brute_force_optimum(inst, cap=DEFAULT_BRUTE_FORCE_CAP):
    """Exact maximum satisfied fraction and the lexicographically smallest optimiser."""
    _check_cap(inst, cap)
    if inst.m == 0:
        raise ValueError("instance has no clauses")
    best, best_idx = -1, 0
    for offset, counts in _satisfied_count_chunks(inst):
        i = int(np.argmax(counts))
        if counts[i] > best:
            best, best_idx = int(counts[i]), offset + i
    return Fraction(best, inst.m), _index_to_assignment(best_idx, inst.n)


def optimal_assignments(inst, cap=DEFAULT_BRUTE_FORCE_CAP):
    """All optimal assignments (rows, lexicographic order) and the optimum."""
    _check_cap(inst, cap)
    best, hits = -1, []
    for offset, counts in _satisfied_count_chunks(inst):
        top = int(counts.max())
        if top > best:
            best, hits = top, []
        if top == best:
            hits.extend(int(offset + i) for i in np.flatnonzero(counts == top))
    rows = np.array([_index_to_assignment(i, inst.n) for i in hits], dtype=np.int8)
    return Fraction(best, inst.m), rows


def read_instance(path):
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    try:
        return XorInstance.from_dict(data)
    except InstanceFormatError as exc:
        raise InstanceFormatError(f"{path}: {exc}") from None


def dumps_instance(inst):
    return json.dumps(inst.to_dict(), separators=(",", ":")) + "\n"


def atomic_write_text(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_instance(inst, path):
    atomic_write_text(path, dumps_instance(inst))
