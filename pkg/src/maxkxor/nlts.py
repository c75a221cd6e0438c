"""Max 3XOR instances with a partial Z2 symmetry, built from a D-regular inner graph.

Each inner edge ``(u, v)`` becomes two clauses: ``{a, u, v}`` satisfied iff
the product is -1 and ``{b, u, v}`` satisfied iff it is +1, where ``a`` is a
source node and ``b`` a sink node. Every clause holds exactly two inner
variables, so flipping all inner variables preserves every clause.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .instances import XorInstance, _satisfied_count_chunks, atomic_write_text, dumps_instance
from .validation import check_assignments, check_nonneg_int, make_rng

EXHAUSTIVE_CAP = 22
DEPTH_SCALE = 5184
DEPTH_FACTOR = 648


@dataclass(frozen=True)
class NltsInstance:
    inner_edges: tuple
    n_inner: int
    D: int
    r: float
    sources: tuple
    sinks: tuple
    edge_source: tuple
    edge_sink: tuple
    instance: XorInstance
    seed: int | None = None

    @property
    def inner_nodes(self):
        return tuple(range(self.n_inner))

    @property
    def n(self):
        return self.instance.n

    def degree_cap(self):
        return int(2 * self.D * self.r)

    def new_node_degrees(self):
        deg = self.instance.degrees()
        return {v: int(deg[v]) for v in self.sources + self.sinks}

    def sidecar(self):
        return {
            "n_inner": self.n_inner,
            "D": self.D,
            "r": self.r,
            "seed": self.seed,
            "inner": list(self.inner_nodes),
            "sources": list(self.sources),
            "sinks": list(self.sinks),
            "edges": [
                {"u": u, "v": v, "source": a, "sink": b}
                for (u, v), a, b in zip(self.inner_edges, self.edge_source, self.edge_sink)
            ],
        }


def _check_regular_graph(edges, n_inner):
    seen = set()
    deg = np.zeros(n_inner, dtype=np.int64)
    for e in edges:
        u, v = (int(w) for w in e)
        if u == v:
            raise ValueError(f"inner graph has a self-loop at {u}")
        if not (0 <= u < n_inner and 0 <= v < n_inner):
            raise ValueError(f"edge {(u, v)} outside [0, {n_inner})")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ValueError(f"inner graph repeats edge {key}")
        seen.add(key)
        deg[[u, v]] += 1
    if n_inner == 0 or deg.min() != deg.max() or deg[0] == 0:
        raise ValueError(f"inner graph must be D-regular with D >= 1, degrees range {deg.min()}..{deg.max()}")
    return sorted(seen), int(deg[0])


def _round_robin(edge_order, nodes, cap, rng):
    order = list(rng.permutation(len(nodes)))
    load = dict.fromkeys(nodes, 0)
    owner = {}
    pos = 0
    for e in edge_order:
        for _ in range(len(order)):
            node = nodes[order[pos % len(order)]]
            pos += 1
            if load[node] < cap:
                break
        else:
            raise ValueError("degree cap leaves no room for every edge")
        owner[e] = node
        load[node] += 1
    return owner


def construct_nlts(inner_edges, n_inner, r=9, seed=0):
    """Build the partial-Z2 instance; new nodes number ``max(2, n_inner // r)``."""
    n_inner = check_nonneg_int(n_inner, "n_inner")
    if not r > 4:
        raise ValueError(f"ratio r must exceed 4, got {r}")
    edges, D = _check_regular_graph(inner_edges, n_inner)
    n_new = max(2, int(n_inner // r))
    n_src = (n_new + 1) // 2
    sources = list(range(n_inner, n_inner + n_src))
    sinks = list(range(n_inner + n_src, n_inner + n_new))
    cap = int(2 * D * r)
    need = math.ceil(len(edges) / len(sinks))
    if need > cap:
        raise ValueError(f"{len(edges)} edges over {len(sinks)} sink nodes exceeds degree cap {cap}")
    rng = make_rng(seed)
    src_owner = _round_robin([edges[i] for i in rng.permutation(len(edges))], sources, cap, rng)
    snk_owner = _round_robin([edges[i] for i in rng.permutation(len(edges))], sinks, cap, rng)
    clauses = []
    for e in edges:
        clauses.append((tuple(sorted((src_owner[e],) + e)), -1))
        clauses.append((tuple(sorted((snk_owner[e],) + e)), 1))
    inst = XorInstance(3, n_inner + n_new, tuple(clauses))
    return NltsInstance(
        tuple(edges),
        n_inner,
        D,
        r,
        tuple(sources),
        tuple(sinks),
        tuple(src_owner[e] for e in edges),
        tuple(snk_owner[e] for e in edges),
        inst,
        None if isinstance(seed, np.random.Generator) else seed,
    )


def verify_partial_z2(nl, samples=4096, seed=0, cap=EXHAUSTIVE_CAP):
    """True iff flipping every inner variable never changes the satisfied count.

    Exhaustive over all assignments when ``n <= cap``, otherwise a seeded sample.
    """
    inst = nl.instance
    inner = np.array(nl.inner_nodes, dtype=np.int64)
    if inst.n <= cap:
        counts = np.concatenate([c for _, c in _satisfied_count_chunks(inst)])
        mask = 0
        for j in inner:
            mask |= 1 << (inst.n - 1 - int(j))
        idx = np.arange(counts.size, dtype=np.uint64)
        return bool(np.array_equal(counts, counts[idx ^ np.uint64(mask)]))
    rng = make_rng(seed)
    X = rng.choice(np.array([-1, 1], dtype=np.int8), size=(samples, inst.n))
    Y = X.copy()
    Y[:, inner] *= -1
    return bool(np.array_equal(_sat_counts(inst, X), _sat_counts(inst, Y)))


def _sat_counts(inst, X):
    X = check_assignments(X, inst.n)
    return (np.prod(X[:, inst.var_array], axis=2) == inst.sign_array).sum(axis=1)


def max_cut(edges, n):
    """Exhaustive maximum cut and one maximising +-1 labelling (small graphs only)."""
    if n > EXHAUSTIVE_CAP:
        raise ValueError(f"exhaustive max cut refuses n={n} > {EXHAUSTIVE_CAP}")
    E = np.array(edges, dtype=np.int64).reshape(-1, 2)
    idx = np.arange(1 << n, dtype=np.uint64)
    bits = [((idx >> np.uint64(j)) & np.uint64(1)).astype(np.uint8) for j in range(n)]
    cut = np.zeros(idx.size, dtype=np.int64)
    for u, v in E:
        cut += bits[u] ^ bits[v]
    best = int(np.argmax(cut))
    labels = np.array([1 if (best >> j) & 1 else -1 for j in range(n)], dtype=np.int8)
    return int(cut[best]), labels


def violated_count(nl, assignment):
    return int(nl.instance.m - _sat_counts(nl.instance, assignment)[0])


def cut_assignment(nl, inner_labels):
    """Sources +1, sinks -1, inner variables from ``inner_labels``."""
    x = np.ones(nl.n, dtype=np.int8)
    x[: nl.n_inner] = inner_labels
    x[list(nl.sinks)] = -1
    return x


def ground_assignment(nl, inner_value=1):
    """Sources -1, sinks +1, inner constant."""
    x = np.full(nl.n, inner_value, dtype=np.int8)
    x[list(nl.sources)] = -1
    x[list(nl.sinks)] = 1
    return x


class DepthBound(NamedTuple):
    value: float
    note: str | None


def qaoa_depth_bound(n, D):
    """Depths ``p < log2(n / 5184) / (648 D)`` are obstructed; 0 with a note for small ``n``."""
    if not n > 0 or not D > 0:
        raise ValueError("n and D must be positive")
    if n <= DEPTH_SCALE:
        return DepthBound(0.0, f"n={n} <= {DEPTH_SCALE}: the bound is vacuous")
    return DepthBound(math.log2(n / DEPTH_SCALE) / (DEPTH_FACTOR * D), None)


def fraction_bound(D, delta=0.0):
    """Largest satisfiable fraction reachable below the depth bound."""
    if D < 2:
        raise ValueError(f"inner degree must be >= 2, got {D}")
    if delta < 0:
        raise ValueError("delta must be non-negative")
    return 0.99 + (2 * math.sqrt(D - 1) + delta) / (100 * D)


def cycle_graph(n):
    if n < 3:
        raise ValueError("a cycle needs at least 3 nodes")
    return [(i, (i + 1) % n) for i in range(n)]


def random_regular_graph(n, D, seed=0, max_attempts=1000):
    """Simple D-regular graph by the pairing model with rejection."""
    if (n * D) % 2 or D >= n:
        raise ValueError(f"no simple {D}-regular graph on {n} nodes")
    rng = make_rng(seed)
    stubs = np.repeat(np.arange(n), D)
    for _ in range(max_attempts):
        pairs = rng.permutation(stubs).reshape(-1, 2)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            continue
        keys = {(int(min(u, v)), int(max(u, v))) for u, v in pairs}
        if len(keys) == len(pairs):
            return sorted(keys)
    raise RuntimeError(f"pairing model found no simple graph in {max_attempts} attempts")


def write_nlts(nl, instance_path, sidecar_path):
    atomic_write_text(instance_path, dumps_instance(nl.instance))
    atomic_write_text(sidecar_path, json.dumps(nl.sidecar(), indent=2) + "\n")
