"""Cheeger constants of 1-skeletons and relative size of cocycle classes.

The Cheeger constant is min |boundary(A)| / |A| over vertex sets A with
0 < |A| <= |V|/2; loops never cross a cut.  The relative size of a class
is the smallest support fraction among its representatives.  For a p-cover
whose deck group sees a class alpha, the cut between vertex-value classes
bounds the cover's Cheeger constant by (|E| / (|V|/p)) * relsize(alpha).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .complexes import Cochain, TwoComplex, coboundary
from .covers import CoveringMap, vertex_values
from .errors import EnumerationCapError, TrivialClassError

__all__ = [
    "SkeletonGraph",
    "cheeger_constant",
    "minimum_support_representative",
    "relative_size",
    "ExpansionReport",
    "expansion_bound_report",
]

MAX_EXACT_VERTICES = 24
RELSIZE_CAP = 2**20


@dataclass(frozen=True)
class SkeletonGraph:
    """An undirected multigraph (loops allowed) given by an edge list."""

    num_vertices: int
    edges: tuple[tuple[int, int], ...]

    @classmethod
    def from_complex(cls, K: TwoComplex) -> "SkeletonGraph":
        return cls(num_vertices=K.num_vertices, edges=tuple(K.edges))

    def is_connected(self) -> bool:
        if self.num_vertices == 0:
            return False
        seen = {0}
        frontier = [0]
        adj = [[] for _ in range(self.num_vertices)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        while frontier:
            nxt = []
            for v in frontier:
                for w in adj[v]:
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        return len(seen) == self.num_vertices


def _sweep_min(graph: SkeletonGraph, order) -> tuple[int, int]:
    """Best (cut, size) over prefixes of `order` with size <= |V|/2."""
    n = graph.num_vertices
    inside = np.zeros(n, dtype=bool)
    best = None
    for k, v in enumerate(order, start=1):
        inside[v] = True
        if 2 * k > n:
            break
        cut = 0
        for a, b in graph.edges:
            if a != b and inside[a] != inside[b]:
                cut += 1
        if best is None or cut * best[1] < best[0] * k:
            best = (cut, k)
    return best


def cheeger_constant(
    graph: SkeletonGraph,
    mode: str = "exact",
    max_exact_vertices: int = MAX_EXACT_VERTICES,
    seed: int = 0,
    sweeps: int = 8,
) -> Fraction:
    """Cheeger constant of a connected multigraph with at least 2 vertices.

    Exact mode enumerates all cuts (|V| limited); heuristic mode sweeps the
    algebraic-connectivity eigenvector plus seeded random directions and
    returns an upper bound only.
    """
    n = graph.num_vertices
    if n < 2:
        raise ValueError("Cheeger constant needs at least 2 vertices")
    if not graph.is_connected():
        raise ValueError("graph is not connected")
    if mode == "exact":
        if n > max_exact_vertices:
            raise EnumerationCapError(
                f"exact mode limited to {max_exact_vertices} vertices, got {n}"
            )
        plain = [(u, v) for u, v in graph.edges if u != v]
        best_cut, best_size = None, 1
        chunk = 1 << 16
        half = n // 2
        for start in range(1, 1 << n, chunk):
            stop = min(start + chunk, 1 << n)
            masks = np.arange(start, stop, dtype=np.int64)
            bits = (masks[:, None] >> np.arange(n)) & 1
            sizes = bits.sum(axis=1)
            keep = (sizes > 0) & (sizes <= half)
            if not keep.any():
                continue
            bits = bits[keep]
            sizes = sizes[keep]
            cuts = np.zeros(len(sizes), dtype=np.int64)
            for u, v in plain:
                cuts += bits[:, u] != bits[:, v]
            for c, s in zip(cuts, sizes):
                if best_cut is None or int(c) * best_size < best_cut * int(s):
                    best_cut, best_size = int(c), int(s)
        return Fraction(best_cut, best_size)
    if mode == "heuristic":
        lap = np.zeros((n, n), dtype=float)
        for u, v in graph.edges:
            if u == v:
                continue
            lap[u, u] += 1
            lap[v, v] += 1
            lap[u, v] -= 1
            lap[v, u] -= 1
        _, vecs = np.linalg.eigh(lap)
        orders = [list(np.argsort(vecs[:, 1], kind="stable"))]
        rng = np.random.default_rng(seed)
        for _ in range(sweeps):
            direction = rng.standard_normal(n)
            orders.append(list(np.argsort(direction, kind="stable")))
        best = None
        for order in orders:
            cand = _sweep_min(graph, order)
            if cand is not None and (best is None or cand[0] * best[1] < best[0] * cand[1]):
                best = cand
        return Fraction(best[0], best[1])
    raise ValueError(f"unknown mode {mode!r}")


def _check_nontrivial(alpha: Cochain):
    if not alpha.is_cocycle():
        raise ValueError("relative size needs a cocycle")
    if alpha.has_trivial_class():
        raise TrivialClassError("class is a coboundary; relative size would be 0")


def minimum_support_representative(
    K: TwoComplex, alpha: Cochain, cap: int = RELSIZE_CAP
) -> tuple[Cochain, int]:
    """The representative alpha + df of smallest support, by full enumeration.

    Potentials are pinned to 0 at the basepoint; p^(|V|-1) assignments are
    enumerated, so the cap bounds the feasible vertex count.
    """
    _check_nontrivial(alpha)
    p = alpha.p
    free = [v for v in range(K.num_vertices) if v != K.basepoint]
    count = p ** len(free)
    if count > cap:
        raise EnumerationCapError(
            f"exact relative size needs {p}**{len(free)} potentials, over cap {cap}"
        )
    init = np.array([u for u, _ in K.edges], dtype=np.int64)
    term = np.array([v for _, v in K.edges], dtype=np.int64)
    best_size, best_f = None, None
    chunk = 1 << 12
    for start in range(0, count, chunk):
        stop = min(start + chunk, count)
        idx = np.arange(start, stop, dtype=np.int64)
        pots = np.zeros((stop - start, K.num_vertices), dtype=np.int64)
        q = idx
        for k in range(len(free) - 1, -1, -1):
            pots[:, free[k]] = q % p
            q = q // p
        reps = (alpha.values[None, :] + pots[:, term] - pots[:, init]) % p
        sizes = (reps != 0).sum(axis=1)
        j = int(np.argmin(sizes))
        if best_size is None or int(sizes[j]) < best_size:
            best_size = int(sizes[j])
            best_f = pots[j].copy()
    if best_size == 0:
        raise TrivialClassError("class is a coboundary; relative size would be 0")
    rep = Cochain(K, p, (alpha.values + coboundary(K, best_f, p).values) % p)
    return rep, best_size


def _greedy_descent(K: TwoComplex, alpha: Cochain) -> tuple[Cochain, int]:
    p = alpha.p
    f = np.zeros(K.num_vertices, dtype=np.int64)
    init = np.array([u for u, _ in K.edges], dtype=np.int64)
    term = np.array([v for _, v in K.edges], dtype=np.int64)

    def size(fvec):
        reps = (alpha.values + fvec[term] - fvec[init]) % p
        return int((reps != 0).sum())

    best = size(f)
    improved = True
    while improved:
        improved = False
        for v in range(K.num_vertices):
            if v == K.basepoint:
                continue
            orig = f[v]
            for val in range(p):
                f[v] = val
                s = size(f)
                if s < best:
                    best = s
                    orig = val
                    improved = True
            f[v] = orig
    reps = (alpha.values + f[term] - f[init]) % p
    return Cochain(K, p, reps), best


def relative_size(
    K: TwoComplex, alpha: Cochain, mode: str = "exact", cap: int = RELSIZE_CAP
) -> Fraction:
    """min |supp(alpha + df)| / |E| over vertex potentials f.

    Exact mode enumerates all potentials; upper mode runs a greedy
    single-vertex descent and only upper-bounds the true value.
    """
    if K.num_edges == 0:
        raise ValueError("relative size needs at least one edge")
    if mode == "exact":
        _, size = minimum_support_representative(K, alpha, cap=cap)
        return Fraction(size, K.num_edges)
    if mode == "upper":
        _check_nontrivial(alpha)
        _, size = _greedy_descent(K, alpha)
        return Fraction(size, K.num_edges)
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class ExpansionReport:
    """Outcome of the cover expansion bound h(total) <= (|E|/(|V|/p)) * relsize."""

    cheeger: Fraction
    bound: Fraction
    relsize: Fraction
    fiber_counts: tuple[int, ...]
    zero_cut: int
    degree_times_support: int
    holds: bool
    cut_holds: bool


def expansion_bound_report(
    cov: CoveringMap, alpha: Cochain, cheeger_mode: str = "exact", cap: int = RELSIZE_CAP
) -> ExpansionReport:
    """Check the expansion bound of a p-cover against a defining class.

    alpha must be a base cocycle with nontrivial class whose vertex values
    are defined on the cover.  Uses exact relative size on the base and the
    requested Cheeger mode on the total 1-skeleton.
    """
    p = alpha.p
    _check_nontrivial(alpha)
    rep, size = minimum_support_representative(cov.base, alpha, cap=cap)
    relsize = Fraction(size, cov.base.num_edges)
    # the cut argument needs the value table of the minimizing representative
    values = vertex_values(cov, rep)
    counts = tuple(int(x) for x in np.bincount(values, minlength=p))
    graph = SkeletonGraph.from_complex(cov.total)
    h = cheeger_constant(graph, mode=cheeger_mode)
    bound = Fraction(cov.base.num_edges * p, cov.base.num_vertices) * relsize
    zero_cut = 0
    for u, v in cov.total.edges:
        if u != v and (values[u] == 0) != (values[v] == 0):
            zero_cut += 1
    return ExpansionReport(
        cheeger=h,
        bound=bound,
        relsize=relsize,
        fiber_counts=counts,
        zero_cut=zero_cut,
        degree_times_support=cov.degree * size,
        holds=h <= bound,
        cut_holds=zero_cut <= cov.degree * size,
    )
