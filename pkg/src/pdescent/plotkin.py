"""Support-shrinking subspace reduction over F_p.

Averaging member supports over all hyperplanes of a v-dimensional subspace
shows some hyperplane W satisfies
|supp(W)| <= (p^v - p)/(p^v - 1) * |supp(V)|,
and iterating down to dimension w gives the chain bound
(p^v - p^(v-w))/(p^v - 1), itself at most the uniform bound
(p^(w+1) - p)/(p^(w+1) - 1).  For w = 1 this is the classical Plotkin
bound on the minimum distance of a linear code.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .errors import DimensionError
from .fplinalg import ENUMERATION_CAP, FpSubspace, in_rowspan, subspace_support

__all__ = [
    "chain_factor",
    "uniform_factor",
    "hyperplane_functionals",
    "hyperplane_subspace",
    "HyperplaneResult",
    "best_hyperplane",
    "ReductionResult",
    "reduce_to_dimension",
]

SAMPLE_COUNT = 4096


def chain_factor(p: int, v: int, w: int) -> Fraction:
    """Support decay guaranteed when reducing from dimension v to w >= 1."""
    return Fraction(p**v - p ** (v - w), p**v - 1)


def uniform_factor(p: int, w: int) -> Fraction:
    """Dimension-free decay factor for a reduction to dimension w."""
    return Fraction(p ** (w + 1) - p, p ** (w + 1) - 1)


def hyperplane_functionals(v: int, p: int):
    """All projectively normalized nonzero functionals on F_p^v, in lex order.

    One representative per hyperplane: the first nonzero coefficient is 1.
    """
    for lead in range(v - 1, -1, -1):
        for rest in product(range(p), repeat=v - 1 - lead):
            f = np.zeros(v, dtype=np.int64)
            f[lead] = 1
            f[lead + 1 :] = rest
            yield f


def hyperplane_subspace(V: FpSubspace, f) -> FpSubspace:
    """The hyperplane of V cut out by a functional on its basis coordinates."""
    f = np.asarray(f, dtype=np.int64) % V.p
    lead = int(np.flatnonzero(f)[0])
    rows = []
    for i in range(V.dim):
        if i == lead:
            continue
        row = np.zeros(V.dim, dtype=np.int64)
        row[i] = 1
        row[lead] = (-f[i]) % V.p
        rows.append(row)
    coeffs = np.array(rows, dtype=np.int64)
    return FpSubspace.from_rows((coeffs @ V.basis) % V.p, V.p, V.ambient_dim)


def _column_classes(V: FpSubspace):
    """Projective class of each nonzero basis column, as functional tuples.

    A coordinate stays in the support of the hyperplane ker(f) unless its
    basis column is proportional to f, so grouping columns by projective
    class makes every hyperplane support a dictionary lookup.
    """
    classes: dict[tuple, int] = {}
    p = V.p
    for j in range(V.ambient_dim):
        col = V.basis[:, j] % p
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        inv = pow(int(col[nz[0]]), -1, p)
        key = tuple((col * inv) % p)
        classes[key] = classes.get(key, 0) + 1
    return classes


@dataclass(frozen=True)
class HyperplaneResult:
    subspace: FpSubspace
    support_size: int
    certified: bool
    mode: str


def best_hyperplane(
    V: FpSubspace, cap: int = ENUMERATION_CAP, samples: int = SAMPLE_COUNT, seed: int = 0
) -> HyperplaneResult:
    """The minimum-support hyperplane of V (dim >= 2).

    When the hyperplane count fits under the cap every hyperplane is
    considered and the averaging bound is guaranteed; otherwise `samples`
    seeded random hyperplanes are tried and `certified` records whether the
    winner met the bound.  Ties break to the lexicographically first
    functional.
    """
    p, v = V.p, V.dim
    if v < 2:
        raise DimensionError("hyperplane reduction needs dimension at least 2")
    support = subspace_support(V)
    total = len(support)
    count = (p**v - 1) // (p - 1)
    classes = _column_classes(V)
    bound_num = (p**v - p) * total
    bound_den = p**v - 1

    if count <= cap:
        mode = "exact"
        best_f = None
        best_size = None
        # equivalent to scanning all functionals: any functional missing
        # every column class keeps the full support
        max_count = max(classes.values())
        for f in hyperplane_functionals(v, p):
            if classes.get(tuple(f), 0) == max_count:
                best_f = f
                best_size = total - max_count
                break
        assert best_f is not None
    else:
        mode = "sampled"
        rng = np.random.default_rng(seed)
        best_f = None
        best_size = None
        for _ in range(samples):
            f = rng.integers(0, p, size=v)
            if not f.any():
                continue
            nz = int(np.flatnonzero(f)[0])
            f = (f * pow(int(f[nz]), -1, p)) % p
            size = total - classes.get(tuple(int(x) for x in f), 0)
            if best_size is None or size < best_size:
                best_f, best_size = f.astype(np.int64), size
        if best_f is None:
            best_f = next(hyperplane_functionals(v, p))
            best_size = total - classes.get(tuple(best_f), 0)

    certified = best_size * bound_den <= bound_num
    if mode == "exact":
        assert certified, "averaging bound must hold in exact mode"
    sub = hyperplane_subspace(V, best_f)
    assert len(subspace_support(sub)) == best_size
    return HyperplaneResult(subspace=sub, support_size=best_size, certified=certified, mode=mode)


@dataclass(frozen=True)
class ReductionResult:
    subspace: FpSubspace
    support_size: int
    chain_bound: Fraction
    uniform_bound: Fraction
    certified: bool
    mode: str


def reduce_to_dimension(
    V: FpSubspace, w: int, cap: int = ENUMERATION_CAP, samples: int = SAMPLE_COUNT, seed: int = 0
) -> ReductionResult:
    """Iterate hyperplane reduction from dim v down to dim w (1 <= w < v).

    The result subspace sits inside V; in exact mode its support is at most
    the chain bound (and hence the uniform bound) times |supp(V)|.
    """
    v = V.dim
    if not 1 <= w < v:
        raise DimensionError(f"target dimension {w} not in [1, {v - 1}]")
    start_support = len(subspace_support(V))
    cur = V
    certified = True
    mode = "exact"
    step_index = 0
    while cur.dim > w:
        step = best_hyperplane(cur, cap=cap, samples=samples, seed=seed + step_index)
        certified = certified and step.certified
        if step.mode == "sampled":
            mode = "sampled"
        cur = step.subspace
        step_index += 1
    for row in cur.basis:
        assert in_rowspan(row, V.basis, V.p)
    chain = chain_factor(V.p, v, w) * start_support
    uniform = uniform_factor(V.p, w) * start_support
    size = len(subspace_support(cur))
    if mode == "exact":
        assert Fraction(size) <= chain, "chain bound must hold in exact mode"
    return ReductionResult(
        subspace=cur,
        support_size=size,
        chain_bound=chain,
        uniform_bound=uniform,
        certified=certified,
        mode=mode,
    )
