"""Exact linear algebra over the prime field F_p.

Vectors and matrices are numpy integer arrays with entries reduced to
0..p-1; all elimination is exact (no floating point anywhere).  Subspaces
are kept in reduced row echelon form so that equal subspaces have equal
basis matrices, which downstream code relies on for reproducibility.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DimensionError, EnumerationCapError

__all__ = [
    "validate_prime",
    "rref",
    "rank",
    "kernel_basis",
    "solve",
    "in_rowspan",
    "intersect_row_spaces",
    "extend_to_complement",
    "FpSubspace",
    "subspace_support",
    "support_size_by_enumeration",
    "iter_element_blocks",
]

MAX_PRIME = 2**16
ENUMERATION_CAP = 2**20


def validate_prime(p) -> int:
    """Check 2 <= p <= 2**16 and primality by trial division; return p as int."""
    p = int(p)
    if p < 2 or p > MAX_PRIME:
        raise ValueError(f"modulus {p} out of range [2, {MAX_PRIME}]")
    d = 2
    while d * d <= p:
        if p % d == 0:
            raise ValueError(f"modulus {p} is not prime (divisible by {d})")
        d += 1
    return p


def _as_matrix(m, p):
    a = np.asarray(m, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2:
        raise ValueError("expected a 1- or 2-dimensional array")
    return a % p


def rref(m, p) -> tuple[np.ndarray, int]:
    """Reduced row echelon form over F_p; returns (echelon matrix, rank).

    Deterministic: columns are processed left to right and the first
    nonzero entry below the current row is the pivot.
    """
    a = _as_matrix(m, p).copy()
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        factors = a[:, c].copy()
        factors[r] = 0
        a = (a - np.outer(factors, a[r])) % p
        r += 1
    return a, r


def rank(m, p) -> int:
    return rref(m, p)[1]


def _pivot_columns(echelon, r):
    pivots = []
    for i in range(r):
        nz = np.flatnonzero(echelon[i])
        pivots.append(int(nz[0]))
    return pivots


def kernel_basis(m, p) -> np.ndarray:
    """Echelon basis of {x : m @ x = 0 over F_p}, one row per basis vector."""
    a = _as_matrix(m, p)
    rows, cols = a.shape
    e, r = rref(a, p)
    pivots = _pivot_columns(e, r)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, j in enumerate(free):
        basis[k, j] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-e[i, j]) % p
    # standard free-column vectors need re-echelonizing to get a canonical form
    out, rr = rref(basis, p)
    return out[:rr]


def solve(m, b, p):
    """A particular solution x of m @ x = b over F_p (free variables 0), or None."""
    a = _as_matrix(m, p)
    rows, cols = a.shape
    rhs = np.asarray(b, dtype=np.int64).reshape(rows, 1) % p
    e, r = rref(np.hstack([a, rhs]), p)
    pivots = _pivot_columns(e, r)
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = e[i, cols]
    return x


def in_rowspan(vec, basis, p) -> bool:
    basis = _as_matrix(basis, p)
    v = _as_matrix(vec, p)
    if basis.shape[0] == 0:
        return not v.any()
    stacked = np.vstack([basis, v])
    return rank(stacked, p) == rank(basis, p)


def intersect_row_spaces(a, b, p) -> np.ndarray:
    """Echelon basis of rowspace(a) ∩ rowspace(b)."""
    a = _as_matrix(a, p)
    b = _as_matrix(b, p)
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros((0, a.shape[1]), dtype=np.int64)
    stacked = np.vstack([a, b])
    # left kernel rows z = (x, -y) give x @ a = y @ b, the intersection elements
    left = kernel_basis(stacked.T, p)
    if left.shape[0] == 0:
        return np.zeros((0, a.shape[1]), dtype=np.int64)
    elements = (left[:, : a.shape[0]] @ a) % p
    out, r = rref(elements, p)
    return out[:r]


def extend_to_complement(inner, outer, p) -> np.ndarray:
    """Greedy complement of span(inner) in span(outer).

    Scans the echelon basis rows of span(outer) in index order and keeps
    those that enlarge the span; the result is a basis of a complement of
    span(inner) inside span(outer).  Requires span(inner) <= span(outer).
    """
    inner = _as_matrix(inner, p)
    outer_ech, r = rref(_as_matrix(outer, p), p)
    outer_ech = outer_ech[:r]
    ambient = outer_ech.shape[1]
    acc, ar = rref(inner, p)
    acc = acc[:ar]
    kept = []
    for row in outer_ech:
        stacked = np.vstack([acc, row.reshape(1, -1)]) if acc.shape[0] else row.reshape(1, -1)
        e, rr = rref(stacked, p)
        if rr > acc.shape[0]:
            kept.append(row)
            acc = e[:rr]
    return np.array(kept, dtype=np.int64).reshape(len(kept), ambient)


@dataclass(frozen=True, eq=False)
class FpSubspace:
    """A subspace of F_p^n held as a reduced-echelon basis with no zero rows."""

    p: int
    ambient_dim: int
    basis: np.ndarray = field(repr=False)

    @classmethod
    def from_rows(cls, rows, p, ambient_dim=None):
        p = validate_prime(p)
        a = np.asarray(rows, dtype=np.int64)
        if a.ndim == 1:
            a = a.reshape(1, -1)
        if a.size == 0:
            if ambient_dim is None:
                ambient_dim = a.shape[1] if a.ndim == 2 else 0
            a = a.reshape(0, ambient_dim)
        if ambient_dim is None:
            ambient_dim = a.shape[1]
        if a.shape[1] != ambient_dim:
            raise DimensionError(f"rows have length {a.shape[1]}, expected {ambient_dim}")
        e, r = rref(a, p)
        b = e[:r].copy()
        b.flags.writeable = False
        return cls(p=p, ambient_dim=int(ambient_dim), basis=b)

    @property
    def dim(self) -> int:
        return int(self.basis.shape[0])

    def contains(self, vec) -> bool:
        return in_rowspan(vec, self.basis, self.p)

    def contains_subspace(self, other: "FpSubspace") -> bool:
        return all(self.contains(row) for row in other.basis)

    def support(self) -> set[int]:
        return subspace_support(self)


def subspace_support(w: FpSubspace) -> set[int]:
    """Indices where some element of the subspace is nonzero.

    Equals the set of nonzero columns of any basis, since a column that
    vanishes on a basis vanishes on every combination.
    """
    if w.dim == 0:
        return set()
    return {int(j) for j in np.flatnonzero((w.basis % w.p != 0).any(axis=0))}


def iter_element_blocks(w: FpSubspace, block: int = 4096):
    """Yield the p**dim elements of the subspace in coefficient-lex order, blockwise."""
    p, d = w.p, w.dim
    total = p**d
    if d == 0:
        yield np.zeros((1, w.ambient_dim), dtype=np.int64)
        return
    start = 0
    while start < total:
        stop = min(start + block, total)
        idx = np.arange(start, stop, dtype=np.int64)
        coeffs = np.zeros((stop - start, d), dtype=np.int64)
        q = idx
        for k in range(d - 1, -1, -1):
            coeffs[:, k] = q % p
            q = q // p
        yield (coeffs @ w.basis) % p
        start = stop


def support_size_by_enumeration(w: FpSubspace, cap: int = ENUMERATION_CAP) -> Fraction:
    """Support size recovered by summing member supports over the whole subspace.

    Returns (sum over elements of |supp|) / ((p-1) p^(dim-1)), which equals
    |supp(W)| because each coordinate in the support is nonzero on exactly
    (p-1)p^(dim-1) elements.  Exact rational arithmetic throughout; used as
    an independent cross-check of `subspace_support`.
    """
    p, d = w.p, w.dim
    if d == 0:
        return Fraction(0)
    if p**d > cap:
        raise EnumerationCapError(f"enumeration of {p}**{d} elements exceeds cap {cap}")
    total = 0
    for elements in iter_element_blocks(w):
        total += int((elements != 0).sum())
    return Fraction(total, (p - 1) * p ** (d - 1))
