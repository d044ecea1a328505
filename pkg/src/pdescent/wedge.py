"""Wedge cochains: products of a pulled-back cocycle with a vertex value table.

Given a cover q: K~ -> K built from classes vanishing on loops of K~, and
cocycles c1, c2 on K with c2 in the covering span, the wedge cochain
assigns each edge lift the value c1(q(e)) * val(init(e)), where val is the
vertex value table of c2.  Wedges of independent families are independent
modulo coboundaries, their supports stay inside the preimage of supp(c1),
and the combinations vanishing on one face per deck orbit are cocycles on
all of K~.  This manufactures many independent classes with controlled
support in the cover.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fplinalg
from .complexes import (
    Cochain,
    EdgePath,
    class_coordinates,
    cocycle_from_coordinates,
    combine_cochains,
)
from .covers import CoveringMap, vertex_values
from .errors import CocycleConditionError, UnsupportedCoverError

__all__ = [
    "wedge_cochain",
    "WedgeFamily",
    "build_wedge_family",
    "dual_loops",
    "commutator_path",
    "commutator_certificate",
]


def wedge_cochain(cov: CoveringMap, c1: Cochain, c2: Cochain) -> Cochain:
    """The cochain e -> c1(q(e)) * val_{c2}(init(e)) on the total complex."""
    pulled = cov.pullback(c1)
    vals = vertex_values(cov, c2)
    init = np.array([u for u, _ in cov.total.edges], dtype=np.int64)
    if cov.total.num_edges == 0:
        return Cochain(cov.total, c1.p, np.zeros(0, dtype=np.int64))
    return Cochain(cov.total, c1.p, (pulled.values * vals[init]) % c1.p)


@dataclass(eq=False)
class WedgeFamily:
    """Wedge cochains of a family U against a complement C of span(U) in the covering span.

    span_basis lists the |U|*|C| wedges in (U-major, C-minor) order;
    cocycle_basis is an echelon basis (in wedge-index coordinates) of the
    combinations that are cocycles on the total complex.  Its classes are
    independent in H^1 of the total complex.
    """

    cover: CoveringMap
    base_family: tuple[Cochain, ...]
    complement: tuple[Cochain, ...]
    span_basis: tuple[Cochain, ...]
    cocycle_basis: tuple[Cochain, ...]

    @property
    def size(self) -> int:
        return len(self.cocycle_basis)


def _check_base_cocycles(cov, family, p):
    for c in family:
        if c.complex is not cov.base:
            raise ValueError("family member does not live on the base of the cover")
        if c.p != p:
            raise ValueError("family member has mismatched modulus")
        if not c.is_cocycle():
            raise CocycleConditionError("family member is not a cocycle")


def build_wedge_family(cov: CoveringMap, family) -> WedgeFamily:
    """Construct the wedge family of independent cocycles U over a p-cover.

    The complement C extends an echelon basis of span(U) ∩ (covering span)
    to the covering span by greedy pivot extension, so |C| >= n - |U| when
    the deck group has rank n.  The returned cocycle basis has dimension at
    least |U|*|C| - r, where r is the number of deck orbits of faces.
    """
    if cov.classes is None:
        raise UnsupportedCoverError("wedge families need an elementary abelian p-cover")
    family = tuple(family)
    if not family:
        raise ValueError("family must be nonempty")
    p = family[0].p
    _check_base_cocycles(cov, family, p)

    u_coords = np.array([class_coordinates(c) for c in family], dtype=np.int64)
    if fplinalg.rank(u_coords, p) < len(family):
        raise ValueError("family classes are dependent in cohomology")
    cover_coords = np.array([class_coordinates(c) for c in cov.classes], dtype=np.int64)

    meet = fplinalg.intersect_row_spaces(u_coords, cover_coords, p)
    comp_rows = fplinalg.extend_to_complement(meet, cover_coords, p)
    complement = tuple(
        cocycle_from_coordinates(cov.base, p, row) for row in comp_rows
    )

    span_basis = tuple(
        wedge_cochain(cov, c1, c2) for c1 in family for c2 in complement
    )
    if not span_basis:
        return WedgeFamily(cov, family, complement, (), ())

    # wedges of independent inputs are independent as cochains
    span_matrix = np.array([w.values for w in span_basis], dtype=np.int64)
    assert fplinalg.rank(span_matrix, p) == len(span_basis)

    reps = cov.deck_orbit_representatives()
    constraints = np.zeros((len(reps), len(span_basis)), dtype=np.int64)
    for i, face in enumerate(reps):
        path = cov.total.boundary_path(face)
        for k, w in enumerate(span_basis):
            constraints[i, k] = w.evaluate(path)
    combos = fplinalg.kernel_basis(constraints, p)
    cocycle_basis = tuple(
        combine_cochains(span_basis, combo, p) for combo in combos
    )
    for c in cocycle_basis:
        # one face per orbit suffices; verify the full condition anyway
        if not c.is_cocycle():
            raise AssertionError("orbit representative constraints missed a face")
    if cocycle_basis:
        coords = np.array([class_coordinates(c) for c in cocycle_basis], dtype=np.int64)
        assert fplinalg.rank(coords, p) == len(cocycle_basis), (
            "wedge cocycle classes are dependent in the cover"
        )
    return WedgeFamily(cov, family, complement, span_basis, cocycle_basis)


def dual_loops(K, cochains, p) -> list[EdgePath]:
    """Based loops l_i with c_j(l_i) = delta_ij for independent cocycles c_j.

    Built by solving for coefficient vectors over the fundamental loops and
    concatenating each loop the prescribed number of times.
    """
    cochains = list(cochains)
    coords = np.array([class_coordinates(c) for c in cochains], dtype=np.int64)
    loops = K.fundamental_loops()
    out = []
    for i in range(len(cochains)):
        target = np.zeros(len(cochains), dtype=np.int64)
        target[i] = 1
        y = fplinalg.solve(coords, target, p)
        if y is None:
            raise ValueError("cochain classes are dependent; no dual loops exist")
        loop = EdgePath(start=K.basepoint, steps=())
        for t, coeff in enumerate(y):
            for _ in range(int(coeff)):
                loop = loop.then(loops[t], K)
        out.append(loop)
    return out


def commutator_path(K, g: EdgePath, h: EdgePath) -> EdgePath:
    """The based loop g h g^-1 h^-1."""
    if g.start != h.start or K.path_end(g) != g.start or K.path_end(h) != h.start:
        raise ValueError("commutators need based loops at a common vertex")
    return g.then(h, K).then(g.reverse(K), K).then(h.reverse(K), K)


def commutator_certificate(fam: WedgeFamily) -> np.ndarray:
    """Evaluation matrix of the wedges on lifts of dual-loop commutators.

    Row (c1, c2) and column (i, j) hold the wedge evaluation on a lift of
    [l_j, l_i], where the l's are dual loops of U followed by C.  For a
    correctly built family this is the identity matrix, which certifies
    that the wedges are independent modulo coboundaries.
    """
    cov = fam.cover
    p = fam.base_family[0].p
    combined = list(fam.base_family) + list(fam.complement)
    duals = dual_loops(cov.base, combined, p)
    u = len(fam.base_family)
    mat = np.zeros((len(fam.span_basis), len(fam.span_basis)), dtype=np.int64)
    col = 0
    for i in range(u):
        for j in range(len(fam.complement)):
            comm = commutator_path(cov.base, duals[u + j], duals[i])
            lifted = cov.lift_path(comm, 0)
            for row, w in enumerate(fam.span_basis):
                mat[row, col] = w.evaluate(lifted)
            col += 1
    return mat
