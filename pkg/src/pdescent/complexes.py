"""Group presentations and their 2-complexes, with mod-p cochain machinery.

A presentation <X | R> yields a 2-complex with one vertex, a loop per
generator and a 2-cell per relator.  General 2-complexes (arising as
covers) carry oriented edges, face attaching paths, a basepoint and a BFS
spanning tree; the tree gives normal forms for cocycles and a fundamental
loop per non-tree edge.

Sign conventions: an edge e runs init(e) -> term(e); a coboundary is
(df)(e) = f(term) - f(init); traversing e backwards negates cochain values.
"""

from __future__ import annotations

import string
from dataclasses import dataclass

import numpy as np

from . import fplinalg
from .errors import CocycleConditionError, ParseError

__all__ = [
    "GroupPresentation",
    "parse_presentation",
    "format_presentation",
    "EdgePath",
    "TwoComplex",
    "Cochain",
    "build_presentation_complex",
    "presentation_loop",
    "boundary_matrices",
    "h1_dimension",
    "h1_cocycle_basis",
    "coboundary",
    "class_coordinates",
    "cocycle_from_coordinates",
    "combine_cochains",
]


@dataclass(frozen=True)
class GroupPresentation:
    """Finite presentation with single-letter generators.

    Words are strings over the generators; an uppercase letter is the
    inverse of its lowercase generator.  Relators are kept verbatim (they
    may be unreduced).
    """

    generators: tuple[str, ...]
    relators: tuple[str, ...]

    def __post_init__(self):
        seen = set()
        for g in self.generators:
            if len(g) != 1 or g not in string.ascii_lowercase:
                raise ParseError(f"generator {g!r} is not a single lowercase letter")
            if g in seen:
                raise ParseError(f"generator {g!r} repeated")
            seen.add(g)
        for w in self.relators:
            if w == "":
                raise ParseError("empty relator")
            for ch in w:
                if ch.lower() not in seen:
                    raise ParseError(f"relator {w!r} uses unknown generator {ch.lower()!r}")

    @property
    def rank(self) -> int:
        return len(self.generators)

    def word_steps(self, word: str) -> list[tuple[int, int]]:
        """Translate a word into (generator index, direction) steps."""
        index = {g: i for i, g in enumerate(self.generators)}
        steps = []
        for ch in word:
            if ch in index:
                steps.append((index[ch], 1))
            elif ch.lower() in index:
                steps.append((index[ch.lower()], -1))
            else:
                raise ParseError(f"unknown generator {ch.lower()!r} in word {word!r}")
        return steps


def parse_presentation(text: str) -> tuple[GroupPresentation, int]:
    """Parse the presentation file format; returns (presentation, p).

    Lines are `p = <prime>`, `gens = a b c`, and repeatable `rel = <word>`;
    blank lines and `#` comments are ignored.
    """
    p = None
    gens = None
    rels = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"line {lineno}: expected `key = value`, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key == "p":
            try:
                p = fplinalg.validate_prime(int(value))
            except ValueError as exc:
                raise ParseError(f"line {lineno}: {exc}") from exc
        elif key == "gens":
            if gens is not None:
                raise ParseError(f"line {lineno}: gens given twice")
            gens = tuple(value.split())
        elif key == "rel":
            if value == "":
                raise ParseError(f"line {lineno}: empty relator")
            rels.append(value)
        else:
            raise ParseError(f"line {lineno}: unknown key {key!r}")
    if p is None:
        raise ParseError("missing `p = <prime>` line")
    if gens is None:
        raise ParseError("missing `gens = ...` line")
    return GroupPresentation(generators=gens, relators=tuple(rels)), p


def format_presentation(pres: GroupPresentation, p: int) -> str:
    """Canonical text form; parse(format(parse(t))) == parse(t)."""
    lines = [f"p = {p}", "gens = " + " ".join(pres.generators)]
    lines.extend(f"rel = {w}" for w in pres.relators)
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class EdgePath:
    """A walk in the 1-skeleton: a start vertex and (edge, direction) steps."""

    start: int
    steps: tuple[tuple[int, int], ...] = ()

    def reverse(self, complex: "TwoComplex") -> "EdgePath":
        return EdgePath(
            start=complex.path_end(self),
            steps=tuple((e, -d) for e, d in reversed(self.steps)),
        )

    def then(self, other: "EdgePath", complex: "TwoComplex") -> "EdgePath":
        if complex.path_end(self) != other.start:
            raise ValueError("paths do not concatenate")
        return EdgePath(start=self.start, steps=self.steps + other.steps)


class TwoComplex:
    """A finite connected 2-complex.

    edges[i] = (init, term); faces[j] is a closed attaching path given as
    (edge, direction) steps.  A BFS spanning tree from the basepoint is
    computed at construction (edges explored in index order), giving
    deterministic tree paths and fundamental loops.
    """

    def __init__(self, num_vertices, edges, faces=(), basepoint=0):
        self.num_vertices = int(num_vertices)
        self.edges = tuple((int(u), int(v)) for u, v in edges)
        self.faces = tuple(tuple((int(e), int(d)) for e, d in f) for f in faces)
        self.basepoint = int(basepoint)
        if self.num_vertices <= 0:
            raise ValueError("complex needs at least one vertex")
        if not 0 <= self.basepoint < self.num_vertices:
            raise ValueError("basepoint out of range")
        for u, v in self.edges:
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise ValueError("edge endpoint out of range")
        self._build_tree()
        for j, f in enumerate(self.faces):
            self._check_face(j, f)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_faces(self) -> int:
        return len(self.faces)

    @property
    def num_cells(self) -> int:
        return self.num_vertices + self.num_edges + self.num_faces

    @property
    def euler_characteristic(self) -> int:
        return self.num_vertices - self.num_edges + self.num_faces

    def _build_tree(self):
        parent = [None] * self.num_vertices
        seen = [False] * self.num_vertices
        seen[self.basepoint] = True
        tree = []
        queue = [self.basepoint]
        while queue:
            frontier = []
            for v in queue:
                for e, (a, b) in enumerate(self.edges):
                    if a == v and not seen[b]:
                        seen[b] = True
                        parent[b] = (v, e, 1)
                        tree.append(e)
                        frontier.append(b)
                    elif b == v and not seen[a]:
                        seen[a] = True
                        parent[a] = (v, e, -1)
                        tree.append(e)
                        frontier.append(a)
            queue = frontier
        if not all(seen):
            missing = seen.index(False)
            raise ValueError(f"complex is not connected (vertex {missing} unreachable)")
        self._parent = parent
        self.tree_edges = frozenset(tree)
        self.non_tree_edges = tuple(e for e in range(self.num_edges) if e not in self.tree_edges)

    def step_endpoints(self, step):
        e, d = step
        u, v = self.edges[e]
        return (u, v) if d == 1 else (v, u)

    def _check_face(self, j, f):
        if len(f) == 0:
            raise ValueError(f"face {j} has an empty attaching path")
        cur = self.step_endpoints(f[0])[0]
        start = cur
        for step in f:
            a, b = self.step_endpoints(step)
            if a != cur:
                raise ValueError(f"face {j} attaching path breaks at step {step}")
            cur = b
        if cur != start:
            raise ValueError(f"face {j} attaching path is not closed")

    def path_end(self, path: EdgePath) -> int:
        cur = path.start
        for step in path.steps:
            a, b = self.step_endpoints(step)
            if a != cur:
                raise ValueError("path step does not start at the current vertex")
            cur = b
        return cur

    def tree_path(self, v: int) -> EdgePath:
        """The spanning-tree path from the basepoint to v."""
        steps = []
        while v != self.basepoint:
            pv, e, d = self._parent[v]
            steps.append((e, d))
            v = pv
        return EdgePath(start=self.basepoint, steps=tuple(reversed(steps)))

    def fundamental_loop(self, e: int) -> EdgePath:
        """Basepoint loop through the non-tree edge e: tree in, e, tree back."""
        u, v = self.edges[e]
        to_u = self.tree_path(u)
        from_v = self.tree_path(v).reverse(self)
        return EdgePath(start=self.basepoint, steps=to_u.steps + ((e, 1),) + from_v.steps)

    def fundamental_loops(self) -> list[EdgePath]:
        return [self.fundamental_loop(e) for e in self.non_tree_edges]

    def boundary_path(self, j: int) -> EdgePath:
        f = self.faces[j]
        return EdgePath(start=self.step_endpoints(f[0])[0], steps=f)

    def face_start(self, j: int) -> int:
        return self.step_endpoints(self.faces[j][0])[0]


@dataclass(eq=False)
class Cochain:
    """A 1-cochain with values in F_p, one residue per oriented edge."""

    complex: TwoComplex
    p: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.int64) % self.p
        if vals.shape != (self.complex.num_edges,):
            raise ValueError("cochain length does not match edge count")
        vals.flags.writeable = False
        self.values = vals

    def support(self) -> set[int]:
        return {int(j) for j in np.flatnonzero(self.values)}

    def evaluate(self, path: EdgePath) -> int:
        total = 0
        cur = path.start
        for e, d in path.steps:
            a, b = self.complex.step_endpoints((e, d))
            if a != cur:
                raise ValueError("path step does not start at the current vertex")
            total += d * int(self.values[e])
            cur = b
        return total % self.p

    def is_cocycle(self) -> bool:
        return all(
            self.evaluate(self.complex.boundary_path(j)) == 0
            for j in range(self.complex.num_faces)
        )

    def has_trivial_class(self) -> bool:
        """True when the cocycle evaluates to zero on every fundamental loop."""
        return all(self.evaluate(l) == 0 for l in self.complex.fundamental_loops())


def build_presentation_complex(pres: GroupPresentation) -> TwoComplex:
    """One vertex, a loop per generator, a 2-cell per relator (verbatim)."""
    edges = [(0, 0)] * pres.rank
    faces = [tuple(pres.word_steps(w)) for w in pres.relators]
    return TwoComplex(num_vertices=1, edges=edges, faces=faces, basepoint=0)


def presentation_loop(K: TwoComplex, pres: GroupPresentation, word: str) -> EdgePath:
    """The based loop of a word in the presentation complex."""
    return EdgePath(start=K.basepoint, steps=tuple(pres.word_steps(word)))


def boundary_matrices(K: TwoComplex, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Cellular boundary maps (d1: C1 -> C0, d2: C2 -> C1) over F_p."""
    d1 = np.zeros((K.num_vertices, K.num_edges), dtype=np.int64)
    for e, (u, v) in enumerate(K.edges):
        d1[v, e] += 1
        d1[u, e] -= 1
    d2 = np.zeros((K.num_edges, K.num_faces), dtype=np.int64)
    for j, f in enumerate(K.faces):
        for e, d in f:
            d2[e, j] += d
    return d1 % p, d2 % p


def h1_dimension(K: TwoComplex, p: int) -> int:
    """dim H_1(K; F_p) = dim ker d1 - rank d2 (= dim H^1 over a field)."""
    p = fplinalg.validate_prime(p)
    d1, d2 = boundary_matrices(K, p)
    ker_d1 = K.num_edges - fplinalg.rank(d1, p)
    return ker_d1 - fplinalg.rank(d2, p)


def _nontree_face_matrix(K: TwoComplex, p: int) -> np.ndarray:
    """Face-boundary evaluations of the non-tree edge indicators (faces x non-tree)."""
    cols = {e: t for t, e in enumerate(K.non_tree_edges)}
    m = np.zeros((K.num_faces, len(K.non_tree_edges)), dtype=np.int64)
    for j, f in enumerate(K.faces):
        for e, d in f:
            if e in cols:
                m[j, cols[e]] += d
    return m % p


def h1_cocycle_basis(K: TwoComplex, p: int) -> list[Cochain]:
    """Echelon basis of H^1(K; F_p) as cocycles vanishing on the spanning tree.

    A cocycle vanishing on the tree is determined by its non-tree values,
    and distinct such cocycles lie in distinct classes, so solving the face
    constraints on non-tree values gives one representative per class.
    """
    p = fplinalg.validate_prime(p)
    m = _nontree_face_matrix(K, p)
    coords = fplinalg.kernel_basis(m, p)
    basis = [cocycle_from_coordinates(K, p, row) for row in coords]
    assert len(basis) == h1_dimension(K, p)
    return basis


def coboundary(K: TwoComplex, potential, p: int) -> Cochain:
    """df for a vertex potential f: (df)(e) = f(term) - f(init)."""
    f = np.asarray(potential, dtype=np.int64) % p
    if f.shape != (K.num_vertices,):
        raise ValueError("potential length does not match vertex count")
    init = np.array([u for u, _ in K.edges], dtype=np.int64)
    term = np.array([v for _, v in K.edges], dtype=np.int64)
    if K.num_edges == 0:
        return Cochain(K, p, np.zeros(0, dtype=np.int64))
    return Cochain(K, p, (f[term] - f[init]) % p)


def class_coordinates(c: Cochain) -> np.ndarray:
    """Evaluations on the fundamental loops, one per non-tree edge.

    Coboundaries evaluate to zero on closed loops, so these coordinates
    depend only on the cohomology class; for a tree-vanishing cocycle they
    are just its non-tree values.
    """
    return np.array(
        [c.evaluate(c.complex.fundamental_loop(e)) for e in c.complex.non_tree_edges],
        dtype=np.int64,
    )


def cocycle_from_coordinates(K: TwoComplex, p: int, coords) -> Cochain:
    """The tree-vanishing cocycle with the given non-tree values."""
    coords = np.asarray(coords, dtype=np.int64) % p
    if coords.shape != (len(K.non_tree_edges),):
        raise ValueError("coordinate length does not match non-tree edge count")
    values = np.zeros(K.num_edges, dtype=np.int64)
    for t, e in enumerate(K.non_tree_edges):
        values[e] = coords[t]
    c = Cochain(K, p, values)
    if not c.is_cocycle():
        raise CocycleConditionError("coordinates do not satisfy the face constraints")
    return c


def combine_cochains(cochains, coeffs, p: int) -> Cochain:
    """The linear combination sum(coeffs[i] * cochains[i]) over F_p."""
    cochains = list(cochains)
    if not cochains:
        raise ValueError("need at least one cochain")
    K = cochains[0].complex
    values = np.zeros(K.num_edges, dtype=np.int64)
    for a, c in zip(coeffs, cochains, strict=True):
        if c.complex is not K:
            raise ValueError("cochains live on different complexes")
        values = (values + int(a) * c.values) % p
    return Cochain(K, p, values)
