from fractions import Fraction

import numpy as np
import pytest

from pdescent.complexes import (
    Cochain,
    GroupPresentation,
    TwoComplex,
    build_presentation_complex,
    coboundary,
    h1_cocycle_basis,
    parse_presentation,
)
from pdescent.covers import build_abelian_p_cover, vertex_values
from pdescent.errors import EnumerationCapError, TrivialClassError
from pdescent.expansion import (
    SkeletonGraph,
    cheeger_constant,
    expansion_bound_report,
    minimum_support_representative,
    relative_size,
)

from oracles import brute_cheeger, brute_relative_size

TORUS = "p = 2\ngens = a b\nrel = abAB\n"


def cycle_complex(n):
    return TwoComplex(n, [(i, (i + 1) % n) for i in range(n)])


def complete_complex(n):
    return TwoComplex(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def test_cheeger_known_graphs():
    # C4: cut 2 edges / 2 vertices; C6: 2/3; K4: 4 edges leave any pair
    assert cheeger_constant(SkeletonGraph.from_complex(cycle_complex(4))) == 1
    assert cheeger_constant(SkeletonGraph.from_complex(cycle_complex(6))) == Fraction(2, 3)
    assert cheeger_constant(SkeletonGraph.from_complex(complete_complex(4))) == 2
    # a single edge: the only cut has ratio 1
    assert cheeger_constant(SkeletonGraph.from_complex(TwoComplex(2, [(0, 1)]))) == 1


def test_cheeger_matches_brute_force():
    rng = np.random.default_rng(101)
    for _ in range(15):
        n = int(rng.integers(3, 8))
        edges = [(i, (i + 1) % n) for i in range(n)]
        extra = int(rng.integers(0, 4))
        for _ in range(extra):
            u, v = int(rng.integers(0, n)), int(rng.integers(0, n))
            edges.append((u, v))  # parallel edges and loops allowed
        K = TwoComplex(n, edges)
        g = SkeletonGraph.from_complex(K)
        if not g.is_connected():
            continue
        assert cheeger_constant(g) == brute_cheeger(n, edges)


def test_cheeger_heuristic_upper_bounds_exact():
    rng = np.random.default_rng(103)
    for _ in range(10):
        n = int(rng.integers(4, 9))
        edges = [(i, (i + 1) % n) for i in range(n)]
        for _ in range(3):
            edges.append((int(rng.integers(0, n)), int(rng.integers(0, n))))
        g = SkeletonGraph.from_complex(TwoComplex(n, edges))
        if not g.is_connected():
            continue
        exact = cheeger_constant(g, mode="exact")
        upper = cheeger_constant(g, mode="heuristic", seed=1)
        assert upper >= exact


def test_cheeger_caps_exact_enumeration():
    big = cycle_complex(30)
    with pytest.raises(EnumerationCapError):
        cheeger_constant(SkeletonGraph.from_complex(big), mode="exact")
    # heuristic still runs
    assert cheeger_constant(SkeletonGraph.from_complex(big), mode="heuristic") > 0


def test_relative_size_exact_matches_brute_force():
    rng = np.random.default_rng(107)
    for _ in range(15):
        p = int(rng.choice([2, 3]))
        n = int(rng.integers(2, 5))
        edges = [(i, (i + 1) % n) for i in range(n)]
        edges.append((0, int(rng.integers(0, n))))
        K = TwoComplex(n, edges)
        alpha = Cochain(K, p, rng.integers(0, p, size=len(edges)))
        if alpha.has_trivial_class():
            continue
        got = relative_size(K, alpha, mode="exact")
        expect = Fraction(
            brute_relative_size(n, edges, [int(x) for x in alpha.values], p),
            len(edges),
        )
        assert got == expect


def test_relative_size_upper_bounds_exact():
    rng = np.random.default_rng(109)
    for _ in range(15):
        p = int(rng.choice([2, 3]))
        n = int(rng.integers(2, 5))
        edges = [(i, (i + 1) % n) for i in range(n)] + [(0, 0)]
        K = TwoComplex(n, edges)
        alpha = Cochain(K, p, rng.integers(0, p, size=len(edges)))
        if alpha.has_trivial_class():
            continue
        assert relative_size(K, alpha, mode="upper") >= relative_size(K, alpha, mode="exact")


def test_relative_size_rejects_trivial_class():
    K = cycle_complex(4)
    rng = np.random.default_rng(113)
    df = coboundary(K, rng.integers(0, 3, size=4), 3)
    with pytest.raises(TrivialClassError):
        relative_size(K, df, mode="exact")


def test_minimum_support_representative_is_same_class():
    pres, p = parse_presentation(TORUS)
    K = build_presentation_complex(pres)
    cov = build_abelian_p_cover(K, h1_cocycle_basis(K, p), p)
    K4 = cov.total
    basis = h1_cocycle_basis(K4, p)
    for alpha in basis[:3]:
        rep, size = minimum_support_representative(K4, alpha)
        assert len(rep.support()) == size
        # same class: evaluations agree on every fundamental loop
        for loop in K4.fundamental_loops():
            assert rep.evaluate(loop) == alpha.evaluate(loop)
        assert size <= len(alpha.support())


def test_minimum_support_cap():
    K = cycle_complex(12)
    alpha = Cochain(K, 5, np.array([1] + [0] * 11))
    with pytest.raises(EnumerationCapError):
        minimum_support_representative(K, alpha, cap=100)


def test_expansion_bound_wedge_degree2_equality():
    # degree-2 cover of the wedge of two circles: both sides equal 2
    pres = GroupPresentation(generators=("a", "b"), relators=())
    K = build_presentation_complex(pres)
    basis = h1_cocycle_basis(K, 2)
    cov = build_abelian_p_cover(K, basis[:1], 2)
    alpha = basis[0]
    report = expansion_bound_report(cov, alpha)
    assert report.cheeger == 2
    assert report.bound == 2
    assert report.holds
    assert report.cut_holds
    assert report.fiber_counts == (1, 1)


def test_expansion_bound_on_small_covers():
    rng = np.random.default_rng(127)
    cases = [
        ("p = 2\ngens = a b\n", 2, 2),
        ("p = 2\ngens = a b\nrel = abAB\n", 2, 2),
        ("p = 3\ngens = a b\n", 3, 1),
        ("p = 2\ngens = a b c d\nrel = abABcdCD\n", 2, 2),
    ]
    for text, p, k in cases:
        pres, _ = parse_presentation(text)
        K = build_presentation_complex(pres)
        basis = h1_cocycle_basis(K, p)
        cov = build_abelian_p_cover(K, basis[:k], p)
        for alpha in basis[:k]:
            report = expansion_bound_report(cov, alpha)
            assert report.holds
            assert report.cut_holds
            assert all(c == cov.total.num_vertices // p for c in report.fiber_counts)
            assert report.zero_cut <= report.degree_times_support


def test_vertex_value_classes_split_fibers():
    pres, p = parse_presentation(TORUS)
    K = build_presentation_complex(pres)
    basis = h1_cocycle_basis(K, p)
    cov = build_abelian_p_cover(K, basis, p)
    vals = vertex_values(cov, basis[1])
    assert sorted(np.bincount(vals, minlength=p)) == [cov.total.num_vertices // p] * p
