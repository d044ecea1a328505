"""Descent pipelines over towers of p-covers, and growth diagnostics.

Given a presentation complex and a series specification, the pipeline
builds covers level by level, forms the wedge family of the current
cocycle family, and reduces its span back to a fixed dimension u with the
hyperplane machinery.  Supports then shrink by at least the uniform factor
(p^(u+1) - p)/(p^(u+1) - 1) per level relative to the edge count, which is
the decaying-support signal the reports certify.

Also here: finite-prefix largeness diagnostics (never proofs), cyclic
cover homology growth, and quasi-additive limit estimation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import fplinalg
from .complexes import (
    Cochain,
    GroupPresentation,
    TwoComplex,
    build_presentation_complex,
    class_coordinates,
    h1_cocycle_basis,
    h1_dimension,
)
from .covers import build_abelian_p_cover, build_cyclic_cover
from .errors import (
    MalformedTowerError,
    NotRapidlyDescendingError,
    QuasiAdditivityError,
)
from .plotkin import chain_factor, reduce_to_dimension, uniform_factor
from .wedge import build_wedge_family

__all__ = [
    "SeriesSpec",
    "TowerRecord",
    "DescentReport",
    "descent_parameters",
    "run_descent",
    "CriteriaReport",
    "largeness_criteria_report",
    "GrowthReport",
    "cyclic_growth_report",
    "quasi_additive_limit",
]

DEFAULT_CELL_BUDGET = 10**6
PREFIX_DISCLAIMER = "finite-prefix diagnostic, not a proof"


@dataclass(frozen=True)
class SeriesSpec:
    """How to pick the covering classes at each level of a tower.

    kind "derived" uses every class of H^1(K_i; F_p) (one full elementary
    abelian step); kind "rank" uses `rank` echelon-basis classes, preferring
    ones independent of the current family's span; kind "explicit" takes
    `levels[i]` as indices into the echelon cocycle basis of level i+1.
    """

    kind: str
    p: int
    depth: int
    cell_budget: int = DEFAULT_CELL_BUDGET
    rank: int | None = None
    levels: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        if self.kind not in ("derived", "rank", "explicit"):
            raise ValueError(f"unknown series kind {self.kind!r}")
        if self.kind == "rank" and (self.rank is None or self.rank < 1):
            raise ValueError("rank series needs rank >= 1")
        if self.kind == "explicit" and not self.levels:
            raise ValueError("explicit series needs per-level class indices")
        if self.depth < 1:
            raise ValueError("depth must be at least 1")
        fplinalg.validate_prime(self.p)


@dataclass(frozen=True)
class TowerRecord:
    """Per-level statistics of a descent run.

    Step fields (quotient_rank, bound_factor, wedge_count) are None on the
    final record, which only describes the deepest complex reached.
    """

    level: int
    index: int
    dp: int
    support_size: int
    edge_count: int
    relsize_upper: Fraction
    quotient_rank: int | None = None
    bound_factor: Fraction | None = None
    wedge_count: int | None = None


@dataclass(frozen=True)
class DescentReport:
    records: tuple[TowerRecord, ...]
    p: int
    u: int
    verdict: str  # decay-certified | bound-violated | budget-exhausted
    uniform_factor: Fraction
    notes: tuple[str, ...] = field(default_factory=tuple)


def descent_parameters(
    pres: GroupPresentation, prefix, p: int, lam: Fraction | None = None
) -> tuple[Fraction, int]:
    """Descent rate estimate and family dimension from a tower prefix.

    The rate is the smallest (quotient_rank - 2)/index over the prefix
    (or `lam` if the caller supplies one); the family dimension is
    ceil(4|R| / rate), floored at 1.  A non-positive rate raises
    NotRapidlyDescendingError.
    """
    fplinalg.validate_prime(p)
    if lam is None:
        prefix = [r for r in prefix if r.quotient_rank is not None]
        if not prefix:
            raise MalformedTowerError("parameter choice needs a nonempty prefix")
        lam = min(Fraction(r.quotient_rank - 2, r.index) for r in prefix)
    else:
        lam = Fraction(lam)
    if lam <= 0:
        raise NotRapidlyDescendingError(f"descent rate estimate {lam} is not positive")
    r_count = len(pres.relators)
    u = max(1, math.ceil(Fraction(4 * r_count) / lam))
    return lam, u


def _family_support(family) -> set[int]:
    support: set[int] = set()
    for c in family:
        support |= c.support()
    return support


def _series_classes(K: TwoComplex, spec: SeriesSpec, level: int, family) -> list[Cochain]:
    """The covering classes for the next level, per the series kind."""
    basis = h1_cocycle_basis(K, spec.p)
    if spec.kind == "derived":
        if not basis:
            raise ValueError(f"level {level}: H^1 is trivial, series cannot continue")
        return basis
    if spec.kind == "explicit":
        if level - 1 >= len(spec.levels):
            raise ValueError(f"explicit series has no classes for level {level}")
        picks = spec.levels[level - 1]
        for i in picks:
            if not 0 <= i < len(basis):
                raise ValueError(
                    f"level {level}: class index {i} out of range (H^1 has rank {len(basis)})"
                )
        return [basis[i] for i in picks]
    # rank kind: prefer classes independent of the family span so the
    # complement (and with it the wedge family) stays as large as possible
    p = spec.p
    avoid = [class_coordinates(c) for c in family]
    chosen: list[Cochain] = []
    chosen_coords: list[np.ndarray] = []

    def independent(rows, c):
        stacked = np.array(rows + [class_coordinates(c)], dtype=np.int64)
        return fplinalg.rank(stacked, p) == len(stacked)

    for c in basis:
        if len(chosen) == spec.rank:
            break
        if independent(avoid + chosen_coords, c):
            chosen.append(c)
            chosen_coords.append(class_coordinates(c))
    for c in basis:
        if len(chosen) == spec.rank:
            break
        if any(c is x for x in chosen):
            continue
        if independent(chosen_coords, c):
            chosen.append(c)
            chosen_coords.append(class_coordinates(c))
    if len(chosen) < spec.rank:
        raise ValueError(
            f"level {level}: H^1 rank {len(basis)} cannot supply {spec.rank} classes"
        )
    return chosen


def _record(level, index, K, family, p, quotient_rank=None, bound_factor=None, wedge_count=None):
    support = _family_support(family)
    return TowerRecord(
        level=level,
        index=index,
        dp=h1_dimension(K, p),
        support_size=len(support),
        edge_count=K.num_edges,
        relsize_upper=Fraction(len(support), K.num_edges),
        quotient_rank=quotient_rank,
        bound_factor=bound_factor,
        wedge_count=wedge_count,
    )


def run_descent(pres: GroupPresentation, spec: SeriesSpec, u: int, seed: int = 0) -> DescentReport:
    """Run the descent pipeline to the requested depth.

    Starts from the first u echelon classes of the presentation complex.
    Each level builds the cover named by the series, forms the wedge family
    of the current cocycle family, and reduces its span to dimension u.  A
    wedge family of size <= u stops the run with verdict bound-violated; a
    projected cell count over the budget stops it with budget-exhausted.
    """
    if u < 1:
        raise ValueError("family dimension u must be at least 1")
    p = spec.p
    K = build_presentation_complex(pres)
    basis = h1_cocycle_basis(K, p)
    if len(basis) < u:
        raise ValueError(f"H^1 of the presentation complex has rank {len(basis)} < u = {u}")
    family: list[Cochain] = basis[:u]
    records: list[TowerRecord] = []
    notes: list[str] = []
    index = 1
    verdict = "decay-certified"

    for level in range(1, spec.depth + 1):
        classes = _series_classes(K, spec, level, family)
        n = len(classes)
        degree = p**n
        projected = degree * K.num_cells
        if projected > spec.cell_budget:
            verdict = "budget-exhausted"
            notes.append(
                f"level {level}: projected {projected} cells exceeds budget {spec.cell_budget}"
            )
            records.append(_record(level, index, K, family, p, quotient_rank=n))
            break
        cov = build_abelian_p_cover(K, classes, p)
        fam = build_wedge_family(cov, family)
        if fam.size <= u:
            verdict = "bound-violated"
            notes.append(
                f"level {level}: wedge family has {fam.size} classes, need more than u = {u}"
            )
            records.append(
                _record(level, index, K, family, p, quotient_rank=n, wedge_count=fam.size)
            )
            index *= degree
            records.append(_record(level + 1, index, cov.total, fam.cocycle_basis, p))
            break
        span = fplinalg.FpSubspace.from_rows(
            np.array([c.values for c in fam.cocycle_basis], dtype=np.int64),
            p,
            cov.total.num_edges,
        )
        reduction = reduce_to_dimension(span, u, seed=seed)
        if not reduction.certified:
            notes.append(f"level {level}: sampled reduction missed the averaging bound")
        records.append(
            _record(
                level,
                index,
                K,
                family,
                p,
                quotient_rank=n,
                bound_factor=chain_factor(p, fam.size, u),
                wedge_count=fam.size,
            )
        )
        old_support = records[-1].support_size
        index *= degree
        K = cov.total
        family = [Cochain(K, p, row) for row in reduction.subspace.basis]
        # the new family's support stays inside the preimage of the old one
        assert len(_family_support(family)) <= degree * old_support
    else:
        records.append(_record(spec.depth + 1, index, K, family, p))

    if verdict == "decay-certified":
        factor = uniform_factor(p, u)
        for a, b in zip(records, records[1:]):
            if b.relsize_upper > factor * a.relsize_upper:
                verdict = "bound-violated"
                notes.append(
                    f"levels {a.level}->{b.level}: relative size ratio exceeded {factor}"
                )
                break
    return DescentReport(
        records=tuple(records),
        p=p,
        u=u,
        verdict=verdict,
        uniform_factor=uniform_factor(p, u),
        notes=tuple(notes),
    )


@dataclass(frozen=True)
class CriteriaReport:
    """Finite-prefix consistency check against the largeness criteria.

    log_index_ratios are in units of log p (multiply by log p for the
    literal values); running_infimum tracks the descent-rate statistic
    min over the prefix of quotient_rank/index.
    """

    entries: tuple[tuple[int, int], ...]
    log_index_ratios: tuple[Fraction, ...]
    rank_ratios: tuple[Fraction, ...]
    running_infimum: tuple[Fraction, ...]
    quotients_abelian: bool
    log_ratio_nondecreasing: bool
    rank_ratio_min: Fraction
    disclaimer: str = PREFIX_DISCLAIMER


def largeness_criteria_report(records) -> CriteriaReport:
    """Diagnostic sequences from (index, quotient_rank) tower records.

    Reports quotient_rank/index per level (both as the log-index growth
    coefficient and the descent-rate statistic) and flags whether the
    prefix is consistent with unbounded log-index growth.  Never a proof.
    """
    entries = [(int(i), int(n)) for i, n in records]
    if not entries:
        raise MalformedTowerError("criteria report needs a nonempty record list")
    indices = [i for i, _ in entries]
    if any(i < 1 for i in indices):
        raise MalformedTowerError("indices must be positive")
    if any(b <= a for a, b in zip(indices, indices[1:])):
        raise MalformedTowerError("indices must be strictly increasing")
    if any(n < 1 for _, n in entries):
        raise MalformedTowerError("quotient ranks must be at least 1")
    ratios = [Fraction(n, i) for i, n in entries]
    running = []
    cur = None
    for r in ratios:
        cur = r if cur is None else min(cur, r)
        running.append(cur)
    nondecreasing = all(b >= a for a, b in zip(ratios, ratios[1:]))
    return CriteriaReport(
        entries=tuple(entries),
        log_index_ratios=tuple(ratios),
        rank_ratios=tuple(ratios),
        running_infimum=tuple(running),
        quotients_abelian=True,
        log_ratio_nondecreasing=nondecreasing,
        rank_ratio_min=running[-1],
    )


@dataclass(frozen=True)
class GrowthReport:
    """Mod-p homology growth along the cyclic covers of a presentation complex."""

    entries: tuple[tuple[int, int, Fraction], ...]  # (order, dp, dp/order)
    positive_limit_signal: bool
    limit_estimate: Fraction
    disclaimer: str = PREFIX_DISCLAIMER


def cyclic_growth_report(
    pres: GroupPresentation, weights, p: int, max_order: int
) -> GrowthReport:
    """d_p of the cyclic covers of orders 1..max_order and the ratio trend.

    The weights must be an integer cocycle inducing a surjection onto the
    integers (gcd of loop evaluations 1), so every cyclic cover exists.
    """
    fplinalg.validate_prime(p)
    if max_order < 1:
        raise ValueError("max_order must be at least 1")
    K = build_presentation_complex(pres)
    w = np.asarray(weights, dtype=np.int64)
    evals = [
        sum(d * int(w[e]) for e, d in K.fundamental_loop(e0).steps)
        for e0 in K.non_tree_edges
    ]
    g = math.gcd(*[abs(x) for x in evals]) if evals else 0
    if g == 0:
        raise ValueError("weights induce the zero homomorphism")
    if g != 1:
        raise ValueError(f"weights generate {g}Z, not all of Z")
    entries = []
    for order in range(1, max_order + 1):
        cov = build_cyclic_cover(K, w, order)
        dp = h1_dimension(cov.total, p)
        entries.append((order, dp, Fraction(dp, order)))
    dps = [dp for _, dp, _ in entries]
    nondecreasing = all(b >= a for a, b in zip(dps, dps[1:]))
    signal = nondecreasing and dps[-1] > dps[0]
    return GrowthReport(
        entries=tuple(entries),
        positive_limit_signal=signal,
        limit_estimate=entries[-1][2],
    )


def quasi_additive_limit(values, k) -> tuple[Fraction, bool]:
    """Limit estimate for f(i)/i from samples of a quasi-additive function.

    values is a list of (i, f(i)) pairs; every sampled triple must satisfy
    |f(i+j) - f(i) - f(j)| <= k, else QuasiAdditivityError names a witness
    pair.  Since |f(i) - M i| <= 2k for the limit M, the ratio at the
    largest sampled argument is the tightest available estimate; the
    bounded flag reports whether all |f(i)| <= 2k, consistent with f being
    bounded (limit 0).
    """
    pairs = sorted((int(i), int(v)) for i, v in values)
    if not pairs:
        raise ValueError("need at least one sample")
    if any(i < 1 for i, _ in pairs):
        raise ValueError("arguments must be positive integers")
    if len({i for i, _ in pairs}) != len(pairs):
        raise ValueError("arguments must be distinct")
    table = dict(pairs)
    if k < 0:
        raise ValueError("quasi-additivity constant must be nonnegative")
    for i in table:
        for j in table:
            if j < i:
                continue
            if i + j in table:
                defect = abs(table[i + j] - table[i] - table[j])
                if defect > k:
                    raise QuasiAdditivityError(
                        f"|f({i + j}) - f({i}) - f({j})| = {defect} > {k}",
                        witness=(i, j),
                    )
    i_max, f_max = pairs[-1]
    estimate = Fraction(f_max, i_max)
    bounded = all(abs(v) <= 2 * k for _, v in pairs)
    return estimate, bounded
