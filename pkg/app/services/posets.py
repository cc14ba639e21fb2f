"""
Divisor posets, their order complexes, vertex links and the connectivity checkers.

The proper divisor poset is 𝒟 − {1, Δ} under left divisibility; avoid_poset(μ)
keeps the η with μ ≰ η. Reduced (co)homology of these order complexes
decides the duality and end-connectivity verdicts.
"""

from __future__ import annotations

import dataclasses
import logging
from typing import Dict, List, Optional, Sequence, Tuple

from .germ import IDENTITY, Germ, SimpleId
from .homology import groups_from_forms, reduce_all
from .smith import IntegerMatrix, SmithForm
from .words import PositiveElement, PositiveWord, rf
from ..models.analysisResults import (
    DualityVerdict,
    EndConnectivityVerdict,
    HomologyGroup,
    LinkReport,
    PosetReport,
    Verdict,
)

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class FinitePoset:
    """Simples ordered strictly by left divisibility."""
    germ: Germ = dataclasses.field(compare=False, repr=False)
    elements: Tuple[SimpleId, ...] = ()
    label: str = dataclasses.field(default="", compare=False)

    def __len__(self) -> int:
        return len(self.elements)

    def less(self, a: SimpleId, b: SimpleId) -> bool:
        return a != b and self.germ.left_divides(a, b)

    def names(self) -> List[str]:
        return [self.germ.names[x] for x in self.elements]

    def minimum(self) -> Optional[SimpleId]:
        for x in self.elements:
            if all(x == y or self.less(x, y) for y in self.elements):
                return x
        return None

    def chains(self) -> List[List[Tuple[SimpleId, ...]]]:
        """Chains by length: result[k] lists the chains with k elements (result[0] = [()])."""
        above: Dict[SimpleId, List[SimpleId]] = {
            x: [y for y in self.elements if self.less(x, y)] for x in self.elements
        }
        layers: List[List[Tuple[SimpleId, ...]]] = [[()]]

        def extend(chain: Tuple[SimpleId, ...], candidates: Sequence[SimpleId]) -> None:
            for y in candidates:
                grown = chain + (y,)
                while len(layers) <= len(grown):
                    layers.append([])
                layers[len(grown)].append(grown)
                extend(grown, above[y])

        extend((), self.elements)
        return layers


def proper_poset(germ: Germ) -> FinitePoset:
    elements = tuple(x for x in range(1, germ.size) if x != germ.delta)
    return FinitePoset(germ, elements, "proper")


def avoid_poset(germ: Germ, mu: SimpleId) -> FinitePoset:
    """{η ∈ 𝒟 − {1, Δ} : μ ≰_l η}; equal to the proper poset for μ = Δ."""
    if mu == IDENTITY:
        raise ValueError("avoid_poset needs a nontrivial simple")
    elements = tuple(x for x in proper_poset(germ).elements if not germ.left_divides(mu, x))
    return FinitePoset(germ, elements, f"avoid({germ.names[mu]})")


def _order_complex_boundaries(poset: FinitePoset) -> Tuple[List[int], List[IntegerMatrix]]:
    """Augmented chain complex: C_{-1} = Z (the empty chain), C_k = chains with k+1 elements."""
    layers = poset.chains()
    ranks = [len(layer) for layer in layers]
    index = [{chain: i for i, chain in enumerate(layer)} for layer in layers]
    matrices = []
    for size in range(1, len(layers)):
        matrix = IntegerMatrix.zeros(ranks[size - 1], ranks[size])
        for j, chain in enumerate(layers[size]):
            column = matrix.columns[j]
            for i in range(size):
                face = chain[:i] + chain[i + 1:]
                column[index[size - 1][face]] = (-1) ** i
        matrices.append(matrix)
    return ranks, matrices


def _poset_groups(ranks: Sequence[int], forms: Sequence[SmithForm], cohomology: bool) -> List[HomologyGroup]:
    # ranks[0] is degree -1; forms[k] is the differential leaving ranks[k]
    return groups_from_forms(ranks, [None] + list(forms), first_degree=-1, cohomology=cohomology)


def _reduced_groups(posets: Sequence[FinitePoset], cohomology: bool) -> List[List[HomologyGroup]]:
    """Reduced (co)homology of several order complexes in one concurrent batch."""
    complexes = [_order_complex_boundaries(p) for p in posets]
    batch = [m for _, matrices in complexes for m in matrices]
    forms = reduce_all(batch, what="order complex reduction")
    results = []
    offset = 0
    for ranks, matrices in complexes:
        own = forms[offset: offset + len(matrices)]
        offset += len(matrices)
        results.append(_poset_groups(ranks, own, cohomology))
    return results


def reduced_poset_homology(poset: FinitePoset) -> List[HomologyGroup]:
    """Reduced homology of the order complex from degree -1; the empty poset has H_{-1} = Z."""
    return _reduced_groups([poset], cohomology=False)[0]


def reduced_poset_cohomology(poset: FinitePoset) -> List[HomologyGroup]:
    return _reduced_groups([poset], cohomology=True)[0]


def poset_report(poset: FinitePoset, groups: List[HomologyGroup]) -> PosetReport:
    nonzero = [g.dimension for g in groups if not g.is_zero()]
    label = poset.label or "poset"
    mu = label[len("avoid("):-1] if label.startswith("avoid(") else None
    return PosetReport(
        label=label,
        mu=mu,
        size=len(poset),
        elements=poset.names(),
        empty=len(poset) == 0,
        top_degree=len(groups) - 2,
        groups=groups,
        nonzero_degrees=nonzero,
        torsion_free=all(g.is_torsion_free() for g in groups),
    )


def checker_posets(germ: Germ) -> List[FinitePoset]:
    """The proper poset followed by avoid_poset(μ) for every μ ∈ 𝒟 − {1, Δ}."""
    posets = [proper_poset(germ)]
    posets.extend(avoid_poset(germ, mu) for mu in range(1, germ.size) if mu != germ.delta)
    return posets


def duality_check(germ: Germ) -> DualityVerdict:
    """
    Torsion-free reduced cohomology concentrated in one common degree c for the
    proper poset and all avoid-posets gives a duality group of dimension c + 2.
    """
    posets = checker_posets(germ)
    reports = [poset_report(p, g) for p, g in zip(posets, _reduced_groups(posets, cohomology=True))]

    def inconclusive(reason: str, offending: Optional[str]) -> DualityVerdict:
        logger.warning(f"Duality check for {germ.name} inconclusive: {reason}")
        return DualityVerdict(
            is_duality=Verdict.inconclusive, reason=reason, offending=offending, posets=reports
        )

    degree: Optional[int] = None
    fixed_by: Optional[str] = None
    for report in reports:
        if report.empty:
            return inconclusive("empty poset (reduced cohomology Z in degree -1)", report.label)
        if not report.torsion_free:
            return inconclusive("reduced cohomology has torsion", report.label)
        if len(report.nonzero_degrees) > 1:
            return inconclusive(f"reduced cohomology in degrees {report.nonzero_degrees}", report.label)
        if report.nonzero_degrees:
            c = report.nonzero_degrees[0]
            if degree is None:
                degree, fixed_by = c, report.label
            elif c != degree:
                return inconclusive(
                    f"reduced cohomology in degree {c}, but {fixed_by} has degree {degree}", report.label
                )

    if degree is None:
        return inconclusive("every poset is acyclic; no degree is fixed", None)
    return DualityVerdict(
        is_duality=Verdict.yes,
        n=degree + 2,
        reason=f"all reduced cohomology torsion-free and concentrated in degree {degree}",
        posets=reports,
    )


def end_connectivity_check(germ: Germ) -> EndConnectivityVerdict:
    """Largest n ≥ 0 such that every checker poset has vanishing reduced homology in degrees ≤ n."""
    posets = checker_posets(germ)
    reports = [poset_report(p, g) for p, g in zip(posets, _reduced_groups(posets, cohomology=False))]

    bound: Optional[int] = None
    offending: Optional[str] = None
    for report in reports:
        if not report.nonzero_degrees:
            continue
        first = report.nonzero_degrees[0] - 1
        if bound is None or first < bound:
            bound, offending = first, report.label

    if bound is None:
        n = max(r.top_degree for r in reports)
        reason = "every poset is acyclic"
    else:
        n = bound
        reason = f"first nonvanishing reduced homology in degree {bound + 1} ({offending})"

    if n < 0:
        logger.warning(f"End connectivity check for {germ.name} inconclusive: {reason}")
        return EndConnectivityVerdict(
            verdict=Verdict.inconclusive, reason=reason, offending=offending, posets=reports
        )
    return EndConnectivityVerdict(
        verdict=Verdict.yes,
        n=n,
        conclusion=f"{n + 1}-connected at infinity",
        reason=reason,
        offending=offending,
        posets=reports,
    )


# ---------------------------------------------------------------------------
# Vertex links
# ---------------------------------------------------------------------------

def _right_front_complement(a: PositiveWord) -> SimpleId:
    return a.germ.right_complement(rf(PositiveElement(a, 0)))


def descending_link(a: PositiveWord) -> FinitePoset:
    """{μ ∈ 𝒟 − {1, Δ} : RF(a)* ≤_l μ}; empty for the base vertex."""
    germ = a.germ
    if not a.letters:
        return FinitePoset(germ, (), "descending(1)")
    star = _right_front_complement(a)
    elements = tuple(x for x in proper_poset(germ).elements if germ.left_divides(star, x))
    return FinitePoset(germ, elements, f"descending({a})")


def ascending_link(a: PositiveWord) -> FinitePoset:
    """avoid_poset(RF(a)*); the whole proper poset for the base vertex."""
    poset = avoid_poset(a.germ, _right_front_complement(a))
    return dataclasses.replace(poset, label=f"ascending({str(a) or '1'})")


def link_report(a: PositiveWord) -> LinkReport:
    germ = a.germ
    right_front = rf(PositiveElement(a, 0))
    down, up = descending_link(a), ascending_link(a)
    down_groups, up_groups = _reduced_groups([down, up], cohomology=False)
    return LinkReport(
        vertex=str(a) or "1",
        right_front=germ.names[right_front],
        right_front_complement=germ.names[germ.right_complement(right_front)],
        descending=poset_report(down, down_groups),
        ascending=poset_report(up, up_groups),
    )