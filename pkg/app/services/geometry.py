"""
Combinatorial geometry of the complex whose vertices are the cosets gΔ^ℤ.

A vertex is stored by its Δ-free left greedy representative. The distance
d(v, w) is the norm of the Δ-free prefix of the Deligne normal form of
v^{-1}w, and the letters of that prefix label the geodesic from v to w. The
distance is not symmetric.
"""

from __future__ import annotations

import dataclasses
import functools
import logging
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..config import settings
from .germ import Germ, SimpleId
from .words import (
    GroupElement,
    PositiveElement,
    PositiveWord,
    format_element,
    inverse,
    mult,
    norm,
    parse_element,
    positive,
    power,
    word_length,
    _check_same,
)
from ..models.analysisResults import (
    CenterReport,
    GeodesicReport,
    OrbitRadii,
    QuotientOrder,
    SubgroupRecord,
    SubgroupTable,
    TamenessReport,
    TamenessSample,
    TranslationEstimate,
)
from ..utils import OrientationViolation, SimplexViolation

logger = logging.getLogger(__name__)

DOWN = "down"
UP = "up"


@dataclasses.dataclass(frozen=True)
class Vertex:
    """The coset rep·Δ^ℤ; rep is Δ-free and left greedy."""
    rep: PositiveWord

    @property
    def germ(self) -> Germ:
        return self.rep.germ

    @classmethod
    def base(cls, germ: Germ) -> "Vertex":
        return cls(PositiveWord(germ, ()))

    @classmethod
    def of(cls, g: GroupElement) -> "Vertex":
        return cls(g.prefix)

    def element(self) -> GroupElement:
        return GroupElement(self.rep, 0)

    def sort_key(self) -> Tuple[int, Tuple[str, ...]]:
        return len(self.rep), tuple(self.rep.names())

    def __str__(self) -> str:
        return str(self.rep) or "1"


def parse_vertex(germ: Germ, text: str) -> Vertex:
    """Any element in the word syntax names the vertex of its coset."""
    return Vertex.of(parse_element(germ, text))


def translate(g: GroupElement, v: Vertex) -> Vertex:
    return Vertex.of(mult(g, v.element()))


def _offset(v: Vertex, w: Vertex) -> GroupElement:
    _check_same(v.germ, w.germ)
    return mult(inverse(v.element()), w.element())


def _distance_function(germ: Germ):
    """A bounded LRU over pairs of representatives, one per germ."""

    @functools.lru_cache(maxsize=settings.GARSIDE_DISTANCE_CACHE_SIZE)
    def compute(source: Tuple[SimpleId, ...], target: Tuple[SimpleId, ...]) -> int:
        offset = _offset(Vertex(PositiveWord(germ, source)), Vertex(PositiveWord(germ, target)))
        return norm(PositiveElement(offset.prefix, 0))

    return compute


def distance_cache_info(germ: Germ):
    """Hit and miss counters of the distance cache of a germ."""
    return germ.memo("distance_cache", lambda: _distance_function(germ)).cache_info()


def distance(v: Vertex, w: Vertex) -> int:
    """Norm of the Δ-free prefix of DNF(v^{-1}w); cached per germ."""
    _check_same(v.germ, w.germ)
    compute = v.germ.memo("distance_cache", lambda: _distance_function(v.germ))
    return compute(v.rep.letters, w.rep.letters)


def geodesic(v: Vertex, w: Vertex) -> List[SimpleId]:
    """Edge labels b_1, …, b_n of the geodesic from v to w."""
    return list(_offset(v, w).prefix.letters)


def coset_path(v: Vertex, w: Vertex) -> List[Vertex]:
    """Vertices v, vb_1, vb_1b_2, … along the geodesic, ending at w."""
    germ = v.germ
    labels = geodesic(v, w)
    start = v.element()
    path = [v]
    for i in range(1, len(labels) + 1):
        step = GroupElement(PositiveWord(germ, tuple(labels[:i])), 0)
        path.append(Vertex.of(mult(start, step)))
    return path


def reverse_geodesic_check(v: Vertex, w: Vertex) -> bool:
    """The geodesic from w to v visits the cosets of the geodesic from v to w in reverse."""
    return coset_path(w, v) == list(reversed(coset_path(v, w)))


def morse_value(v: Vertex) -> int:
    return norm(PositiveElement(v.rep, 0))


def orientation_profile(v: Vertex, w: Vertex) -> List[str]:
    """
    "down" or "up" per geodesic edge, according to whether the Morse value
    drops or rises as the path leaves v. Raises OrientationViolation unless
    the profile has the shape down* up*.
    """
    path = coset_path(v, w)
    values = [morse_value(x) for x in path]
    profile = []
    for i, (a, b) in enumerate(zip(values, values[1:])):
        if a == b:
            raise OrientationViolation(
                f"Morse value constant on edge {path[i]} -> {path[i + 1]}",
                witness=[str(path[i]), str(path[i + 1])],
            )
        profile.append(DOWN if b < a else UP)
    if UP in profile and DOWN in profile[profile.index(UP):]:
        raise OrientationViolation(
            f"Geodesic {v} -> {w} has profile {profile}",
            witness=[str(x) for x in path],
        )
    return profile


def geodesic_report(v: Vertex, w: Vertex, with_profile: bool = True) -> GeodesicReport:
    germ = v.germ
    return GeodesicReport(
        source=str(v),
        target=str(w),
        distance=distance(v, w),
        labels=[germ.names[x] for x in geodesic(v, w)],
        path=[str(x) for x in coset_path(v, w)],
        profile=orientation_profile(v, w) if with_profile else None,
    )


def adjacent(v: Vertex, w: Vertex) -> bool:
    """Distinct vertices joined by one edge: single-letter geodesics both ways."""
    return v != w and len(geodesic(v, w)) <= 1 and len(geodesic(w, v)) <= 1


def is_simplex(vertices: Sequence[Vertex]) -> bool:
    return all(
        adjacent(a, b)
        for i, a in enumerate(vertices)
        for b in vertices[i + 1:]
    )


# ---------------------------------------------------------------------------
# Balls and centers
# ---------------------------------------------------------------------------

def _delta_free_positives(germ: Germ, r: int) -> List[Tuple[PositiveWord, int]]:
    """
    Δ-free positive elements of norm ≤ r with their norms, found by extending
    with atoms. Sorted by norm, so a prefix of the list is a smaller ball.
    """
    by_radius: Dict[int, List[Tuple[PositiveWord, int]]] = germ.memo("delta_free_positives", dict)
    if r in by_radius:
        return by_radius[r]

    atoms = germ.atoms()
    seen = {(): (PositiveWord(germ, ()), 0)}
    frontier = [seen[()][0]]
    while frontier:
        word = frontier.pop()
        for x in atoms:
            grown = positive(germ, (*word.letters, x))
            if grown.deltas or grown.word.letters in seen:
                continue
            size = norm(grown)
            if size > r:
                continue
            seen[grown.word.letters] = (grown.word, size)
            frontier.append(grown.word)
    pairs = sorted(seen.values(), key=lambda pair: (pair[1], len(pair[0]), pair[0].letters))
    by_radius[r] = pairs
    return pairs


def ball(t: Vertex, r: int) -> List[Vertex]:
    """All v with d(t, v) ≤ r, sorted by representative."""
    if r < 0:
        raise ValueError(f"ball radius must be >= 0, got {r}")
    start = t.element()
    vertices = {
        Vertex.of(mult(start, GroupElement(a, 0)))
        for a, _ in _delta_free_positives(t.germ, r)
    }
    return sorted(vertices, key=Vertex.sort_key)


def radius_at(T: Sequence[Vertex], v: Vertex) -> int:
    return max(distance(t, v) for t in T)


def centers(T: Sequence[Vertex]) -> CenterReport:
    """
    Circumscribed radius of T and all its centers.

    With r0 = max_t d(t, t_0) every center c satisfies d(t, c) ≤ r0 for all
    t ∈ T, so the candidates are ball(t_0, r0) and the search is exhaustive.
    Candidates t_0·a are visited by increasing d(t_0, t_0·a) = ||a|| and the
    walk stops once that exceeds the best radius seen so far.
    """
    if not T:
        raise ValueError("centers needs a nonempty set of vertices")
    for t in T:
        _check_same(T[0].germ, t.germ)
    t0, others = T[0], T[1:]
    r0 = radius_at(T, t0)
    start = t0.element()
    radius = r0
    found: List[Vertex] = []
    visited = 0
    for a, size in _delta_free_positives(t0.germ, r0):
        if size > radius:
            break
        visited += 1
        v = Vertex.of(mult(start, GroupElement(a, 0)))
        r = _radius_within(others, v, size, radius)
        if r is None:
            continue
        if r < radius:
            radius, found = r, [v]
        else:
            found.append(v)
    found.sort(key=Vertex.sort_key)
    if not is_simplex(found):
        raise SimplexViolation(
            f"Centers of {[str(t) for t in T]} are not pairwise adjacent",
            witness=[str(v) for v in found],
        )
    logger.debug(f"centers: r0={r0}, {visited} candidates visited, radius {radius}")
    return CenterReport(
        radius=radius,
        centers=[str(v) for v in found],
        search_radius=r0,
        candidates=visited,
    )


def _radius_within(others: Sequence[Vertex], v: Vertex, start: int, bound: int) -> Optional[int]:
    """max(start, d(t, v) for t in others), or None as soon as it exceeds bound."""
    r = start
    for t in others:
        d = distance(t, v)
        if d > bound:
            return None
        r = max(r, d)
    return r


def morse_order(germ: Germ, r: int) -> List[Tuple[Vertex, int]]:
    """Vertices of ball(1, r) with their Morse values, in filtration order."""
    pairs = [(v, morse_value(v)) for v in ball(Vertex.base(germ), r)]
    pairs.sort(key=lambda pair: (pair[1], pair[0].sort_key()))
    return pairs


# ---------------------------------------------------------------------------
# Finite subgroups of G/⟨Δ^m⟩
# ---------------------------------------------------------------------------

def _delta_cycle_length(germ: Germ, mu: SimpleId, j: int) -> Optional[int]:
    """The t with μ·σ^j(μ)⋯σ^{(t−1)j}(μ) = Δ and every partial product simple."""
    p, t = mu, 1
    while p != germ.delta:
        if t >= germ.delta_norm:
            return None
        p = germ.product(p, germ.sigma(mu, t * j))
        if p is None:
            return None
        t += 1
    return t


def _generator(germ: Germ, mu: SimpleId, j: int) -> GroupElement:
    return GroupElement.from_letters(germ, [mu]) * GroupElement.delta_power(germ, j)


def finite_subgroups(germ: Germ) -> SubgroupTable:
    """
    Generators of finite subgroups of G/⟨Δ^m⟩ up to the σ^j-twisted cycling
    μ ↦ σ^j(μ), with type-2 products ⟨μΔ^j⟩ × ⟨Δ^k⟩ where σ^k fixes μ.
    """
    m = germ.m
    records: List[SubgroupRecord] = []
    seen = set()
    for mu in range(1, germ.size):
        for j in range(m):
            orbit = {germ.sigma(mu, i * j) for i in range(m)}
            key = (min(orbit), j)
            if key in seen:
                continue
            t = _delta_cycle_length(germ, mu, j)
            if t is None:
                continue
            seen.add(key)
            g1 = gcd(m, t * j + 1)
            order = t * m // g1
            if order == 1:
                continue
            generator = format_element(_generator(germ, mu, j))
            records.append(SubgroupRecord(
                mu=germ.names[mu], j=j, t=t, order=order, type=1, generator=generator,
            ))
            paired = set()
            for k in range(1, m):
                if germ.sigma(mu, k) != mu:
                    continue
                g2 = gcd(m, k)
                if g2 % g1 == 0 or g2 in paired:
                    continue
                paired.add(g2)
                combined = order * (m // g2) // (m // lcm(g1, g2))
                records.append(SubgroupRecord(
                    mu=germ.names[mu], j=j, t=t, order=combined, type=2, k=g2,
                    generator=f"{generator}, @{g2}",
                ))
    exponent = 1
    for record in records:
        exponent = lcm(exponent, record.order)
    logger.info(f"{germ.name}: {len(records)} finite subgroup generator(s), torsion exponent {exponent}")
    return SubgroupTable(germ=germ.name, sigma_order=m, records=records, torsion_exponent=exponent)


def torsion_exponent(germ: Germ) -> int:
    """lcm of the orders of all reported finite subgroups."""
    return finite_subgroups(germ).torsion_exponent


def quotient_order(g: GroupElement, limit: int) -> QuotientOrder:
    """Order of g in G/⟨Δ^m⟩ if some g^k with k ≤ limit is a power of Δ."""
    germ = g.germ
    current = GroupElement.identity(germ)
    for k in range(1, limit + 1):
        current = mult(current, g)
        if not current.prefix:
            order = k * germ.m // gcd(germ.m, current.exp)
            return QuotientOrder(element=format_element(g), order=order, limit=limit)
    return QuotientOrder(element=format_element(g), order=None, limit=limit)


# ---------------------------------------------------------------------------
# Tameness and translation length
# ---------------------------------------------------------------------------

def tameness_probe(germ: Germ, n_max: int) -> TamenessReport:
    """norm(Δ^n) for n ≤ n_max and c_N = max norm(Δ^n)/n; evidence, never a proof."""
    if n_max < 1:
        raise ValueError(f"tameness probe needs N >= 1, got {n_max}")
    empty = PositiveWord(germ, ())
    samples = [TamenessSample(n=n, norm=norm(PositiveElement(empty, n))) for n in range(1, n_max + 1)]
    constant = max(Fraction(s.norm, s.n) for s in samples)
    return TamenessReport(germ=germ.name, samples=samples, constant=str(constant), delta_norm=germ.delta_norm)


def translation_length(
    g: GroupElement,
    n_max: int,
    tameness_constant: Optional[Fraction] = None,
) -> TranslationEstimate:
    """
    min over n ≤ N of |g^n|_D / n. Word length is subadditive, so this bounds
    τ(g) from above and converges to it. Given a tameness constant c the
    lower bound min(1/(c·||Δ||), m/E) for g ≠ 1 is attached, E being the
    torsion exponent.
    """
    if n_max < 1:
        raise ValueError(f"translation length needs N >= 1, got {n_max}")
    germ = g.germ
    lengths = []
    current = GroupElement.identity(germ)
    for _ in range(n_max):
        current = mult(current, g)
        lengths.append(word_length(current))
    estimate, minimizing = min((Fraction(length, n), n) for n, length in enumerate(lengths, start=1))

    lower_bound = None
    if tameness_constant is not None and not g.is_identity():
        bound = min(1 / (tameness_constant * germ.delta_norm), Fraction(germ.m, torsion_exponent(germ)))
        lower_bound = str(bound)
    return TranslationEstimate(
        element=format_element(g),
        n_max=n_max,
        estimate=str(estimate),
        minimizing_n=minimizing,
        word_lengths=lengths,
        lower_bound=lower_bound,
    )


def word_length_bound(g: GroupElement, c: Fraction) -> bool:
    """|g|_D ≥ d(*, g(*)) / c."""
    base = Vertex.base(g.germ)
    return c * word_length(g) >= distance(base, Vertex.of(g))


def orbit_radii(g: GroupElement, n: int) -> OrbitRadii:
    """Circumscribed radii r_k of {*, g*, …, g^{k−1}*} for k = 1..n."""
    points = list(orbit(g, n))
    radii = [centers(points[:k]).radius for k in range(1, n + 1)]
    return OrbitRadii(element=format_element(g), radii=radii)


def orbit(g: GroupElement, n: int) -> Iterable[Vertex]:
    return (Vertex.of(power(g, i)) for i in range(n))
