"""
Finite Coxeter systems of types A_n and I2(m) as permutation groups.

Permutations are tuples in word notation, x = (x(0), …, x(n-1)), composed so
that (uv)(i) = u(v(i)). Type A_n acts on n+1 points with the adjacent
transpositions as generators; I2(m) acts on the vertices of an m-gon with
the reflections i ↦ −i and i ↦ 1 − i.
"""

from __future__ import annotations

import dataclasses
import logging
from collections import deque
from functools import cached_property
from typing import Dict, Sequence, Tuple

from ...config import settings
from ...models.germFile import CoxeterFamily, CoxeterSpec
from ...utils import RankTooLarge

logger = logging.getLogger(__name__)

Permutation = Tuple[int, ...]

GENERATOR_LETTERS = "stuvwxyz"


def identity(n: int) -> Permutation:
    return tuple(range(n))


def compose(u: Sequence[int], v: Sequence[int]) -> Permutation:
    """(uv)(i) = u(v(i))."""
    return tuple(u[i] for i in v)


def inverse(perm: Sequence[int]) -> Permutation:
    result = [0] * len(perm)
    for i, x in enumerate(perm):
        result[x] = i
    return tuple(result)


def transposition(n: int, i: int, j: int) -> Permutation:
    perm = list(range(n))
    perm[i], perm[j] = perm[j], perm[i]
    return tuple(perm)


def disjoint_cycles(perm: Sequence[int]) -> list:
    """Cycles ordered by their smallest point, each starting from it."""
    cycles = []
    visited = [False] * len(perm)
    for i in range(len(perm)):
        if visited[i]:
            continue
        cycle = []
        pos = i
        while not visited[pos]:
            cycle.append(pos)
            visited[pos] = True
            pos = perm[pos]
        cycles.append(tuple(cycle))
    return cycles


def cycle_notation(perm: Sequence[int]) -> str:
    """1-based cycles without fixed points, e.g. "(12)(34)"; commas once points exceed 9."""
    sep = "" if len(perm) <= 9 else ","
    return "".join(
        "(" + sep.join(str(x + 1) for x in cycle) + ")"
        for cycle in disjoint_cycles(perm)
        if len(cycle) > 1
    )


@dataclasses.dataclass(frozen=True)
class CoxeterSystem:
    spec: CoxeterSpec
    degree: int
    generators: Tuple[Permutation, ...]

    @property
    def letters(self) -> str:
        return GENERATOR_LETTERS[: len(self.generators)]

    @property
    def identity(self) -> Permutation:
        return identity(self.degree)

    def word_name(self, word: Sequence[int]) -> str:
        return "".join(self.letters[i] for i in word)

    def coxeter_element(self) -> Permutation:
        """s_1 s_2 ⋯ s_n."""
        element = self.identity
        for s in self.generators:
            element = compose(element, s)
        return element

    @cached_property
    def elements(self) -> Dict[Permutation, Tuple[int, ...]]:
        """
        Every group element with its lexicographically least reduced word.

        Breadth-first search extending words on the right; elements are
        visited in shortlex order, so the first word to reach an element is
        its shortlex normal form.
        """
        words: Dict[Permutation, Tuple[int, ...]] = {self.identity: ()}
        queue = deque([self.identity])
        while queue:
            w = queue.popleft()
            for i, s in enumerate(self.generators):
                ws = compose(w, s)
                if ws not in words:
                    words[ws] = words[w] + (i,)
                    queue.append(ws)
        logger.debug(f"{self.spec.label}: {len(words)} group elements")
        return words

    def length(self, perm: Permutation) -> int:
        return len(self.elements[perm])

    @cached_property
    def reflections(self) -> Tuple[Permutation, ...]:
        """Conjugates of the generators."""
        found = set()
        for w in self.elements:
            w_inv = inverse(w)
            for s in self.generators:
                found.add(compose(compose(w, s), w_inv))
        return tuple(sorted(found))

    @cached_property
    def reflection_lengths(self) -> Dict[Permutation, int]:
        """Word length with respect to all reflections, by breadth-first search."""
        lengths = {self.identity: 0}
        queue = deque([self.identity])
        while queue:
            w = queue.popleft()
            for r in self.reflections:
                wr = compose(w, r)
                if wr not in lengths:
                    lengths[wr] = lengths[w] + 1
                    queue.append(wr)
        return lengths


def _check_limits(spec: CoxeterSpec) -> None:
    if spec.family == CoxeterFamily.A:
        limit = min(settings.GARSIDE_MAX_RANK, len(GENERATOR_LETTERS))
    else:
        limit = settings.GARSIDE_MAX_DIHEDRAL_M
    if spec.rank > limit:
        raise RankTooLarge(spec.family.value, spec.rank, limit)


def coxeter_system(spec: CoxeterSpec) -> CoxeterSystem:
    """The permutation representation of A_n or I2(m)."""
    _check_limits(spec)
    if spec.family == CoxeterFamily.A:
        degree = spec.rank + 1
        generators = tuple(transposition(degree, i, i + 1) for i in range(spec.rank))
    else:
        degree = spec.rank
        generators = (
            tuple((-i) % degree for i in range(degree)),
            tuple((1 - i) % degree for i in range(degree)),
        )
    return CoxeterSystem(spec, degree, generators)
