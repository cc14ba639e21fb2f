"""
Finite germs of Garside monoids.

A germ is the lattice of simple divisors of Δ together with the partial
product restricted to that lattice. Simples are addressed by a SimpleId, an
index into ``Germ.names`` with 0 reserved for the identity "1".

``validate`` checks the finite axioms (identity, partial associativity,
cancellation, lattice property in both divisibility orders, Δ-divisors,
complements) and derives every table used downstream: divisibility bitsets,
meets and joins, complements, σ and its powers, norms and the greedy rewrite
tables. A Germ is never mutated after validation.
"""

from __future__ import annotations

import logging
from enum import Enum
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from ..models.germFile import GermFile, Violation, ViolationKind
from ..utils import GermValidationError, NotADivisor, ParseError, UnknownSimple

logger = logging.getLogger(__name__)

SimpleId = int
IDENTITY = 0
IDENTITY_NAME = "1"


class Side(str, Enum):
    left = "left"
    right = "right"


def _bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of mask, lowest first."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _top_of(mask: int, closure: Sequence[int]) -> Optional[int]:
    """The element x of mask whose closure set is exactly mask, if any."""
    for x in _bits(mask):
        if closure[x] == mask:
            return x
    return None


class Germ:
    """A validated germ. Build instances with ``validate``; never directly."""

    __slots__ = (
        "name", "names", "index", "delta", "_product", "_defined_right",
        "_down", "_meet", "_join", "_lq", "_rq", "_rc", "_lc",
        "_sigma_powers", "_norms", "_m", "_atoms", "_renorm", "_right_renorm", "_cache",
    )

    def __init__(self, name: str, names: List[str], delta: SimpleId, table: List[List[Optional[SimpleId]]], derived: dict):
        self.name = name
        self.names = tuple(names)
        self.index: Dict[str, SimpleId] = {s: i for i, s in enumerate(names)}
        self.delta = delta
        self._product = tuple(tuple(row) for row in table)
        self._defined_right = derived["defined_right"]
        self._down = derived["down"]
        self._meet = derived["meet"]
        self._join = derived["join"]
        self._lq = derived["lq"]
        self._rq = derived["rq"]
        self._rc = derived["rc"]
        self._lc = derived["lc"]
        self._sigma_powers = derived["sigma_powers"]
        self._norms = derived["norms"]
        self._m = len(derived["sigma_powers"])
        self._atoms = derived["atoms"]
        self._renorm, self._right_renorm = _rewrite_tables(self)
        # memo space for services (norm oracle, cells, signature); not part of equality
        self._cache: dict = {}

    # -- naming -----------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.names)

    def id_of(self, name: str) -> SimpleId:
        try:
            return self.index[name]
        except KeyError:
            raise UnknownSimple(name, self.name) from None

    def name_of(self, mu: SimpleId) -> str:
        if not 0 <= mu < len(self.names):
            raise UnknownSimple(mu, self.name)
        return self.names[mu]

    # -- product and divisibility ------------------------------------------

    def product(self, a: SimpleId, b: SimpleId) -> Optional[SimpleId]:
        """a·b when it is again simple, otherwise None."""
        return self._product[a][b]

    def right_multiples(self, a: SimpleId) -> Tuple[SimpleId, ...]:
        """All b with a·b defined."""
        return self._defined_right[a]

    def divides(self, a: SimpleId, b: SimpleId, side: Side = Side.left) -> bool:
        return bool((self._down[side][b] >> a) & 1)

    def left_divides(self, a: SimpleId, b: SimpleId) -> bool:
        return bool((self._down[Side.left][b] >> a) & 1)

    def right_divides(self, a: SimpleId, b: SimpleId) -> bool:
        return bool((self._down[Side.right][b] >> a) & 1)

    def divisors(self, mu: SimpleId, side: Side = Side.left) -> List[SimpleId]:
        return list(_bits(self._down[side][mu]))

    def meet(self, a: SimpleId, b: SimpleId, side: Side = Side.left) -> SimpleId:
        return self._meet[side][a][b]

    def join(self, a: SimpleId, b: SimpleId, side: Side = Side.left) -> SimpleId:
        return self._join[side][a][b]

    def left_quotient(self, a: SimpleId, b: SimpleId) -> SimpleId:
        """The c with a·c = b."""
        c = self._lq[a][b]
        if c is None:
            raise NotADivisor(self.names[a], self.names[b], Side.left.value)
        return c

    def right_quotient(self, a: SimpleId, b: SimpleId) -> SimpleId:
        """The c with c·a = b."""
        c = self._rq[a][b]
        if c is None:
            raise NotADivisor(self.names[a], self.names[b], Side.right.value)
        return c

    # -- complements, σ, norms ----------------------------------------------

    def right_complement(self, mu: SimpleId) -> SimpleId:
        """μ* with μ·μ* = Δ."""
        return self._rc[mu]

    def left_complement(self, mu: SimpleId) -> SimpleId:
        """*μ with *μ·μ = Δ."""
        return self._lc[mu]

    def sigma(self, mu: SimpleId, k: int = 1) -> SimpleId:
        """σ^k(μ), where Δμ = σ(μ)Δ; k is reduced mod the order of σ."""
        return self._sigma_powers[k % self._m][mu]

    def sigma_order(self) -> int:
        return self._m

    @property
    def m(self) -> int:
        return self._m

    def simple_norm(self, mu: SimpleId) -> int:
        return self._norms[mu]

    @property
    def delta_norm(self) -> int:
        return self._norms[self.delta]

    def atoms(self) -> List[SimpleId]:
        return list(self._atoms)

    def is_atom(self, mu: SimpleId) -> bool:
        return mu in self._atoms

    # -- greedy rewriting ----------------------------------------------------

    def renorm(self, a: SimpleId, b: SimpleId) -> Tuple[SimpleId, SimpleId]:
        """Left greedy rewrite of the pair (a, b): (a·c, c\\b) with c = meet(a*, b)."""
        return self._renorm[a][b]

    def right_renorm(self, a: SimpleId, b: SimpleId) -> Tuple[SimpleId, SimpleId]:
        """Right greedy rewrite of (a, b): (a/c, c·b) with c = right meet(a, *b)."""
        return self._right_renorm[a][b]

    def is_greedy(self, a: SimpleId, b: SimpleId) -> bool:
        return self._meet[Side.left][self._rc[a]][b] == IDENTITY

    def follows(self, a: SimpleId) -> List[SimpleId]:
        """Letters b ∉ {1, Δ} such that (a, b) is left greedy."""
        return [b for b in range(1, self.size) if b != self.delta and self.is_greedy(a, b)]

    # -- comparison and export ------------------------------------------------

    def product_triples(self) -> List[Tuple[str, str, str]]:
        """Non-identity product entries by name."""
        triples = []
        for a in range(1, self.size):
            for b in self._defined_right[a]:
                if b == IDENTITY:
                    continue
                triples.append((self.names[a], self.names[b], self.names[self._product[a][b]]))
        return triples

    def signature(self) -> tuple:
        if "signature" not in self._cache:
            self._cache["signature"] = (
                frozenset(self.names),
                self.names[self.delta],
                frozenset(self.product_triples()),
            )
        return self._cache["signature"]

    def same_as(self, other: "Germ") -> bool:
        """Cheap identity test used by the word and geometry operations."""
        return self is other or (self.names == other.names and self.delta == other.delta and self._product == other._product)

    def memo(self, key: str, factory):
        """Per-germ memo slot for derived service objects."""
        if key not in self._cache:
            self._cache[key] = factory()
        return self._cache[key]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Germ):
            return NotImplemented
        return self.signature() == other.signature()

    def __hash__(self) -> int:
        return hash(self.signature())

    def __repr__(self) -> str:
        return f"Germ({self.name!r}, simples={self.size}, delta={self.names[self.delta]!r})"

    def to_germ_file(self) -> GermFile:
        return GermFile(
            name=self.name,
            simples=sorted(self.names),
            delta=self.names[self.delta],
            atoms=sorted(self.names[a] for a in self._atoms),
            product=sorted(self.product_triples()),
        )

    def summary(self) -> dict:
        return {
            "name": self.name,
            "simples": self.size,
            "atoms": [self.names[a] for a in self._atoms],
            "delta": self.names[self.delta],
            "delta_norm": self.delta_norm,
            "sigma_order": self._m,
        }


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def _parse_table(raw: GermFile) -> Tuple[List[str], Dict[str, int], List[List[Optional[int]]]]:
    seen = set()
    for s in raw.simples:
        if s in seen:
            raise ParseError(f"Duplicate simple name {s!r}", witness=[s])
        seen.add(s)

    names = [IDENTITY_NAME] + [s for s in raw.simples if s != IDENTITY_NAME]
    index = {s: i for i, s in enumerate(names)}
    n = len(names)

    def lookup(name: str) -> int:
        if name not in index:
            raise ParseError(f"Unknown simple name {name!r}", witness=[name])
        return index[name]

    lookup(raw.delta)
    for a in raw.atoms or []:
        lookup(a)

    table: List[List[Optional[int]]] = [[None] * n for _ in range(n)]
    for x in range(n):
        table[IDENTITY][x] = x
        table[x][IDENTITY] = x

    assigned = set()
    for a_name, b_name, c_name in raw.product:
        a, b, c = lookup(a_name), lookup(b_name), lookup(c_name)
        if (a, b) in assigned:
            raise ParseError(f"Duplicate product entry for ({a_name}, {b_name})", witness=[a_name, b_name])
        assigned.add((a, b))
        if IDENTITY in (a, b):
            if table[a][b] != c:
                raise ParseError(
                    f"Identity product {a_name}·{b_name} = {c_name} contradicts 1·x = x·1 = x",
                    witness=[a_name, b_name, c_name],
                )
            continue
        table[a][b] = c
    return names, index, table


def _witness(names: Sequence[str], *ids: int) -> List[str]:
    return [names[i] for i in ids]


def _check_cancellation(names, table, violations: List[Violation]) -> None:
    n = len(names)
    for a in range(n):
        seen: Dict[int, int] = {}
        for b in range(n):
            c = table[a][b]
            if c is None:
                continue
            if c in seen:
                violations.append(Violation(
                    kind=ViolationKind.cancellation,
                    witness=_witness(names, a, seen[c], b, c) + [Side.left.value],
                    message=f"{names[a]}·{names[seen[c]]} = {names[a]}·{names[b]} = {names[c]}",
                ))
            else:
                seen[c] = b
    for b in range(n):
        seen = {}
        for a in range(n):
            c = table[a][b]
            if c is None:
                continue
            if c in seen:
                violations.append(Violation(
                    kind=ViolationKind.cancellation,
                    witness=_witness(names, seen[c], a, b, c) + [Side.right.value],
                    message=f"{names[seen[c]]}·{names[b]} = {names[a]}·{names[b]} = {names[c]}",
                ))
            else:
                seen[c] = a


def _check_associativity(names, table, defined_right, defined_left, violations: List[Violation]) -> None:
    bad = set()
    for a in range(1, len(names)):
        for b in defined_right[a]:
            if b == IDENTITY:
                continue
            ab = table[a][b]
            for c in defined_right[ab]:
                if c == IDENTITY:
                    continue
                bc = table[b][c]
                if bc is None or table[a][bc] != table[ab][c]:
                    bad.add((a, b, c))
    for b in range(1, len(names)):
        for c in defined_right[b]:
            if c == IDENTITY:
                continue
            bc = table[b][c]
            for a in defined_left[bc]:
                if a == IDENTITY:
                    continue
                ab = table[a][b]
                if ab is None or table[ab][c] != table[a][bc]:
                    bad.add((a, b, c))
    for a, b, c in sorted(bad):
        violations.append(Violation(
            kind=ViolationKind.associativity,
            witness=_witness(names, a, b, c),
            message=f"({names[a]}·{names[b]})·{names[c]} and {names[a]}·({names[b]}·{names[c]}) disagree",
        ))


def _divisibility(names, table) -> Tuple[dict, dict, List[List[Optional[int]]], List[List[Optional[int]]]]:
    n = len(names)
    down = {Side.left: [0] * n, Side.right: [0] * n}
    up = {Side.left: [0] * n, Side.right: [0] * n}
    lq: List[List[Optional[int]]] = [[None] * n for _ in range(n)]
    rq: List[List[Optional[int]]] = [[None] * n for _ in range(n)]
    for a in range(n):
        for c in range(n):
            b = table[a][c]
            if b is None:
                continue
            down[Side.left][b] |= 1 << a
            up[Side.left][a] |= 1 << b
            down[Side.right][b] |= 1 << c
            up[Side.right][c] |= 1 << b
            if lq[a][b] is None:
                lq[a][b] = c
            if rq[c][b] is None:
                rq[c][b] = a
    return down, up, lq, rq


def _check_partial_order(names, down, violations: List[Violation]) -> None:
    for side in Side:
        for b in range(len(names)):
            for a in _bits(down[side][b]):
                if a < b and (down[side][a] >> b) & 1:
                    violations.append(Violation(
                        kind=ViolationKind.partial_order,
                        witness=_witness(names, a, b) + [side.value],
                        message=f"{names[a]} and {names[b]} {side.value}-divide each other",
                    ))


def _lattice(names, down, up, violations: List[Violation]) -> Tuple[dict, dict]:
    n = len(names)
    meet = {}
    join = {}
    for side in Side:
        m_table = [[IDENTITY] * n for _ in range(n)]
        j_table = [[IDENTITY] * n for _ in range(n)]
        for a in range(n):
            m_table[a][a] = a
            j_table[a][a] = a
            for b in range(a + 1, n):
                x = _top_of(down[side][a] & down[side][b], down[side])
                if x is None:
                    violations.append(Violation(
                        kind=ViolationKind.lattice,
                        witness=_witness(names, a, b) + [side.value, "meet"],
                        message=f"{names[a]} and {names[b]} have no {side.value} gcd",
                    ))
                    x = IDENTITY
                y = _top_of(up[side][a] & up[side][b], up[side])
                if y is None:
                    violations.append(Violation(
                        kind=ViolationKind.lattice,
                        witness=_witness(names, a, b) + [side.value, "join"],
                        message=f"{names[a]} and {names[b]} have no {side.value} lcm among the simples",
                    ))
                    y = IDENTITY
                m_table[a][b] = m_table[b][a] = x
                j_table[a][b] = j_table[b][a] = y
        meet[side] = m_table
        join[side] = j_table
    return meet, join


def _complements(names, table, delta, violations: List[Violation]) -> Tuple[List[int], List[int]]:
    n = len(names)
    rc = [IDENTITY] * n
    lc = [IDENTITY] * n
    for mu in range(n):
        right = [c for c in range(n) if table[mu][c] == delta]
        left = [c for c in range(n) if table[c][mu] == delta]
        for side, found, target in ((Side.right, right, rc), (Side.left, left, lc)):
            if len(found) > 1:
                violations.append(Violation(
                    kind=ViolationKind.complement,
                    witness=_witness(names, mu, *found) + [side.value],
                    message=f"{names[mu]} has {len(found)} {side.value} complements",
                ))
            if found:
                target[mu] = found[0]
    return rc, lc


def _check_delta(names, down, delta, violations: List[Violation]) -> None:
    for side in Side:
        mask = down[side][delta]
        for mu in range(len(names)):
            if not (mask >> mu) & 1:
                violations.append(Violation(
                    kind=ViolationKind.divisor_mismatch,
                    witness=[names[mu], side.value],
                    message=f"{names[mu]} is not a {side.value} divisor of Δ = {names[delta]}",
                ))


def _norms(names, down_left) -> List[int]:
    order = sorted(range(len(names)), key=lambda x: down_left[x].bit_count())
    norms = [0] * len(names)
    for x in order:
        if x == IDENTITY:
            continue
        norms[x] = 1 + max(norms[y] for y in _bits(down_left[x]) if y != x)
    return norms


def _sigma_powers(names, table, lc, violations: List[Violation]) -> List[List[int]]:
    n = len(names)
    sigma = [lc[lc[nu]] for nu in range(n)]
    if sorted(sigma) != list(range(n)):
        violations.append(Violation(kind=ViolationKind.sigma, witness=[], message="σ is not a bijection"))
        return [list(range(n))]
    for a in range(n):
        for b in range(n):
            c = table[a][b]
            if c is not None and table[sigma[a]][sigma[b]] != sigma[c]:
                violations.append(Violation(
                    kind=ViolationKind.sigma,
                    witness=_witness(names, a, b),
                    message=f"σ({names[a]}·{names[b]}) ≠ σ({names[a]})·σ({names[b]})",
                ))

    powers = [list(range(n))]
    current = sigma
    while current != powers[0]:
        powers.append(current)
        current = [sigma[x] for x in current]
    return powers


def check_germ(raw: GermFile) -> Tuple[Optional[Germ], List[Violation]]:
    """Validate raw germ data; returns (germ, []) or (None, every violation found)."""
    if IDENTITY_NAME not in raw.simples:
        return None, [Violation(
            kind=ViolationKind.missing_identity,
            witness=[],
            message='simples must contain the identity "1"',
        )]

    names, index, table = _parse_table(raw)
    n = len(names)
    delta = index[raw.delta]
    violations: List[Violation] = []

    defined_right = tuple(tuple(b for b in range(n) if table[a][b] is not None) for a in range(n))
    defined_left = tuple(tuple(a for a in range(n) if table[a][b] is not None) for b in range(n))

    _check_cancellation(names, table, violations)
    _check_associativity(names, table, defined_right, defined_left, violations)
    down, up, lq, rq = _divisibility(names, table)
    _check_partial_order(names, down, violations)
    _check_delta(names, down, delta, violations)
    meet, join = _lattice(names, down, up, violations)
    rc, lc = _complements(names, table, delta, violations)

    atoms = tuple(x for x in range(1, n) if down[Side.left][x] == (1 | (1 << x)))
    if raw.atoms is not None:
        declared = {index[a] for a in raw.atoms}
        diff = sorted(declared.symmetric_difference(atoms))
        if diff:
            violations.append(Violation(
                kind=ViolationKind.atom_mismatch,
                witness=_witness(names, *diff),
                message="declared atoms differ from the indivisible simples",
            ))

    if violations:
        logger.warning(f"Germ '{raw.name}' has {len(violations)} violation(s)")
        return None, violations

    sigma_powers = _sigma_powers(names, table, lc, violations)
    if violations:
        logger.warning(f"Germ '{raw.name}' has {len(violations)} violation(s)")
        return None, violations

    derived = {
        "defined_right": defined_right,
        "down": down,
        "meet": meet,
        "join": join,
        "lq": lq,
        "rq": rq,
        "rc": rc,
        "lc": lc,
        "sigma_powers": sigma_powers,
        "norms": _norms(names, down[Side.left]),
        "atoms": atoms,
    }
    germ = Germ(raw.name, names, delta, table, derived)
    logger.info(
        f"Validated germ '{germ.name}': {germ.size} simples, {len(atoms)} atoms, "
        f"||Δ|| = {germ.delta_norm}, m = {germ.m}"
    )
    return germ, []


def validate(raw: GermFile) -> Germ:
    """Validate raw germ data, raising GermValidationError with every violation."""
    germ, violations = check_germ(raw)
    if germ is None:
        raise GermValidationError(raw.name, violations)
    return germ


def _rewrite_tables(germ: Germ) -> Tuple[tuple, tuple]:
    n = germ.size
    left_meet = germ._meet[Side.left]
    right_meet = germ._meet[Side.right]
    renorm = []
    right_renorm = []
    for a in range(n):
        row = []
        right_row = []
        for b in range(n):
            c = left_meet[germ._rc[a]][b]
            if c == IDENTITY:
                row.append((a, b))
            else:
                row.append((germ._product[a][c], germ._lq[c][b]))
            d = right_meet[a][germ._lc[b]]
            if d == IDENTITY:
                right_row.append((a, b))
            else:
                right_row.append((germ._rq[d][a], germ._product[d][b]))
        renorm.append(tuple(row))
        right_renorm.append(tuple(right_row))
    return tuple(renorm), tuple(right_renorm)
