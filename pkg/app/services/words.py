"""
Arithmetic in the positive monoid and in the Garside group.

Positive elements are kept in left greedy normal form Δ^d·μ_1⋯μ_k, group
elements in Deligne normal form μ_1⋯μ_k·Δ^n. Both forms are unique, so the
word problem reduces to comparing letters. Moving Δ across a letter uses
Δμ = σ(μ)Δ.
"""

from __future__ import annotations

import dataclasses
import logging
import random
from threading import RLock
from typing import Dict, Iterable, List, Optional, Tuple

from .budget import NodeBudget, make_budget
from .germ import IDENTITY, Germ, SimpleId
from ..utils import GermMismatch, NotADivisor, ParseError, UnknownSimple

logger = logging.getLogger(__name__)

WORD_SEPARATOR = "."
EXPONENT_SEPARATOR = "@"


@dataclasses.dataclass(frozen=True)
class PositiveWord:
    """A Δ-free positive element in left greedy normal form."""
    germ: Germ = dataclasses.field(compare=False, repr=False)
    letters: Tuple[SimpleId, ...] = ()

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def names(self) -> List[str]:
        return [self.germ.names[x] for x in self.letters]

    def __str__(self) -> str:
        return WORD_SEPARATOR.join(self.names())


@dataclasses.dataclass(frozen=True)
class PositiveElement:
    """Δ^deltas · word, the normal form of an arbitrary positive element."""
    word: PositiveWord
    deltas: int = 0

    @property
    def germ(self) -> Germ:
        return self.word.germ

    @property
    def letters(self) -> Tuple[SimpleId, ...]:
        return (self.germ.delta,) * self.deltas + self.word.letters

    def to_group(self) -> "GroupElement":
        return GroupElement(shift(self.word, self.deltas), self.deltas)


@dataclasses.dataclass(frozen=True)
class GroupElement:
    """Deligne normal form prefix·Δ^exp with a Δ-free left greedy prefix."""
    prefix: PositiveWord
    exp: int = 0

    @property
    def germ(self) -> Germ:
        return self.prefix.germ

    @classmethod
    def identity(cls, germ: Germ) -> "GroupElement":
        return cls(PositiveWord(germ, ()), 0)

    @classmethod
    def delta_power(cls, germ: Germ, k: int) -> "GroupElement":
        return cls(PositiveWord(germ, ()), k)

    @classmethod
    def from_letters(cls, germ: Germ, seq: Iterable[SimpleId]) -> "GroupElement":
        """The group element represented by a product of simples."""
        word, deltas = normalize(germ, seq)
        return PositiveElement(word, deltas).to_group()

    def is_identity(self) -> bool:
        return self.exp == 0 and not self.prefix

    def is_positive(self) -> bool:
        return self.exp >= 0

    def as_positive(self) -> PositiveElement:
        """Rewrite p·Δ^n (n ≥ 0) as Δ^n·σ^{-n}(p)."""
        if self.exp < 0:
            raise ValueError(f"{format_element(self)!r} is not a positive element")
        return PositiveElement(shift(self.prefix, -self.exp), self.exp)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return mult(self, other)

    def __pow__(self, k: int) -> "GroupElement":
        return power(self, k)

    def __invert__(self) -> "GroupElement":
        return inverse(self)

    def __str__(self) -> str:
        return format_element(self)


def _check_same(left: Germ, right: Germ) -> None:
    if not left.same_as(right):
        raise GermMismatch(left.name, right.name)


def _check_letters(germ: Germ, seq: Iterable[SimpleId]) -> List[SimpleId]:
    letters = []
    for x in seq:
        if not isinstance(x, int) or not 0 <= x < germ.size:
            raise UnknownSimple(x, germ.name)
        if x != IDENTITY:
            letters.append(x)
    return letters


# ---------------------------------------------------------------------------
# Normal forms
# ---------------------------------------------------------------------------

def normalize(germ: Germ, seq: Iterable[SimpleId]) -> Tuple[PositiveWord, int]:
    """
    Left greedy normal form of a product of simples.

    Adjacent pairs (a, b) are rewritten to (a·c, c\\b) with
    c = meet(a*, b) in bubble passes until a pass changes nothing. Leading Δs
    are then stripped and counted.

    Returns:
        (Δ-free PositiveWord, number of leading Δs)
    """
    letters = _check_letters(germ, seq)
    changed = True
    while changed:
        changed = False
        for i in range(len(letters) - 1):
            a, b = letters[i], letters[i + 1]
            x, y = germ.renorm(a, b)
            if x != a:
                letters[i], letters[i + 1] = x, y
                changed = True
        if changed:
            letters = [x for x in letters if x != IDENTITY]

    deltas = 0
    while deltas < len(letters) and letters[deltas] == germ.delta:
        deltas += 1
    return PositiveWord(germ, tuple(letters[deltas:])), deltas


def positive(germ: Germ, seq: Iterable[SimpleId]) -> PositiveElement:
    word, deltas = normalize(germ, seq)
    return PositiveElement(word, deltas)


def right_normalize(germ: Germ, seq: Iterable[SimpleId]) -> Tuple[SimpleId, ...]:
    """Right greedy normal form (Δs collect at the end) via the mirror rewriting."""
    letters = _check_letters(germ, seq)
    changed = True
    while changed:
        changed = False
        for i in range(len(letters) - 1, 0, -1):
            a, b = letters[i - 1], letters[i]
            x, y = germ.right_renorm(a, b)
            if y != b:
                letters[i - 1], letters[i] = x, y
                changed = True
        if changed:
            letters = [x for x in letters if x != IDENTITY]
    return tuple(letters)


def shift(word: PositiveWord, k: int) -> PositiveWord:
    """σ^k applied letterwise, renormalized (a no-op on a greedy word)."""
    germ = word.germ
    if k % germ.m == 0:
        return word
    shifted, deltas = normalize(germ, (germ.sigma(x, k) for x in word.letters))
    assert deltas == 0, "σ must preserve Δ-freeness"
    return shifted


def lf(u: PositiveElement) -> SimpleId:
    """Left front: Δ if u begins with Δ, else the first letter, 1 for the empty word."""
    if u.deltas > 0:
        return u.germ.delta
    return u.word.letters[0] if u.word.letters else IDENTITY


def rf(u: PositiveElement) -> SimpleId:
    """Right front: last letter of the right greedy form."""
    letters = right_normalize(u.germ, u.letters)
    return letters[-1] if letters else IDENTITY


# ---------------------------------------------------------------------------
# Group arithmetic
# ---------------------------------------------------------------------------

def mult(g: GroupElement, h: GroupElement) -> GroupElement:
    """Deligne normal form of g·h: p·Δ^e·q·Δ^f = p·σ^e(q)·Δ^{e+f}."""
    _check_same(g.germ, h.germ)
    germ = g.germ
    if h.is_identity():
        return g
    if g.is_identity():
        return h
    shifted = (germ.sigma(x, g.exp) for x in h.prefix.letters)
    word, deltas = normalize(germ, (*g.prefix.letters, *shifted))
    return GroupElement(shift(word, deltas), g.exp + h.exp + deltas)


def letter_inverse(germ: Germ, mu: SimpleId) -> GroupElement:
    """μ^{-1} = μ*·Δ^{-1}."""
    complement = germ.right_complement(mu)
    letters = () if complement == IDENTITY else (complement,)
    return GroupElement(PositiveWord(germ, letters), -1)


def inverse(g: GroupElement) -> GroupElement:
    """g^{-1} = Δ^{-exp}·μ_k^{-1}⋯μ_1^{-1}, folding the letter inverses."""
    germ = g.germ
    result = GroupElement.delta_power(germ, -g.exp)
    for mu in reversed(g.prefix.letters):
        result = mult(result, letter_inverse(germ, mu))
    return result


def equals(g: GroupElement, h: GroupElement) -> bool:
    _check_same(g.germ, h.germ)
    return g.exp == h.exp and g.prefix.letters == h.prefix.letters


def power(g: GroupElement, k: int) -> GroupElement:
    """g^k for any integer k, by repeated squaring."""
    if k < 0:
        return power(inverse(g), -k)
    result = GroupElement.identity(g.germ)
    base = g
    while k:
        if k & 1:
            result = mult(result, base)
        k >>= 1
        if k:
            base = mult(base, base)
    return result


def word_length(g: GroupElement) -> int:
    """|g|_D: prefix letters plus |exp|."""
    return len(g.prefix.letters) + abs(g.exp)


def one_delta_check(w: PositiveWord, eta: SimpleId) -> bool:
    """True iff w·η, for w Δ-free and greedy, begins with at most one Δ."""
    _, deltas = normalize(w.germ, (*w.letters, eta))
    return deltas <= 1


# ---------------------------------------------------------------------------
# gcd and norm
# ---------------------------------------------------------------------------

def left_divide(c: SimpleId, u: PositiveElement) -> PositiveElement:
    """c\\u for a simple c ≤_l lf(u)."""
    germ = u.germ
    if c == IDENTITY:
        return u
    letters = u.letters
    if not letters or not germ.left_divides(c, letters[0]):
        raise NotADivisor(germ.names[c], str(u.word) or "1", "left")
    return positive(germ, (germ.left_quotient(c, letters[0]), *letters[1:]))


def left_gcd(u: PositiveElement, v: PositiveElement) -> PositiveElement:
    """Left gcd by peeling the meet of the left fronts until it becomes 1."""
    _check_same(u.germ, v.germ)
    germ = u.germ
    peeled: List[SimpleId] = []
    while True:
        c = germ.meet(lf(u), lf(v))
        if c == IDENTITY:
            break
        peeled.append(c)
        u = left_divide(c, u)
        v = left_divide(c, v)
    return positive(germ, peeled)


class NormOracle:
    """Memoized longest-factorization length ||u|| for positive elements of one germ."""

    def __init__(self, germ: Germ, node_limit: Optional[int] = None):
        self.germ = germ
        self.node_limit = node_limit
        self._memo: Dict[Tuple[SimpleId, ...], int] = {(): 0}
        self._atoms = tuple(germ.atoms())
        self._lock = RLock()

    def norm(self, u: PositiveElement) -> int:
        _check_same(self.germ, u.germ)
        letters = u.letters
        if len(letters) <= 1:
            return self.germ.simple_norm(letters[0]) if letters else 0
        with self._lock:
            budget = make_budget(f"norm:{self.germ.name}", self.node_limit)
            return self._norm(letters, budget)

    def _norm(self, letters: Tuple[SimpleId, ...], budget: NodeBudget) -> int:
        cached = self._memo.get(letters)
        if cached is not None:
            return cached
        if len(letters) == 1:
            value = self.germ.simple_norm(letters[0])
        else:
            budget.charge()
            germ = self.germ
            head, tail = letters[0], letters[1:]
            value = 0
            for a in self._atoms:
                if not germ.left_divides(a, head):
                    continue
                rest = positive(germ, (germ.left_quotient(a, head), *tail)).letters
                value = max(value, 1 + self._norm(rest, budget))
        self._memo[letters] = value
        return value


def norm_oracle(germ: Germ) -> NormOracle:
    """The shared oracle of a germ."""
    return germ.memo("norm_oracle", lambda: NormOracle(germ))


def norm(u: PositiveElement) -> int:
    return norm_oracle(u.germ).norm(u)


# ---------------------------------------------------------------------------
# Text syntax and sampling
# ---------------------------------------------------------------------------

def parse_word(germ: Germ, text: str) -> List[SimpleId]:
    """"s.t.s" → simple ids; the empty string is the empty word."""
    text = text.strip()
    if not text:
        return []
    letters = []
    for name in text.split(WORD_SEPARATOR):
        name = name.strip()
        if not name:
            raise ParseError(f"Empty letter in word {text!r}", witness=[text])
        letters.append(germ.id_of(name))
    return letters


def parse_element(germ: Germ, text: str) -> GroupElement:
    """"s.t@-2" → the element s·t·Δ^{-2} in Deligne normal form."""
    word_text, sep, exp_text = text.strip().rpartition(EXPONENT_SEPARATOR)
    if not sep:
        word_text, exp_text = exp_text, "0"
    try:
        exp = int(exp_text)
    except ValueError:
        raise ParseError(f"Bad Δ-exponent {exp_text!r} in {text!r}", witness=[text]) from None
    element = GroupElement.from_letters(germ, parse_word(germ, word_text))
    return mult(element, GroupElement.delta_power(germ, exp))


def parse_positive(germ: Germ, text: str) -> PositiveElement:
    """A positive element; a non-negative "@k" suffix multiplies by Δ^k on the right."""
    element = parse_element(germ, text)
    if element.exp < 0:
        raise ParseError(f"{text!r} is not a positive element", witness=[text])
    return element.as_positive()


def format_element(g: GroupElement) -> str:
    text = str(g.prefix)
    if g.exp:
        text += f"{EXPONENT_SEPARATOR}{g.exp}"
    return text


def format_positive(u: PositiveElement) -> str:
    return format_element(u.to_group())


def sample_positive(germ: Germ, length: int, rand: random.Random) -> PositiveWord:
    """A random Δ-free greedy word of at most the given length."""
    follows = germ.memo("follows", lambda: [germ.follows(a) for a in range(germ.size)])
    last = germ.delta
    letters = []
    for _ in range(length):
        choices = follows[last]
        if not choices:
            break
        last = rand.choice(choices)
        letters.append(last)
    return PositiveWord(germ, tuple(letters))


def sample_element(germ: Germ, length: int, rand: random.Random, max_exp: int = 2) -> GroupElement:
    return GroupElement(sample_positive(germ, length, rand), rand.randint(-max_exp, max_exp))
