"""Base germ builder interface"""

from abc import ABC, abstractmethod
from typing import Dict, Iterable, List, Tuple
import logging

from .coxeter import Permutation
from ..germ import IDENTITY_NAME, Germ, validate
from ...models.germFile import CoxeterSpec, GermFile, MonoidKind

logger = logging.getLogger(__name__)


class BaseGermBuilder(ABC):
    """Base class for all germ builders"""

    kind: MonoidKind

    @abstractmethod
    def build(self, spec: CoxeterSpec) -> Germ:
        """
        Construct the germ of the given Coxeter system

        Args:
            spec: Validated family and rank

        Returns:
            Validated germ

        Raises:
            RankTooLarge: spec beyond the configured limits
        """
        pass

    def germ_name(self, spec: CoxeterSpec) -> str:
        return f"{self.kind.value} {spec.label}"

    def assemble(
        self,
        name: str,
        names: Dict[Permutation, str],
        delta: Permutation,
        atoms: Iterable[Permutation],
        products: Iterable[Tuple[Permutation, Permutation, Permutation]],
    ) -> Germ:
        """Canonical germ file (name-sorted) from permutation data, then validated."""
        triples: List[Tuple[str, str, str]] = sorted(
            (names[a], names[b], names[c]) for a, b, c in products
        )
        raw = GermFile(
            name=name,
            simples=sorted(names.values()),
            delta=names[delta],
            atoms=sorted(names[a] for a in atoms),
            product=triples,
        )
        germ = validate(raw)
        logger.info(f"Built germ '{name}': {germ.size} simples, {len(triples)} products")
        return germ


def simple_names(identity: Permutation, names: Dict[Permutation, str]) -> Dict[Permutation, str]:
    named = dict(names)
    named[identity] = IDENTITY_NAME
    return named
