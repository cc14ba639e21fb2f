"""Classical Artin germs: the Coxeter group W with length-additive products"""

import logging

from .base import BaseGermBuilder, simple_names
from .coxeter import compose, coxeter_system
from ..germ import Germ
from ...models.germFile import CoxeterSpec, MonoidKind

logger = logging.getLogger(__name__)


class ClassicalGermBuilder(BaseGermBuilder):
    """
    Simples are the elements of W named by their shortlex reduced words;
    u·v is defined iff ℓ(u) + ℓ(v) = ℓ(uv), and Δ is the longest element.
    """

    kind = MonoidKind.classical

    def build(self, spec: CoxeterSpec) -> Germ:
        system = coxeter_system(spec)
        words = system.elements
        length = {w: len(word) for w, word in words.items()}
        top = max(length.values())
        delta = next(w for w, n in length.items() if n == top)

        names = simple_names(system.identity, {w: system.word_name(word) for w, word in words.items()})
        nontrivial = [w for w in words if length[w] > 0]
        products = []
        for u in nontrivial:
            room = top - length[u]
            for v in nontrivial:
                if length[v] > room:
                    continue
                uv = compose(u, v)
                if length[u] + length[v] == length[uv]:
                    products.append((u, v, uv))

        return self.assemble(self.germ_name(spec), names, delta, system.generators, products)


def classical_artin(spec: CoxeterSpec) -> Germ:
    return ClassicalGermBuilder().build(spec)
