"""Dual Artin germs: the interval [1, δ] of W under reflection length"""

import logging

from .base import BaseGermBuilder, simple_names
from .coxeter import compose, coxeter_system, cycle_notation, inverse
from ..germ import Germ
from ...models.germFile import CoxeterSpec, MonoidKind

logger = logging.getLogger(__name__)


class DualGermBuilder(BaseGermBuilder):
    """
    δ = s_1⋯s_n; the simples are the w with |w|_R + |w^{-1}δ|_R = |δ|_R,
    named in cycle notation. u·v is defined iff |u|_R + |v|_R = |uv|_R and
    uv is again simple. For A_n these are the noncrossing partitions; for
    I2(m) they are 1, the m reflections and δ.
    """

    kind = MonoidKind.dual

    def build(self, spec: CoxeterSpec) -> Germ:
        system = coxeter_system(spec)
        rl = system.reflection_lengths
        delta = system.coxeter_element()
        top = rl[delta]

        simples = [w for w in rl if rl[w] + rl[compose(inverse(w), delta)] == top]
        simple_set = set(simples)
        logger.debug(f"dual {spec.label}: {len(simples)} simples, |δ|_R = {top}")

        names = simple_names(system.identity, {w: cycle_notation(w) for w in simples})
        nontrivial = [w for w in simples if rl[w] > 0]
        products = []
        for u in nontrivial:
            for v in nontrivial:
                if rl[u] + rl[v] > top:
                    continue
                uv = compose(u, v)
                if uv in simple_set and rl[u] + rl[v] == rl[uv]:
                    products.append((u, v, uv))

        atoms = [w for w in simples if rl[w] == 1]
        return self.assemble(self.germ_name(spec), names, delta, atoms, products)


def dual_artin(spec: CoxeterSpec) -> Germ:
    return DualGermBuilder().build(spec)
