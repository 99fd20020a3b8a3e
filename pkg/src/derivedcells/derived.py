"""Derived Hom groups with explicit chain-map representatives."""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

from .complexes import BoundedComplex, ChainMap, HomComplex, homology_support
from .errors import MalformedInput
from .linalg import FGAbelianGroup, subquotient


@dataclass(frozen=True, eq=False)
class HomGroup:
    """``Hom(X, Y[degree])`` in the derived category.

    ``value`` is an :class:`FGAbelianGroup` over Z and a dimension over a
    prime field.  ``generators[k]`` is a chain map ``X -> Y[degree]`` whose
    class has order ``orders[k]`` (``0`` for infinite order).
    """

    degree: int
    value: FGAbelianGroup | int
    generators: tuple[ChainMap, ...]
    orders: tuple[int, ...]
    source: BoundedComplex
    target: BoundedComplex

    @property
    def is_zero(self) -> bool:
        return not self.generators

    def __str__(self):
        return str(self.value)


@lru_cache(maxsize=4096)
def derived_hom(X: BoundedComplex, Y: BoundedComplex, i: int) -> HomGroup:
    """``H^i`` of the Hom complex; exact because complexes consist of projectives."""
    if X.base != Y.base:
        raise MalformedInput("derived_hom between complexes over different bases")
    H = HomComplex(X, Y)
    orders, gens = subquotient(H.differential(i), H.differential(i - 1))
    reps = tuple(H.chain_map(i, g) for g in gens)
    if X.base.ring.is_field:
        value = len(orders)
    else:
        value = FGAbelianGroup.from_orders(orders)
    return HomGroup(i, value, reps, tuple(orders), X, Y)


def hom_window(X: BoundedComplex, Y: BoundedComplex) -> range:
    """Degrees outside which ``derived_hom(X, Y, i)`` vanishes.

    With homology of ``X`` in ``[aX, bX]`` and of ``Y`` in ``[aY, bY]`` the
    window is ``[aY - bX, bY - aX + 1]`` (the ``+1`` is Ext^1 over a
    hereditary base).  Empty when either side is acyclic.
    """
    sx, sy = homology_support(X), homology_support(Y)
    if not sx or not sy:
        return range(0)
    return range(min(sy) - max(sx), max(sy) - min(sx) + 2)


def random_chain_map(X: BoundedComplex, Y: BoundedComplex, rng: random.Random,
                     n: int = 0, coefficient_bound: int = 3,
                     with_boundary: bool = True) -> ChainMap:
    """A random chain map ``X -> Y[n]``: a combination of generators plus a boundary."""
    H = HomComplex(X, Y)
    G = derived_hom(X, Y, n)
    vec = [0] * H.dimension(n)
    for g in G.generators:
        c = rng.randint(-coefficient_bound, coefficient_bound)
        for k, x in enumerate(H.coordinates(n, g)):
            vec[k] += c * x
    if with_boundary and H.dimension(n - 1):
        h = [rng.randint(-1, 1) for _ in range(H.dimension(n - 1))]
        for k, x in enumerate(H.differential(n - 1).apply(h)):
            vec[k] += x
    vec = [X.base.ring.reduce(x) for x in vec]
    return H.chain_map(n, vec)
