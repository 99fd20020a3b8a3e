"""Seeded random witness towers for the property suites."""
from __future__ import annotations

import random
from typing import Sequence

from .complexes import BoundedComplex, shift
from .derived import random_chain_map
from .towers import Leaf, Node, WitnessTower


def random_leaf(generators: Sequence[tuple[str, BoundedComplex]], rng: random.Random,
                shifts: tuple[int, int] = (0, 0), max_multiplicity: int = 1) -> Leaf:
    label, G = rng.choice(list(generators))
    return Leaf.single(label, G, rng.randint(*shifts), rng.randint(1, max_multiplicity))


def random_glue(right: WitnessTower, left: WitnessTower, rng: random.Random):
    """A random chain map ``realize(right)[-1] -> realize(left)``."""
    return random_chain_map(shift(right.realize, -1), left.realize, rng)


def random_tower(generators: Sequence[tuple[str, BoundedComplex]], depth: int,
                 rng: random.Random, *, shifts: tuple[int, int] = (0, 0),
                 max_multiplicity: int = 1, shape: str = "random") -> WitnessTower:
    """A tower of the given depth with random leaves and random glue.

    ``shape`` is ``"random"`` (random binary splits) or ``"left"``
    (left-associated, ``((Q0 * Q1) * Q2) ...``).
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if depth == 1:
        return random_leaf(generators, rng, shifts, max_multiplicity)
    if shape == "left":
        k = depth - 1
    elif shape == "random":
        k = rng.randint(1, depth - 1)
    else:
        raise ValueError(f"unknown shape {shape!r}")
    left = random_tower(generators, k, rng, shifts=shifts,
                        max_multiplicity=max_multiplicity, shape=shape)
    right = random_tower(generators, depth - k, rng, shifts=shifts,
                         max_multiplicity=max_multiplicity, shape=shape)
    return Node(left, right, random_glue(right, left, rng))


def random_left_nested(generators: Sequence[tuple[str, BoundedComplex]], rng: random.Random,
                       *, shifts: tuple[int, int] = (0, 0)) -> Node:
    """A depth-3 tower shaped ``((X * Y) * Z)``."""
    X, Y, Z = (random_leaf(generators, rng, shifts) for _ in range(3))
    inner = Node(X, Y, random_glue(Y, X, rng))
    return Node(inner, Z, random_glue(Z, inner, rng))
