"""Witness towers: finite certificates of iterated extensions.

A :class:`Leaf` is a finite coproduct of shifted generators.  A
:class:`Node` ``(left, right, glue)`` with ``glue : realize(right)[-1] ->
realize(left)`` realizes ``cone(glue)``, an extension of ``right`` by
``left``: there is a triangle ``left -> node -> right -> left[1]``.

Degreewise the realized complex of a node is ``right^i (+) left^i`` with
differential ``[[d_right, 0], [glue, d_left]]``, so an entire tower is the
sum of its leaves in right-to-left order with a lower-triangular twist.
This is what makes the rebracketings below exact block constructions.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property, reduce
from math import lcm
from typing import Mapping, Union

from .base import BaseCategory, Morphism
from .complexes import (BoundedComplex, ChainMap, Homotopy, Triangle, _degree_span,
                        block_chain_map, chain_component, component_family, cone,
                        cone_inclusion, direct_sum, find_homotopy, identity_map,
                        is_quasi_iso, shift, shift_map, zero_complex, zero_map)
from .derived import derived_hom
from .errors import LiftFailed, MalformedInput, NoCertificate, OrthogonalityFailed


@dataclass(frozen=True)
class LeafTerm:
    """``multiplicity`` copies of ``generator[shift]``."""

    label: str
    generator: BoundedComplex
    shift: int = 0
    multiplicity: int = 1

    def __post_init__(self):
        if self.multiplicity < 1:
            raise MalformedInput("leaf multiplicity must be at least 1")

    @cached_property
    def realize(self) -> BoundedComplex:
        G = shift(self.generator, self.shift)
        return G if self.multiplicity == 1 else direct_sum(*([G] * self.multiplicity))


@dataclass(frozen=True, eq=False)
class Leaf:
    """A finite coproduct of shifted generators (an empty coproduct realizes 0)."""

    base: BaseCategory
    terms: tuple[LeafTerm, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        for t in self.terms:
            if t.generator.base != self.base:
                raise MalformedInput(f"leaf term {t.label} lives over a different base")

    @classmethod
    def single(cls, label: str, generator: BoundedComplex, shift: int = 0,
               multiplicity: int = 1) -> "Leaf":
        return cls(generator.base, (LeafTerm(label, generator, shift, multiplicity),))

    @cached_property
    def realize(self) -> BoundedComplex:
        if not self.terms:
            return zero_complex(self.base)
        parts = [t.realize for t in self.terms]
        return parts[0] if len(parts) == 1 else direct_sum(*parts)

    @property
    def depth(self) -> int:
        return 1

    @property
    def leaves(self) -> list["Leaf"]:
        return [self]

    @property
    def leaf_terms(self) -> list[LeafTerm]:
        return list(self.terms)


@dataclass(frozen=True, eq=False)
class Node:
    """Extension of ``right`` by ``left`` along ``glue : realize(right)[-1] -> realize(left)``."""

    left: "WitnessTower"
    right: "WitnessTower"
    glue: ChainMap

    def __post_init__(self):
        if self.left.base != self.right.base:
            raise MalformedInput("tower children live over different bases")
        if self.glue.source != shift(self.right.realize, -1):
            raise MalformedInput("glue source must be realize(right)[-1]")
        if self.glue.target != self.left.realize:
            raise MalformedInput("glue target must be realize(left)")

    @property
    def base(self) -> BaseCategory:
        return self.left.base

    @cached_property
    def realize(self) -> BoundedComplex:
        return cone(self.glue)

    @cached_property
    def depth(self) -> int:
        return self.left.depth + self.right.depth

    @property
    def leaves(self) -> list[Leaf]:
        return self.left.leaves + self.right.leaves

    @property
    def leaf_terms(self) -> list[LeafTerm]:
        return self.left.leaf_terms + self.right.leaf_terms

    def triangle(self) -> Triangle:
        """``left -> node -> right -> left[1]`` with third map ``-glue[1]``."""
        L, R, C = self.left.realize, self.right.realize, self.realize
        incl = cone_inclusion(self.glue)
        proj = block_chain_map(C, R, [R, L], [R], {(0, 0): identity_map(R)})
        h = shift_map(self.glue, 1).scale(-1)
        h = ChainMap(R, h.target, h.components, check=False)
        target = cone(incl)
        L1 = shift(L, 1)
        comparison = block_chain_map(R, target, [R], [L1, R, L], {
            (0, 0): {i: -self.glue[i + 1] for i in R.degrees},
            (1, 0): identity_map(R)})
        return Triangle(L, C, R, incl, proj, h, comparison)


WitnessTower = Union[Leaf, Node]


# ---------------------------------------------------------------------------
# inspection


def leaf_multiset(w: WitnessTower) -> Counter:
    """Multiset of ``(label, shift)`` over all leaf terms, counted with multiplicity."""
    c = Counter()
    for t in w.leaf_terms:
        c[(t.label, t.shift)] += t.multiplicity
    return c


def shift_window(w: WitnessTower) -> tuple[int, int] | None:
    shifts = [t.shift for t in w.leaf_terms]
    return (min(shifts), max(shifts)) if shifts else None


def layers(w: WitnessTower) -> list[WitnessTower]:
    """Layer decomposition of a left-associated tower ``((Q0 * Q1) * Q2) ...``.

    Follows the left spine: the result is ``[Q0, Q1, ..., Qn]``.
    """
    if isinstance(w, Leaf):
        return [w]
    return layers(w.left) + [w.right]


def is_left_associated(w: WitnessTower) -> bool:
    return all(isinstance(q, Leaf) for q in layers(w))


# ---------------------------------------------------------------------------
# constructions


def build_extension(left: WitnessTower, right: WitnessTower, glue: ChainMap | None = None) -> Node:
    """Node realizing ``cone(glue)``; ``glue=None`` gives the split extension."""
    if glue is None:
        glue = zero_map(shift(right.realize, -1), left.realize)
    return Node(left, right, glue)


@dataclass(frozen=True, eq=False)
class Rebracketing:
    """A new tower with a verified comparison ``realize(tower) -> original``."""

    tower: WitnessTower
    comparison: ChainMap

    def verify(self) -> bool:
        return is_quasi_iso(self.comparison)


def _glue_family(f: ChainMap, src_parts, tgt_parts, r, c) -> dict[int, Morphism]:
    return component_family(f, src_parts, tgt_parts, r, c)


def octahedral_rebracket(w: WitnessTower) -> Rebracketing:
    """``((X * Y) * Z)`` to ``(X * (Y * Z))``.

    With ``W = cone(g1 : Y[-1] -> X)`` and ``g2 = (g2_Y, g2_X) : Z[-1] -> W``
    the new tower is ``Node(X, Node(Y, Z, g2_Y), (g2_X, g1))``.  Both realize
    the complex with blocks ``(Z, Y, X)`` and the same differential, so the
    comparison is the identity.
    """
    if not (isinstance(w, Node) and isinstance(w.left, Node)):
        raise MalformedInput("octahedral_rebracket needs a tower shaped ((X*Y)*Z)")
    Xt, Yt, Zt = w.left.left, w.left.right, w.right
    X, Y, Z = Xt.realize, Yt.realize, Zt.realize
    g1, g2 = w.left.glue, w.glue
    Z1, Y1 = shift(Z, -1), shift(Y, -1)
    inner_glue = chain_component(g2, [Z1], [Y, X], 0, 0)
    inner = Node(Yt, Zt, inner_glue)
    V1 = shift(inner.realize, -1)
    k = block_chain_map(V1, X, [Z1, Y1], [X], {
        (0, 0): _glue_family(g2, [Z1], [Y, X], 1, 0), (0, 1): g1})
    new = Node(Xt, inner, k)
    comparison = ChainMap(new.realize, w.realize, identity_map(w.realize).components)
    return Rebracketing(new, comparison)


def inverse_octahedral_rebracket(w: WitnessTower) -> Rebracketing:
    """``(X * (Y * Z))`` to ``((X * Y) * Z)``; the inverse of :func:`octahedral_rebracket`."""
    if not (isinstance(w, Node) and isinstance(w.right, Node)):
        raise MalformedInput("inverse_octahedral_rebracket needs a tower shaped (X*(Y*Z))")
    Xt, Yt, Zt = w.left, w.right.left, w.right.right
    X, Y, Z = Xt.realize, Yt.realize, Zt.realize
    g, k = w.right.glue, w.glue
    Z1, Y1 = shift(Z, -1), shift(Y, -1)
    inner_glue = chain_component(k, [Z1, Y1], [X], 0, 1)
    inner = Node(Xt, Yt, inner_glue)
    outer = block_chain_map(Z1, inner.realize, [Z1], [Y, X], {
        (0, 0): g, (1, 0): _glue_family(k, [Z1, Y1], [X], 0, 0)})
    new = Node(inner, Zt, outer)
    comparison = ChainMap(new.realize, w.realize, identity_map(w.realize).components)
    return Rebracketing(new, comparison)


def check_star_orthogonality(a_terms: list[LeafTerm], b_terms: list[LeafTerm], degree: int = 1):
    """Raise :class:`OrthogonalityFailed` unless ``Hom(a, b[degree]) = 0`` for all leaf pairs."""
    for ta in a_terms:
        for tb in b_terms:
            G = derived_hom(shift(ta.generator, ta.shift), shift(tb.generator, tb.shift), degree)
            if not G.is_zero:
                raise OrthogonalityFailed(
                    f"Hom({ta.label}[{ta.shift}], {tb.label}[{tb.shift}][{degree}]) = {G}",
                    witness=(ta, tb, G))


@dataclass(frozen=True, eq=False)
class ExtensionRebracketing(Rebracketing):
    """Also records the null-homotopy of the mixed glue component."""

    homotopy: Homotopy | None = None


def rebracket_extension_of_stars(outer_glue: ChainMap, w1: Node, w2: Node) -> ExtensionRebracketing:
    """Rewrite an extension of ``w2 = A2 * B2`` by ``w1 = A1 * B1`` as ``A * B``.

    ``outer_glue : realize(w2)[-1] -> realize(w1)``.  The block
    ``A2[-1] -> B1`` of the glue is a chain map; under ``A ⊥ B[1]`` it is
    null-homotopic via some ``h``, and correcting the remaining blocks by
    ``h`` gives the tower ``(A1 * A2) * (B1 * B2)``.  The comparison to
    ``cone(outer_glue)`` is the block isomorphism
    ``(b2, b1, a2, a1) -> (b2, a2, b1 - h a2, a1)``.
    """
    for w in (w1, w2):
        if not isinstance(w, Node):
            raise MalformedInput("rebracket_extension_of_stars needs two Node towers")
    a_terms = w1.left.leaf_terms + w2.left.leaf_terms
    b_terms = w1.right.leaf_terms + w2.right.leaf_terms
    check_star_orthogonality(a_terms, b_terms, 1)

    A1, B1, A2, B2 = (t.realize for t in (w1.left, w1.right, w2.left, w2.right))
    g1, g2, phi = w1.glue, w2.glue, outer_glue
    M1, M2 = w1.realize, w2.realize
    if phi.source != shift(M2, -1) or phi.target != M1:
        raise MalformedInput("outer glue must map realize(w2)[-1] -> realize(w1)")
    A2s, B2s, B1s = shift(A2, -1), shift(B2, -1), shift(B1, -1)
    src, tgt = [B2s, A2s], [B1, A1]
    phi_ba = chain_component(phi, src, tgt, 0, 1)
    zero = zero_map(phi_ba.source, phi_ba.target)
    H = find_homotopy(phi_ba, zero)
    if H is None:
        raise LiftFailed("A2[-1] -> B1 block of the glue is not null-homotopic")
    h = H.components  # h^i : A2^{i-1} -> B1^{i-1}

    def comp(r, c):
        return component_family(phi, src, tgt, r, c)

    phi_aa, phi_bb, phi_ab = comp(1, 1), comp(0, 0), comp(1, 0)
    span = _degree_span(A1, A2, B1, B2, shift(A2, -1), shift(B2, -1))
    zero_m = Morphism.zero
    base = w1.base

    def get(fam, i, s, t):
        m = fam.get(i) if isinstance(fam, dict) else fam[i]
        return m if m is not None else zero_m(base, s, t)

    alpha, beta = {}, {}
    for i in span:
        a = get(phi_aa, i, A2.term(i - 1), A1.term(i))
        corr = g1[i] @ get(h, i, A2.term(i - 1), B1.term(i - 1))
        alpha[i] = a - corr
        b = get(phi_bb, i, B2.term(i - 1), B1.term(i))
        corr = get(h, i + 1, A2.term(i), B1.term(i)) @ g2[i]
        beta[i] = b + corr
    a_node = Node(w1.left, w2.left, ChainMap(A2s, A1, alpha))
    b_node = Node(w1.right, w2.right, ChainMap(B2s, B1, beta))
    gamma = block_chain_map(shift(b_node.realize, -1), a_node.realize, [B2s, B1s], [A2, A1], {
        (0, 0): g2, (1, 0): phi_ab, (1, 1): g1})
    new = Node(a_node, b_node, gamma)

    E = cone(phi)
    # new blocks (B2, B1, A2, A1) -> E blocks (B2, A2, B1, A1)
    cmp = block_chain_map(new.realize, E, [B2, B1, A2, A1], [B2, A2, B1, A1], {
        (0, 0): identity_map(B2), (1, 2): identity_map(A2), (2, 1): identity_map(B1),
        (2, 2): {j: -get(h, j + 1, A2.term(j), B1.term(j)) for j in span},
        (3, 3): identity_map(A1)})
    return ExtensionRebracketing(new, cmp, H)


def sum_with_split_triangle(w: Node, extra_a: BoundedComplex, extra_b: BoundedComplex,
                            labels: tuple[str, str] = ("extra_a", "extra_b")) -> Rebracketing:
    """Witness for ``realize(w) (+) extra_a (+) extra_b`` with A-part ``A (+) extra_a``.

    The comparison goes to ``direct_sum(realize(w), extra_a, extra_b)``.
    """
    if not isinstance(w, Node):
        raise MalformedInput("sum_with_split_triangle needs a Node tower")
    base = w.base
    if extra_a.base != base or extra_b.base != base:
        raise MalformedInput("extras live over a different base")
    la = Leaf(base, (LeafTerm(labels[0], extra_a),) if not extra_a.is_zero else ())
    lb = Leaf(base, (LeafTerm(labels[1], extra_b),) if not extra_b.is_zero else ())
    a_node = build_extension(w.left, la)
    b_node = build_extension(w.right, lb)
    A, B = w.left.realize, w.right.realize
    EA, EB = extra_a, extra_b
    glue = block_chain_map(shift(b_node.realize, -1), a_node.realize,
                           [shift(EB, -1), shift(B, -1)], [EA, A], {(1, 1): w.glue})
    new = Node(a_node, b_node, glue)
    S = direct_sum(w.realize, EA, EB)
    cmp = block_chain_map(new.realize, S, [EB, B, EA, A], [B, A, EA, EB], {
        (0, 1): identity_map(B), (1, 3): identity_map(A), (2, 2): identity_map(EA),
        (3, 0): identity_map(EB)})
    return Rebracketing(new, cmp)


# ---------------------------------------------------------------------------
# annihilation


@dataclass(frozen=True, eq=False)
class AnnihilationCertificate:
    """``exponent * id`` on ``object`` is null-homotopic via ``homotopy``."""

    object: BoundedComplex
    exponent: int
    homotopy: Homotopy

    def verify(self) -> bool:
        X = self.object
        h = self.homotopy
        if h.f != identity_map(X).scale(self.exponent) or not h.g.is_zero:
            return False
        if h.f.source != X or h.f.target != X:
            return False
        return h.verify()


def _leaf_homotopy(generator: BoundedComplex, a: int) -> dict[int, Morphism]:
    f = identity_map(generator).scale(a)
    H = find_homotopy(f, zero_map(generator, generator))
    if H is None:
        raise NoCertificate(f"{a} * id is not null-homotopic on a leaf generator")
    return H.components


def annihilation_certificate(w: WitnessTower,
                             leaf_annihilators: Mapping[str, int]) -> AnnihilationCertificate:
    """Null-homotopy of ``N * id`` built by composing leaf null-homotopies blockwise.

    For a node with blocks ``(R, L)``, ``a * id_L ~ 0`` via ``h_L`` and
    ``b * id_R ~ 0`` via ``h_R``, the block homotopy
    ``[[a h_R, 0], [-h_L glue h_R, b h_L]]`` contracts ``(a b) * id``.
    """
    N, comps = _annihilate(w, leaf_annihilators)
    X = w.realize
    f = identity_map(X).scale(N)
    cert = AnnihilationCertificate(X, N, Homotopy(f, zero_map(X, X),
                                                  {i: m for i, m in comps.items() if not m.is_zero}))
    if not cert.verify():
        raise NoCertificate("composed homotopy failed re-verification")
    return cert


def _annihilate(w: WitnessTower, ann: Mapping[str, int]) -> tuple[int, dict[int, Morphism]]:
    base = w.base
    X = w.realize
    if isinstance(w, Leaf):
        if not w.terms:
            return 1, {}
        for t in w.terms:
            if ann.get(t.label) is None:
                raise NoCertificate(f"no annihilator for leaf generator {t.label}")
        N = reduce(lcm, (ann[t.label] for t in w.terms), 1)
        parts, cells = [], {}
        for t in w.terms:
            a = ann[t.label]
            hg = _leaf_homotopy(t.generator, a)
            sign = -1 if t.shift % 2 else 1
            G = shift(t.generator, t.shift)
            h = {i - t.shift: m.scale(sign * (N // a)) for i, m in hg.items()}
            for _ in range(t.multiplicity):
                cells[len(parts)] = h
                parts.append(G)
        comps = {}
        for i in _degree_span(X, shift(X, -1)):
            grid = {(k, k): cells[k][i] for k in cells if i in cells[k]}
            comps[i] = Morphism.block(base, [P.term(i) for P in parts],
                                      [P.term(i - 1) for P in parts], grid)
        return N, comps
    a, hL = _annihilate(w.left, ann)
    b, hR = _annihilate(w.right, ann)
    L, R = w.left.realize, w.right.realize
    g = w.glue

    def part(fam, i, s, t):
        m = fam.get(i)
        return m if m is not None else Morphism.zero(base, s, t)

    comps = {}
    for i in _degree_span(X, shift(X, -1)):
        hr = part(hR, i, R.term(i), R.term(i - 1))
        hl = part(hL, i, L.term(i), L.term(i - 1))
        mixed = -(hl @ g[i] @ hr)
        comps[i] = Morphism.block(base, [R.term(i), L.term(i)], [R.term(i - 1), L.term(i - 1)],
                                  {(0, 0): hr.scale(a), (1, 0): mixed, (1, 1): hl.scale(b)})
    return a * b, comps
