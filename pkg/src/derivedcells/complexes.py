"""Bounded cochain complexes of projectives and the triangulated structure on them.

Conventions (fixed once, used everywhere):

* cohomological grading, ``d^i : X^i -> X^{i+1}``;
* ``X[k]^i = X^{i+k}`` with differential ``(-1)^k d``; chain maps shift
  without a sign;
* ``cone(f)^i = X^{i+1} (+) Y^i`` with differential ``[[-d_X, 0], [f, d_Y]]``.

With these choices a cone of ``g : R[-1] -> L`` has terms ``R^i (+) L^i`` and
differential ``[[d_R, 0], [g, d_L]]``, which is what makes the octahedral
rebracketing in :mod:`derivedcells.towers` sign-free.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .base import BaseCategory, Morphism, Obj, post_composition, pre_composition
from .errors import ComplexError
from .linalg import ExactMatrix, FGAbelianGroup, rank, solve, subquotient


@dataclass(frozen=True)
class DimensionVector:
    """Graded dimension data of a quiver-representation homology group."""

    dims: tuple[int, ...]

    @property
    def is_zero(self) -> bool:
        return not any(self.dims)

    def __add__(self, other):
        return DimensionVector(tuple(a + b for a, b in zip(self.dims, other.dims)))

    def __str__(self):
        return "0" if self.is_zero else "dim(" + ",".join(map(str, self.dims)) + ")"


class BoundedComplex:
    """Finite complex of projectives; zero terms and zero differentials are not stored."""

    def __init__(self, base: BaseCategory, terms: Mapping[int, Obj],
                 differentials: Mapping[int, Morphism] | None = None, *, check: bool = True):
        self.base = base
        self._terms = {int(i): tuple(t) for i, t in sorted(terms.items()) if len(t)}
        self._diffs = {}
        for i, d in sorted((differentials or {}).items()):
            if d.source != self.term(i) or d.target != self.term(i + 1):
                raise ComplexError(f"differential in degree {i} has the wrong source/target", i)
            if not d.is_zero:
                self._diffs[int(i)] = d
        if check:
            self.validate()

    def validate(self):
        for i, d in self._diffs.items():
            if not d.is_module_map():
                raise ComplexError(f"differential in degree {i} is not a module map", i)
            nxt = self._diffs.get(i + 1)
            if nxt is not None and not (nxt @ d).is_zero:
                raise ComplexError(f"d o d != 0 starting in degree {i}", i)

    # access -------------------------------------------------------------

    def term(self, i: int) -> Obj:
        return self._terms.get(i, ())

    def d(self, i: int) -> Morphism:
        got = self._diffs.get(i)
        if got is None:
            return Morphism.zero(self.base, self.term(i), self.term(i + 1))
        return got

    @property
    def terms(self) -> dict[int, Obj]:
        return dict(self._terms)

    @property
    def differentials(self) -> dict[int, Morphism]:
        return dict(self._diffs)

    @property
    def degrees(self) -> list[int]:
        return list(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def lo(self) -> int | None:
        return min(self._terms) if self._terms else None

    @property
    def hi(self) -> int | None:
        return max(self._terms) if self._terms else None

    def _key(self):
        return (self.base, tuple(self._terms.items()), tuple(self._diffs.items()))

    def __eq__(self, other):
        return isinstance(other, BoundedComplex) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        ts = ", ".join(f"{i}: {self.base.dims(t)}" for i, t in self._terms.items())
        return f"BoundedComplex({ts})"


class ChainMap:
    def __init__(self, source: BoundedComplex, target: BoundedComplex,
                 components: Mapping[int, Morphism] | None = None, *, check: bool = True):
        if source.base != target.base:
            raise ComplexError("chain map between complexes over different bases")
        self.source, self.target = source, target
        self._comps = {}
        for i, f in sorted((components or {}).items()):
            if f.source != source.term(i) or f.target != target.term(i):
                raise ComplexError(f"component in degree {i} has the wrong source/target", i)
            if not f.is_zero:
                self._comps[int(i)] = f
        if check:
            self.validate()

    def validate(self):
        X, Y = self.source, self.target
        for f in self._comps.values():
            if not f.is_module_map():
                raise ComplexError("component is not a module map")
        degs = set(self._comps) | {i - 1 for i in self._comps}
        for i in sorted(degs):
            if Y.d(i) @ self[i] != self[i + 1] @ X.d(i):
                raise ComplexError(f"chain map does not commute with d in degree {i}", i)

    @property
    def base(self) -> BaseCategory:
        return self.source.base

    def __getitem__(self, i: int) -> Morphism:
        got = self._comps.get(i)
        if got is None:
            return Morphism.zero(self.base, self.source.term(i), self.target.term(i))
        return got

    @property
    def components(self) -> dict[int, Morphism]:
        return dict(self._comps)

    @property
    def is_zero(self) -> bool:
        return not self._comps

    def _key(self):
        return (self.source, self.target, tuple(self._comps.items()))

    def __eq__(self, other):
        return isinstance(other, ChainMap) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def _same_ends(self, other):
        if self.source != other.source or self.target != other.target:
            raise ComplexError("chain maps have different source/target")

    def __add__(self, other):
        self._same_ends(other)
        degs = set(self._comps) | set(other._comps)
        return ChainMap(self.source, self.target, {i: self[i] + other[i] for i in degs}, check=False)

    def __sub__(self, other):
        self._same_ends(other)
        degs = set(self._comps) | set(other._comps)
        return ChainMap(self.source, self.target, {i: self[i] - other[i] for i in degs}, check=False)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c: int) -> "ChainMap":
        return ChainMap(self.source, self.target, {i: f.scale(c) for i, f in self._comps.items()},
                        check=False)

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        if other.target != self.source:
            raise ComplexError("composition of non-composable chain maps")
        degs = set(self._comps) & set(other._comps)
        return ChainMap(other.source, self.target, {i: self[i] @ other[i] for i in degs},
                        check=False)


def identity_map(X: BoundedComplex) -> ChainMap:
    return ChainMap(X, X, {i: Morphism.identity(X.base, t) for i, t in X.terms.items()}, check=False)


def zero_map(X: BoundedComplex, Y: BoundedComplex) -> ChainMap:
    return ChainMap(X, Y, {}, check=False)


def zero_complex(base: BaseCategory) -> BoundedComplex:
    return BoundedComplex(base, {})


# ---------------------------------------------------------------------------
# shifts, sums, cones


def shift(X: BoundedComplex, k: int) -> BoundedComplex:
    """``X[k]``: degree ``i`` holds ``X^{i+k}``, differential multiplied by ``(-1)^k``."""
    if k == 0:
        return X
    sign = -1 if k % 2 else 1
    return BoundedComplex(X.base, {i - k: t for i, t in X.terms.items()},
                          {i - k: d.scale(sign) for i, d in X.differentials.items()}, check=False)


def shift_map(f: ChainMap, k: int) -> ChainMap:
    if k == 0:
        return f
    return ChainMap(shift(f.source, k), shift(f.target, k),
                    {i - k: c for i, c in f.components.items()}, check=False)


def _degree_span(*complexes: BoundedComplex) -> range:
    los = [X.lo for X in complexes if not X.is_zero]
    if not los:
        return range(0)
    his = [X.hi for X in complexes if not X.is_zero]
    return range(min(los), max(his) + 1)


def direct_sum(*Xs: BoundedComplex) -> BoundedComplex:
    if not Xs:
        raise ValueError("direct_sum needs at least one complex")
    base = Xs[0].base
    if any(X.base != base for X in Xs):
        raise ComplexError("direct sum over different bases")
    terms, diffs = {}, {}
    for i in _degree_span(*Xs):
        terms[i] = sum((X.term(i) for X in Xs), ())
        diffs[i] = Morphism.block(base, [X.term(i) for X in Xs], [X.term(i + 1) for X in Xs],
                                  {(r, r): X.d(i) for r, X in enumerate(Xs)})
    return BoundedComplex(base, terms, diffs, check=False)


def direct_sum_maps(*fs: ChainMap) -> ChainMap:
    S = direct_sum(*(f.source for f in fs))
    T = direct_sum(*(f.target for f in fs))
    base = S.base
    comps = {}
    for i in _degree_span(S, T):
        comps[i] = Morphism.block(base, [f.source.term(i) for f in fs],
                                  [f.target.term(i) for f in fs],
                                  {(r, r): f[i] for r, f in enumerate(fs)})
    return ChainMap(S, T, comps, check=False)


def sum_inclusion(Xs: list[BoundedComplex], k: int) -> ChainMap:
    """Inclusion of the ``k``-th summand into ``direct_sum(*Xs)``."""
    S = direct_sum(*Xs)
    comps = {i: Morphism.block(S.base, [Xs[k].term(i)], [X.term(i) for X in Xs],
                               {(k, 0): Morphism.identity(S.base, Xs[k].term(i))})
             for i in Xs[k].degrees}
    return ChainMap(Xs[k], S, comps, check=False)


def sum_projection(Xs: list[BoundedComplex], k: int) -> ChainMap:
    S = direct_sum(*Xs)
    comps = {i: Morphism.block(S.base, [X.term(i) for X in Xs], [Xs[k].term(i)],
                               {(0, k): Morphism.identity(S.base, Xs[k].term(i))})
             for i in Xs[k].degrees}
    return ChainMap(S, Xs[k], comps, check=False)


def cone(f: ChainMap) -> BoundedComplex:
    """Mapping cone, ``cone(f)^i = X^{i+1} (+) Y^i``."""
    X, Y, base = f.source, f.target, f.base
    span = _degree_span(shift(X, 1), Y)
    terms, diffs = {}, {}
    for i in span:
        terms[i] = X.term(i + 1) + Y.term(i)
    for i in span:
        diffs[i] = Morphism.block(
            base, [X.term(i + 1), Y.term(i)], [X.term(i + 2), Y.term(i + 1)],
            {(0, 0): -X.d(i + 1), (1, 0): f[i + 1], (1, 1): Y.d(i)})
    return BoundedComplex(base, terms, diffs, check=False)


def cone_inclusion(f: ChainMap) -> ChainMap:
    X, Y, base = f.source, f.target, f.base
    C = cone(f)
    return ChainMap(Y, C, {i: Morphism.block(base, [Y.term(i)], [X.term(i + 1), Y.term(i)],
                                             {(1, 0): Morphism.identity(base, Y.term(i))})
                           for i in Y.degrees}, check=False)


def cone_projection(f: ChainMap) -> ChainMap:
    X, Y, base = f.source, f.target, f.base
    C = cone(f)
    X1 = shift(X, 1)
    return ChainMap(C, X1, {i: Morphism.block(base, [X.term(i + 1), Y.term(i)], [X.term(i + 1)],
                                              {(0, 0): Morphism.identity(base, X.term(i + 1))})
                            for i in X1.degrees}, check=False)


def block_chain_map(source: BoundedComplex, target: BoundedComplex,
                    source_parts: list[BoundedComplex], target_parts: list[BoundedComplex],
                    grid: Mapping[tuple[int, int], ChainMap | Mapping[int, Morphism]],
                    *, check: bool = True) -> ChainMap:
    """Chain map given blockwise with respect to degreewise decompositions of source and target.

    ``source`` and ``target`` need only agree termwise with the sums of the
    parts; their differentials may be twisted (as in a cone).  ``grid``
    entries map ``source_parts[c] -> target_parts[r]`` degreewise.
    """
    base = source.base
    comps = {}
    for i in _degree_span(source, target):
        cells = {}
        for (r, c), g in grid.items():
            m = g[i] if isinstance(g, ChainMap) else g.get(i)
            if m is not None:
                cells[(r, c)] = m
        comps[i] = Morphism.block(base, [P.term(i) for P in source_parts],
                                  [P.term(i) for P in target_parts], cells)
    return ChainMap(source, target, comps, check=check)


def component_family(f: ChainMap, source_parts: list[BoundedComplex],
                     target_parts: list[BoundedComplex], r: int, c: int) -> dict[int, Morphism]:
    """Degreewise block ``source_parts[c] -> target_parts[r]`` of ``f``."""
    out = {}
    for i in f.components:
        m = f[i].component([P.term(i) for P in source_parts], [P.term(i) for P in target_parts],
                           r, c)
        if not m.is_zero:
            out[i] = m
    return out


def chain_component(f: ChainMap, source_parts: list[BoundedComplex],
                    target_parts: list[BoundedComplex], r: int, c: int) -> ChainMap:
    """The block of ``f`` as a chain map; raises if the block does not commute with d."""
    return ChainMap(source_parts[c], target_parts[r],
                    component_family(f, source_parts, target_parts, r, c))


# ---------------------------------------------------------------------------
# homology


def _matrix(m: Morphism) -> ExactMatrix:
    if len(m.blocks) != 1:
        raise ValueError("single-vertex map expected")
    return m.blocks[0]


def homology(X: BoundedComplex, i: int) -> FGAbelianGroup | DimensionVector:
    """``ker d^i / im d^{i-1}``; an abelian group over Z, a dimension vector over ``kQ``."""
    base = X.base
    if base.kind == "Z":
        orders, _gens = subquotient(_matrix(X.d(i)), _matrix(X.d(i - 1)))
        return FGAbelianGroup.from_orders(orders)
    dims = []
    for w in base.vertices:
        n = base.dim(X.term(i), w)
        dims.append(n - rank(X.d(i).blocks[w]) - rank(X.d(i - 1).blocks[w]))
    return DimensionVector(tuple(dims))


def homology_support(X: BoundedComplex) -> list[int]:
    return [i for i in X.degrees if not homology(X, i).is_zero]


def is_acyclic(X: BoundedComplex) -> bool:
    return not homology_support(X)


def is_quasi_iso(f: ChainMap) -> bool:
    return is_acyclic(cone(f))


# ---------------------------------------------------------------------------
# Hom complexes and homotopies


class HomComplex:
    """``Hom^n(X, Y) = prod_i Hom(X^i, Y^{i+n})`` in Yoneda coordinates.

    The differential is ``D(phi) = d_Y phi - (-1)^n phi d_X``, so degree-n
    cocycles are exactly the chain maps ``X -> Y[n]`` and
    ``D(h) = d h + h d`` in degree -1.
    """

    def __init__(self, X: BoundedComplex, Y: BoundedComplex):
        if X.base != Y.base:
            raise ComplexError("Hom complex between different bases")
        self.X, self.Y, self.base = X, Y, X.base

    def slots(self, n: int) -> list[tuple[int, int]]:
        out = []
        for i in self.X.degrees:
            k = self.base.hom_dim(self.X.term(i), self.Y.term(i + n))
            if k:
                out.append((i, k))
        return out

    def dimension(self, n: int) -> int:
        return sum(k for _i, k in self.slots(n))

    def degree_range(self) -> range:
        if self.X.is_zero or self.Y.is_zero:
            return range(0)
        return range(self.Y.lo - self.X.hi, self.Y.hi - self.X.lo + 1)

    def differential(self, n: int) -> ExactMatrix:
        src, tgt = self.slots(n), self.slots(n + 1)
        tpos = {i: r for r, (i, _k) in enumerate(tgt)}
        grid = [[None] * len(src) for _ in tgt]
        sign = 1 if n % 2 else -1  # -(-1)^n
        for c, (i, _k) in enumerate(src):
            if i in tpos:
                dY = self.Y.d(i + n)
                if not dY.is_zero:
                    grid[tpos[i]][c] = post_composition(dY, self.X.term(i))
            if i - 1 in tpos:
                dX = self.X.d(i - 1)
                if not dX.is_zero:
                    grid[tpos[i - 1]][c] = pre_composition(dX, self.Y.term(i + n)).scale(sign)
        return ExactMatrix.block(self.base.ring, grid, [k for _i, k in tgt], [k for _i, k in src])

    def coordinates(self, n: int, comps: Mapping[int, Morphism] | ChainMap) -> tuple[int, ...]:
        out = []
        for i, _k in self.slots(n):
            m = comps[i] if isinstance(comps, ChainMap) else comps.get(i)
            if m is None:
                out.extend([0] * _k)
            else:
                out.extend(m.coordinates())
        return tuple(out)

    def components(self, n: int, vec) -> dict[int, Morphism]:
        out, pos = {}, 0
        for i, k in self.slots(n):
            out[i] = Morphism.from_coordinates(self.base, self.X.term(i), self.Y.term(i + n),
                                               tuple(vec[pos:pos + k]))
            pos += k
        return out

    def chain_map(self, n: int, vec) -> ChainMap:
        """The chain map ``X -> Y[n]`` with the given degree-``n`` coordinates."""
        return ChainMap(self.X, shift(self.Y, n), self.components(n, vec), check=False)


@dataclass(frozen=True, eq=False)
class Homotopy:
    """``components[i] : X^i -> Y^{i-1}`` with ``d h + h d = f - g``."""

    f: ChainMap
    g: ChainMap
    components: dict

    def __getitem__(self, i: int) -> Morphism:
        got = self.components.get(i)
        if got is None:
            return Morphism.zero(self.f.base, self.f.source.term(i), self.f.target.term(i - 1))
        return got

    def verify(self) -> bool:
        X, Y = self.f.source, self.f.target
        for i in _degree_span(X, Y):
            lhs = Y.d(i - 1) @ self[i] + self[i + 1] @ X.d(i)
            if lhs != self.f[i] - self.g[i]:
                return False
        return True


def find_homotopy(f: ChainMap, g: ChainMap) -> Homotopy | None:
    """A homotopy ``f ~ g`` found by solving ``d h + h d = f - g``, or ``None``."""
    f._same_ends(g)
    H = HomComplex(f.source, f.target)
    x = solve(H.differential(-1), H.coordinates(0, f - g))
    if x is None:
        return None
    return homotopy_from_components(f, g, H.components(-1, x))


def homotopy_from_components(f: ChainMap, g: ChainMap, comps: Mapping[int, Morphism]) -> Homotopy:
    return Homotopy(f, g, {i: m for i, m in comps.items() if not m.is_zero})


# ---------------------------------------------------------------------------
# triangles


@dataclass(frozen=True, eq=False)
class Triangle:
    """``X -f-> Y -g-> Z -h-> X[1]`` with a recorded comparison ``Z -> cone(f)``."""

    X: BoundedComplex
    Y: BoundedComplex
    Z: BoundedComplex
    f: ChainMap
    g: ChainMap
    h: ChainMap
    comparison: ChainMap

    def verify(self) -> bool:
        c = self.comparison
        if c.source != self.Z or c.target != cone(self.f):
            return False
        if not is_quasi_iso(c):
            return False
        if find_homotopy(c @ self.g, cone_inclusion(self.f)) is None:
            return False
        return find_homotopy(cone_projection(self.f) @ c, self.h) is not None


def triangle_of(f: ChainMap) -> Triangle:
    C = cone(f)
    return Triangle(f.source, f.target, C, f, cone_inclusion(f), cone_projection(f),
                    identity_map(C))


def direct_sum_triangles(T1: Triangle, T2: Triangle) -> Triangle:
    f = direct_sum_maps(T1.f, T2.f)
    g = direct_sum_maps(T1.g, T2.g)
    h = direct_sum_maps(T1.h, T2.h)
    to_cones = direct_sum_maps(T1.comparison, T2.comparison)
    C = cone(f)
    # cone(f1) + cone(f2) -> cone(f1 + f2) reorders (X1, Y1, X2, Y2) to (X1, X2, Y1, Y2)
    X1, X2 = shift(T1.X, 1), shift(T2.X, 1)
    parts_src = [X1, T1.Y, X2, T2.Y]
    parts_tgt = [X1, X2, T1.Y, T2.Y]
    perm = block_chain_map(to_cones.target, C, parts_src, parts_tgt,
                           {(0, 0): identity_map(X1), (1, 2): identity_map(X2),
                            (2, 1): identity_map(T1.Y), (3, 3): identity_map(T2.Y)})
    return Triangle(f.source, f.target, g.target, f, g, h, perm @ to_cones)
