"""Module descriptors and their two-term projective resolutions."""
from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Sequence

from .base import BaseCategory, Morphism
from .complexes import BoundedComplex, homology, homology_support, shift
from .errors import MalformedInput
from .linalg import ExactMatrix, FGAbelianGroup, ZZ


@dataclass(frozen=True)
class Presentation:
    """The abelian group ``Z^rows / (column span of matrix)``."""

    matrix: ExactMatrix


@dataclass(frozen=True)
class QuiverRepresentation:
    """Finite-dimensional representation: a space per vertex, a matrix per arrow."""

    base: BaseCategory
    dims: tuple[int, ...]
    maps: tuple[ExactMatrix, ...]

    def __post_init__(self):
        q = self.base.quiver
        if len(self.dims) != q.vertex_count:
            raise MalformedInput("dimension vector has the wrong length")
        if len(self.maps) != len(q.arrows):
            raise MalformedInput("one matrix per arrow required")
        for (s, t), M in zip(q.arrows, self.maps):
            if (M.rows, M.cols) != (self.dims[t], self.dims[s]):
                raise MalformedInput(f"map for arrow {s + 1}->{t + 1} has the wrong shape")
            if M.ring != self.base.ring:
                raise MalformedInput("representation matrix over the wrong ring")


def simple_representation(base: BaseCategory, v: int) -> QuiverRepresentation:
    dims = tuple(int(w == v) for w in base.vertices)
    maps = tuple(ExactMatrix.zeros(base.ring, dims[t], dims[s]) for s, t in base.quiver.arrows)
    return QuiverRepresentation(base, dims, maps)


def projective_resolution(M, base: BaseCategory | None = None) -> BoundedComplex:
    """Length <= 1 complex of projectives, quasi-isomorphic to ``M`` placed in degree 0.

    ``M`` is an :class:`FGAbelianGroup`, a :class:`Presentation` or a
    :class:`QuiverRepresentation`.
    """
    if isinstance(M, QuiverRepresentation):
        return _quiver_resolution(M)
    base = base or BaseCategory.integers()
    if base.kind != "Z":
        raise MalformedInput("abelian group descriptor over a quiver base")
    if isinstance(M, FGAbelianGroup):
        t, f = len(M.torsion), M.free_rank
        rows = [[M.torsion[r] if r == c else 0 for c in range(t)] for r in range(t + f)]
        P = ExactMatrix.from_rows(ZZ, rows, t)
    elif isinstance(M, Presentation):
        P = M.matrix
    else:
        raise MalformedInput(f"cannot resolve {M!r}")
    if P.ring != ZZ:
        raise MalformedInput("presentation matrix must be over Z")
    d = Morphism.from_matrix(base, P)
    return BoundedComplex(base, {-1: d.source, 0: d.target}, {-1: d})


def _quiver_resolution(M: QuiverRepresentation) -> BoundedComplex:
    # 0 -> (+)_{a: v->w} P_w (x) M_v -> (+)_v P_v (x) M_v -> M -> 0
    base = M.base
    arrows = base.quiver.arrows
    top = tuple(v for v in base.vertices for _ in range(M.dims[v]))
    top_index = {}
    for j, v in enumerate(top):
        top_index.setdefault(v, []).append(j)
    rel, images = [], []
    for a, (v, w) in enumerate(arrows):
        for k in range(M.dims[v]):
            rel.append(w)
            img = [0] * base.dim(top, w)
            idx = base.index(top, w)
            img[idx[(top_index[v][k], (a,))]] += 1
            for l in range(M.dims[w]):
                img[idx[(top_index[w][l], ())]] -= M.maps[a][l, k]
            images.append(img)
    rel = tuple(rel)
    d = Morphism.from_images(base, rel, top, images)
    return BoundedComplex(base, {-1: rel, 0: top}, {-1: d})


def indecomposable_projective(base: BaseCategory, v: int, degree: int = 0) -> BoundedComplex:
    return BoundedComplex(base, {degree: (v,)})


def simple_module(base: BaseCategory, v: int) -> BoundedComplex:
    return projective_resolution(simple_representation(base, v))


def cyclic_group(n: int) -> BoundedComplex:
    """Resolution of ``Z/n`` (``n = 0`` gives ``Z``)."""
    return projective_resolution(FGAbelianGroup.from_orders([n]))


def scalar_annihilator(M) -> int | None:
    """Least ``N > 0`` with ``N M = 0``; ``None`` when ``M`` has free rank.

    Accepts an abelian group, a presentation, or a complex over Z (in which
    case all homology groups are taken together).
    """
    if isinstance(M, Presentation):
        M = homology(projective_resolution(M), 0)
    if isinstance(M, BoundedComplex):
        if M.base.kind != "Z":
            raise MalformedInput("scalar annihilators are defined for the integer backend")
        out = 1
        for i in homology_support(M):
            e = homology(M, i).exponent
            if e is None:
                return None
            out = lcm(out, e)
        return out
    if isinstance(M, FGAbelianGroup):
        return M.exponent
    raise MalformedInput(f"cannot compute an annihilator of {M!r}")


def shifted(X: BoundedComplex, k: int) -> BoundedComplex:
    return shift(X, k)


def module_in_degree(M, degree: int, base: BaseCategory | None = None) -> BoundedComplex:
    """``M`` placed in cohomological degree ``degree`` (that is, ``M[-degree]``)."""
    return shift(projective_resolution(M, base), -degree)


def direct_sum_of_groups(groups: Sequence[FGAbelianGroup]) -> FGAbelianGroup:
    out = FGAbelianGroup()
    for g in groups:
        out = out + g
    return out
