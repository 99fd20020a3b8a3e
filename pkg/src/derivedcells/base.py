"""Hereditary base categories and maps between their projective objects.

Both backends share one model: a ring (Z or GF(p)) together with a finite
acyclic quiver.  The integers are the one-vertex quiver without arrows over
Z; ``kQ`` is a quiver over GF(p).  A projective object is an ordered tuple of
vertices, one entry per indecomposable summand ``P_v``.  ``P_v`` has a basis
of paths starting at ``v``, so every object has an explicit underlying
vector space (free module) at each vertex and maps are per-vertex matrices.

Maps out of a projective are determined by the images of the summand
generators (Yoneda), which gives every Hom space canonical coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from graphlib import CycleError, TopologicalSorter
from typing import Mapping, Sequence

from .linalg import ExactMatrix, Ring, ZZ, GF

Obj = tuple  # tuple[int, ...] of vertices, one per indecomposable summand
Path = tuple  # tuple[int, ...] of arrow indices in traversal order


@dataclass(frozen=True)
class Quiver:
    """Finite acyclic quiver; vertices are ``0..vertex_count-1`` internally."""

    vertex_count: int
    arrows: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.vertex_count < 1:
            raise ValueError("a quiver needs at least one vertex")
        object.__setattr__(self, "arrows", tuple(tuple(a) for a in self.arrows))
        for s, t in self.arrows:
            if not (0 <= s < self.vertex_count and 0 <= t < self.vertex_count):
                raise ValueError(f"arrow {(s, t)} has an endpoint outside the vertex range")
        ts = TopologicalSorter({v: set() for v in range(self.vertex_count)})
        for s, t in self.arrows:
            ts.add(t, s)
        try:
            tuple(ts.static_order())
        except CycleError as exc:
            raise ValueError("quiver has a directed cycle") from exc

    @cached_property
    def paths_from(self) -> dict[int, list[tuple[int, Path]]]:
        """For each vertex ``v``, all ``(end, path)`` with ``path`` starting at ``v``."""
        out_arrows = {v: [] for v in range(self.vertex_count)}
        for a, (s, _t) in enumerate(self.arrows):
            out_arrows[s].append(a)
        result = {}
        for v in range(self.vertex_count):
            found = []
            stack = [(v, ())]
            while stack:
                w, p = stack.pop()
                found.append((w, p))
                for a in reversed(out_arrows[w]):
                    stack.append((self.arrows[a][1], p + (a,)))
            found.sort(key=lambda e: (e[0], len(e[1]), e[1]))
            result[v] = found
        return result

    def paths(self, v: int, w: int) -> list[Path]:
        return [p for end, p in self.paths_from[v] if end == w]


@dataclass(frozen=True)
class BaseCategory:
    ring: Ring
    quiver: Quiver

    def __post_init__(self):
        if not self.ring.is_field and (self.quiver.vertex_count != 1 or self.quiver.arrows):
            raise ValueError("over Z only the trivial quiver is supported (hereditary bases only)")

    @classmethod
    def integers(cls) -> "BaseCategory":
        return cls(ZZ, Quiver(1))

    @classmethod
    def quiver_algebra(cls, p: int, vertex_count: int, arrows: Sequence[tuple[int, int]]):
        """Arrows use 0-based vertex indices."""
        return cls(GF(p), Quiver(vertex_count, tuple(tuple(a) for a in arrows)))

    @property
    def kind(self) -> str:
        return "Z" if not self.ring.is_field else "quiver"

    @property
    def vertices(self) -> range:
        return range(self.quiver.vertex_count)

    def __str__(self):
        if self.kind == "Z":
            return "D(Z)"
        arrows = ", ".join(f"{s + 1}->{t + 1}" for s, t in self.quiver.arrows)
        return f"D(GF({self.ring.p})Q), Q: {self.quiver.vertex_count} vertices [{arrows}]"

    # projective objects ------------------------------------------------

    def free(self, rank: int) -> Obj:
        if self.kind != "Z":
            raise ValueError("free(rank) is for the integer backend")
        return (0,) * rank

    def projective(self, multiplicities: Sequence[int]) -> Obj:
        if len(multiplicities) != self.quiver.vertex_count:
            raise ValueError("multiplicity vector has the wrong length")
        return tuple(v for v, m in enumerate(multiplicities) for _ in range(m))

    def multiplicities(self, obj: Obj) -> tuple[int, ...]:
        return tuple(sum(1 for u in obj if u == v) for v in self.vertices)

    @lru_cache(maxsize=None)
    def basis(self, obj: Obj, w: int) -> tuple[tuple[int, Path], ...]:
        """Basis of the vertex-``w`` space of ``obj``: (summand, path to ``w``)."""
        return tuple((j, p) for j, v in enumerate(obj) for p in self.quiver.paths(v, w))

    @lru_cache(maxsize=None)
    def index(self, obj: Obj, w: int) -> dict:
        return {b: i for i, b in enumerate(self.basis(obj, w))}

    def dim(self, obj: Obj, w: int) -> int:
        return len(self.basis(obj, w))

    def dims(self, obj: Obj) -> tuple[int, ...]:
        return tuple(self.dim(obj, w) for w in self.vertices)

    def path_end(self, v: int, path: Path) -> int:
        return self.quiver.arrows[path[-1]][1] if path else v

    @lru_cache(maxsize=None)
    def path_action(self, obj: Obj, start: int, path: Path) -> ExactMatrix:
        """Right action of ``path`` (from ``start``) on the projective ``obj``."""
        end = self.path_end(start, path)
        src = self.basis(obj, start)
        tgt = self.index(obj, end)
        rows = [[0] * len(src) for _ in range(len(tgt))]
        for c, (j, q) in enumerate(src):
            rows[tgt[(j, q + path)]][c] = 1
        return ExactMatrix.from_rows(self.ring, rows, len(src))

    def hom_dim(self, source: Obj, target: Obj) -> int:
        return sum(self.dim(target, v) for v in source)


@dataclass(frozen=True)
class Morphism:
    """A map of projectives, stored as one matrix per vertex."""

    base: BaseCategory
    source: Obj
    target: Obj
    blocks: tuple[ExactMatrix, ...]

    def __post_init__(self):
        b = self.base
        if len(self.blocks) != b.quiver.vertex_count:
            raise ValueError("one block per vertex required")
        for w, M in zip(b.vertices, self.blocks):
            if (M.rows, M.cols) != (b.dim(self.target, w), b.dim(self.source, w)):
                raise ValueError(f"block at vertex {w} has the wrong shape")

    # constructors -------------------------------------------------------

    @classmethod
    def zero(cls, base: BaseCategory, source: Obj, target: Obj) -> "Morphism":
        return cls(base, source, target, tuple(
            ExactMatrix.zeros(base.ring, base.dim(target, w), base.dim(source, w))
            for w in base.vertices))

    @classmethod
    def identity(cls, base: BaseCategory, obj: Obj) -> "Morphism":
        return cls(base, obj, obj, tuple(
            ExactMatrix.identity(base.ring, base.dim(obj, w)) for w in base.vertices))

    @classmethod
    def from_matrix(cls, base: BaseCategory, M: ExactMatrix) -> "Morphism":
        if base.quiver.vertex_count != 1:
            raise ValueError("from_matrix needs a one-vertex base")
        return cls(base, (0,) * M.cols, (0,) * M.rows, (M,))

    @classmethod
    def from_images(cls, base: BaseCategory, source: Obj, target: Obj,
                    images: Sequence[Sequence[int]]) -> "Morphism":
        """The module map sending generator ``j`` of ``source`` to ``images[j]``."""
        if len(images) != len(source):
            raise ValueError("one image per source summand required")
        cols_at = {w: [] for w in base.vertices}
        for j, v in enumerate(source):
            y = list(images[j])
            if len(y) != base.dim(target, v):
                raise ValueError(f"image of generator {j} has the wrong length")
            for w, p in base.quiver.paths_from[v]:
                cols_at[w].append((base.index(source, w)[(j, p)],
                                   base.path_action(target, v, p).apply(y)))
        blocks = []
        for w in base.vertices:
            cols = [c for _i, c in sorted(cols_at[w], key=lambda e: e[0])]
            blocks.append(ExactMatrix.from_columns(base.ring, cols, base.dim(target, w))
                          if cols else ExactMatrix.zeros(base.ring, base.dim(target, w), 0))
        return cls(base, source, target, tuple(blocks))

    @classmethod
    def from_coordinates(cls, base, source, target, coords: Sequence[int]) -> "Morphism":
        images, pos = [], 0
        for v in source:
            k = base.dim(target, v)
            images.append(coords[pos:pos + k])
            pos += k
        if pos != len(coords):
            raise ValueError("coordinate vector has the wrong length")
        return cls.from_images(base, source, target, images)

    @classmethod
    def block(cls, base: BaseCategory, sources: Sequence[Obj], targets: Sequence[Obj],
              grid: Mapping[tuple[int, int], "Morphism"]) -> "Morphism":
        """Map ``(+) sources -> (+) targets`` with ``grid[(r, c)]: sources[c] -> targets[r]``."""
        blocks = []
        for w in base.vertices:
            g = [[grid[(r, c)].blocks[w] if (r, c) in grid else None
                  for c in range(len(sources))] for r in range(len(targets))]
            blocks.append(ExactMatrix.block(
                base.ring, g, [base.dim(t, w) for t in targets], [base.dim(s, w) for s in sources]))
        return cls(base, sum(sources, ()), sum(targets, ()), tuple(blocks))

    def component(self, source_parts: Sequence[Obj], target_parts: Sequence[Obj],
                  r: int, c: int) -> "Morphism":
        """Block ``source_parts[c] -> target_parts[r]`` of a map between direct sums."""
        b = self.base
        if sum(source_parts, ()) != self.source or sum(target_parts, ()) != self.target:
            raise ValueError("parts do not add up to the source/target")
        blocks = []
        for w, M in zip(b.vertices, self.blocks):
            r0 = sum(b.dim(t, w) for t in target_parts[:r])
            c0 = sum(b.dim(s, w) for s in source_parts[:c])
            blocks.append(M.submatrix(range(r0, r0 + b.dim(target_parts[r], w)),
                                      range(c0, c0 + b.dim(source_parts[c], w))))
        return Morphism(b, source_parts[c], target_parts[r], tuple(blocks))

    # coordinates --------------------------------------------------------

    def images(self) -> list[tuple[int, ...]]:
        b = self.base
        out = []
        for j, v in enumerate(self.source):
            out.append(self.blocks[v].column(b.index(self.source, v)[(j, ())]))
        return out

    def coordinates(self) -> tuple[int, ...]:
        return tuple(x for img in self.images() for x in img)

    def is_module_map(self) -> bool:
        return self == Morphism.from_images(self.base, self.source, self.target, self.images())

    # arithmetic ---------------------------------------------------------

    def __matmul__(self, other: "Morphism") -> "Morphism":
        if other.target != self.source:
            raise ValueError("composition of non-composable maps")
        return Morphism(self.base, other.source, self.target,
                        tuple(a @ b for a, b in zip(self.blocks, other.blocks)))

    def _same_shape(self, other):
        if (self.source, self.target) != (other.source, other.target):
            raise ValueError("maps have different source/target")

    def __add__(self, other):
        self._same_shape(other)
        return Morphism(self.base, self.source, self.target,
                        tuple(a + b for a, b in zip(self.blocks, other.blocks)))

    def __sub__(self, other):
        self._same_shape(other)
        return Morphism(self.base, self.source, self.target,
                        tuple(a - b for a, b in zip(self.blocks, other.blocks)))

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c: int) -> "Morphism":
        return Morphism(self.base, self.source, self.target, tuple(a.scale(c) for a in self.blocks))

    @property
    def is_zero(self) -> bool:
        return all(a.is_zero for a in self.blocks)


# coordinate-level composition operators used by Hom complexes


@lru_cache(maxsize=4096)
def post_composition(psi: Morphism, source: Obj) -> ExactMatrix:
    """Matrix of ``phi -> psi o phi`` on coordinates of ``Hom(source, psi.source)``."""
    b = psi.base
    sizes_in = [b.dim(psi.source, v) for v in source]
    sizes_out = [b.dim(psi.target, v) for v in source]
    grid = [[psi.blocks[v] if r == c else None for c in range(len(source))]
            for r, v in enumerate(source)]
    return ExactMatrix.block(b.ring, grid, sizes_out, sizes_in)


@lru_cache(maxsize=4096)
def pre_composition(chi: Morphism, target: Obj) -> ExactMatrix:
    """Matrix of ``phi -> phi o chi`` on coordinates of ``Hom(chi.target, target)``."""
    b = chi.base
    X, Xp = chi.target, chi.source
    sizes_in = [b.dim(target, v) for v in X]
    sizes_out = [b.dim(target, v) for v in Xp]
    grid = [[None] * len(X) for _ in Xp]
    for jp, vp in enumerate(Xp):
        col = chi.blocks[vp].column(b.index(Xp, vp)[(jp, ())])
        for (k, p), x in zip(b.basis(X, vp), col):
            if not x:
                continue
            term = b.path_action(target, X[k], p).scale(x)
            grid[jp][k] = term if grid[jp][k] is None else grid[jp][k] + term
    return ExactMatrix.block(b.ring, grid, sizes_out, sizes_in)
