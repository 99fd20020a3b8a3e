"""Exact matrices over the integers and over prime fields.

Everything downstream (Hom complexes, homology, homotopy search) reduces to
the Smith normal form computed here.  Entries are Python ints, so there is no
overflow; over ``GF(p)`` they are kept reduced mod ``p``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache, cached_property
from typing import Iterable, Sequence

from sympy import isprime


@dataclass(frozen=True)
class Ring:
    """The integers (``p is None``) or the prime field with ``p`` elements."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not isprime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def is_field(self) -> bool:
        return self.p is not None

    def reduce(self, x: int) -> int:
        return x % self.p if self.p is not None else x

    def inverse(self, x: int) -> int:
        if self.p is None:
            if x in (1, -1):
                return x
            raise ZeroDivisionError(f"{x} is not a unit in Z")
        return pow(x, -1, self.p)

    def is_unit(self, x: int) -> bool:
        if self.p is None:
            return x in (1, -1)
        return x % self.p != 0

    def __str__(self):
        return "Z" if self.p is None else f"GF({self.p})"


ZZ = Ring()


def GF(p: int) -> Ring:
    return Ring(p)


@dataclass(frozen=True)
class ExactMatrix:
    """Immutable ``rows x cols`` matrix; acts on column vectors."""

    ring: Ring
    rows: int
    cols: int
    data: tuple[tuple[int, ...], ...] = field(repr=False)

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimension")
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ValueError(f"data does not have shape {self.rows}x{self.cols}")

    # construction -----------------------------------------------------

    @classmethod
    def from_rows(cls, ring: Ring, rows: Sequence[Sequence[int]], cols: int | None = None):
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("cols must be given for a matrix without rows")
            cols = len(rows[0])
        data = tuple(tuple(ring.reduce(int(x)) for x in r) for r in rows)
        return cls(ring, len(data), cols, data)

    @classmethod
    def zeros(cls, ring: Ring, rows: int, cols: int):
        return cls(ring, rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, ring: Ring, n: int):
        return cls(ring, n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def diagonal(cls, ring: Ring, entries: Sequence[int], rows: int | None = None,
                 cols: int | None = None):
        k = len(entries)
        rows = k if rows is None else rows
        cols = k if cols is None else cols
        out = [[0] * cols for _ in range(rows)]
        for i, e in enumerate(entries):
            out[i][i] = e
        return cls.from_rows(ring, out, cols)

    @classmethod
    def from_columns(cls, ring: Ring, columns: Sequence[Sequence[int]], rows: int):
        cols = len(columns)
        return cls.from_rows(ring, [[columns[j][i] for j in range(cols)] for i in range(rows)], cols)

    @classmethod
    def block(cls, ring: Ring, grid: Sequence[Sequence["ExactMatrix | None"]],
              row_sizes: Sequence[int], col_sizes: Sequence[int]):
        """Assemble from blocks; ``None`` entries are zero blocks."""
        out = []
        for bi, rsz in enumerate(row_sizes):
            band = [[] for _ in range(rsz)]
            for bj, csz in enumerate(col_sizes):
                b = grid[bi][bj]
                if b is None:
                    for r in band:
                        r.extend([0] * csz)
                else:
                    if (b.rows, b.cols) != (rsz, csz):
                        raise ValueError(
                            f"block ({bi},{bj}) has shape {b.rows}x{b.cols}, expected {rsz}x{csz}")
                    for r, src in zip(band, b.data):
                        r.extend(src)
            out.extend(band)
        return cls(ring, sum(row_sizes), sum(col_sizes), tuple(tuple(r) for r in out))

    # access -------------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.data)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.data]

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "ExactMatrix":
        rows, cols = list(rows), list(cols)
        return ExactMatrix(self.ring, len(rows), len(cols),
                           tuple(tuple(self.data[i][j] for j in cols) for i in rows))

    @cached_property
    def is_zero(self) -> bool:
        return all(x == 0 for r in self.data for x in r)

    # arithmetic ---------------------------------------------------------

    def _check_ring(self, other):
        if self.ring != other.ring:
            raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_ring(other)
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        red = self.ring.reduce
        ocols = list(zip(*other.data)) if other.rows else [()] * other.cols
        data = tuple(
            tuple(red(sum(a * b for a, b in zip(r, c) if a and b)) for c in ocols)
            for r in self.data
        )
        return ExactMatrix(self.ring, self.rows, other.cols, data)

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        red = self.ring.reduce
        return tuple(red(sum(a * b for a, b in zip(r, v) if a and b)) for r in self.data)

    def _zip(self, other, op):
        self._check_ring(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        red = self.ring.reduce
        return ExactMatrix(self.ring, self.rows, self.cols, tuple(
            tuple(red(op(a, b)) for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c: int) -> "ExactMatrix":
        red = self.ring.reduce
        return ExactMatrix(self.ring, self.rows, self.cols,
                           tuple(tuple(red(c * x) for x in r) for r in self.data))

    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix(self.ring, self.cols, self.rows,
                           tuple(zip(*self.data)) if self.rows else tuple(() for _ in range(self.cols)))

    def __str__(self):
        return "[" + "; ".join(" ".join(str(x) for x in r) for r in self.data) + "]"


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SNFDecomposition:
    """``A == U @ S @ V`` with ``U``, ``V`` invertible and ``S`` in Smith form.

    ``U_inv`` and ``V_inv`` are carried along because kernels and linear
    solves need them.
    """

    U: ExactMatrix
    S: ExactMatrix
    V: ExactMatrix
    U_inv: ExactMatrix
    V_inv: ExactMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.S[i, i] for i in range(min(self.S.rows, self.S.cols)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def _pivot_key(ring, x):
    return abs(x) if ring.p is None else 0


@lru_cache(maxsize=4096)
def smith_normal_form(A: ExactMatrix) -> SNFDecomposition:
    ring = A.ring
    red = ring.reduce
    m, n = A.rows, A.cols
    S = A.to_lists()
    # L @ A @ R == S throughout; Linv, Rinv are the inverses.
    L = ExactMatrix.identity(ring, m).to_lists()
    Linv = ExactMatrix.identity(ring, m).to_lists()
    R = ExactMatrix.identity(ring, n).to_lists()
    Rinv = ExactMatrix.identity(ring, n).to_lists()

    def swap_rows(i, j):
        if i == j:
            return
        S[i], S[j] = S[j], S[i]
        L[i], L[j] = L[j], L[i]
        for r in Linv:
            r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        if i == j:
            return
        for r in S:
            r[i], r[j] = r[j], r[i]
        for r in R:
            r[i], r[j] = r[j], r[i]
        Rinv[i], Rinv[j] = Rinv[j], Rinv[i]

    def add_row(src, dst, c):  # row dst += c * row src
        if c == 0:
            return
        S[dst] = [red(a + c * b) for a, b in zip(S[dst], S[src])]
        L[dst] = [red(a + c * b) for a, b in zip(L[dst], L[src])]
        for r in Linv:
            r[src] = red(r[src] - c * r[dst])

    def add_col(src, dst, c):  # col dst += c * col src
        if c == 0:
            return
        for r in S:
            r[dst] = red(r[dst] + c * r[src])
        for r in R:
            r[dst] = red(r[dst] + c * r[src])
        Rinv[src] = [red(a - c * b) for a, b in zip(Rinv[src], Rinv[dst])]

    def scale_row(i, u):
        uinv = ring.inverse(u)
        S[i] = [red(u * a) for a in S[i]]
        L[i] = [red(u * a) for a in L[i]]
        for r in Linv:
            r[i] = red(r[i] * uinv)

    def quotient(a, b):
        return a // b if ring.p is None else red(a * ring.inverse(b))

    for t in range(min(m, n)):
        best = None
        for j in range(t, n):
            for i in range(t, m):
                x = S[i][j]
                if x and (best is None or _pivot_key(ring, x) < best[0]):
                    best = (_pivot_key(ring, x), i, j)
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            clean = True
            piv = S[t][t]
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(t, i, -quotient(S[i][t], piv))
                    if S[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(t, j, -quotient(S[t][j], piv))
                    if S[t][j]:
                        clean = False
            if not clean:
                # remainders are smaller than the pivot; move the smallest in
                cands = [(abs(S[i][t]), i, t) for i in range(t + 1, m) if S[i][t]]
                cands += [(abs(S[t][j]), t, j) for j in range(t + 1, n) if S[t][j]]
                _, i, j = min(cands)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            if ring.p is None:
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if S[i][j] % piv), None)
                if bad is not None:
                    add_row(bad[0], t, 1)
                    continue
            break
        piv = S[t][t]
        if ring.p is None:
            if piv < 0:
                scale_row(t, -1)
        elif piv != 1:
            scale_row(t, ring.inverse(piv))

    def freeze(rows, r, c):
        return ExactMatrix(ring, r, c, tuple(tuple(x) for x in rows))

    return SNFDecomposition(
        U=freeze(Linv, m, m), S=freeze(S, m, n), V=freeze(Rinv, n, n),
        U_inv=freeze(L, m, m), V_inv=freeze(R, n, n))


def rank(A: ExactMatrix) -> int:
    return smith_normal_form(A).rank


def kernel_basis(A: ExactMatrix) -> ExactMatrix:
    """Columns form a basis of ``{x : A x = 0}`` (a free basis over Z)."""
    snf = smith_normal_form(A)
    r = snf.rank
    return snf.V_inv.submatrix(range(A.cols), range(r, A.cols))


@dataclass(frozen=True)
class FGAbelianGroup:
    """``Z^free_rank + Z/d1 + ... + Z/dk`` with ``d1 | d2 | ... | dk``, each ``>= 2``."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for d in self.torsion:
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"invariant factors {self.torsion} are not a divisibility chain")

    @classmethod
    def from_orders(cls, orders: Iterable[int]) -> "FGAbelianGroup":
        """Canonical form of ``+ Z/o`` over ``orders`` (``0`` means ``Z``, ``1`` is dropped)."""
        orders = [abs(o) for o in orders]
        free = sum(1 for o in orders if o == 0)
        tors = [o for o in orders if o > 1]
        if not tors:
            return cls(free, ())
        snf = smith_normal_form(ExactMatrix.diagonal(ZZ, tors))
        return cls(free, tuple(d for d in snf.diagonal if d > 1))

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    @property
    def exponent(self) -> int | None:
        if self.free_rank:
            return None
        return self.torsion[-1] if self.torsion else 1

    def __add__(self, other: "FGAbelianGroup") -> "FGAbelianGroup":
        return FGAbelianGroup.from_orders(
            [0] * (self.free_rank + other.free_rank) + list(self.torsion) + list(other.torsion))

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def cokernel_invariants(A: ExactMatrix) -> FGAbelianGroup | int:
    """Isomorphism class of ``target / column span``.

    Over a prime field this is just the dimension.
    """
    snf = smith_normal_form(A)
    diag = snf.diagonal
    r = snf.rank
    if A.ring.is_field:
        return A.rows - r
    return FGAbelianGroup(A.rows - r, tuple(d for d in diag if d > 1))


def solve(A: ExactMatrix, b: Sequence[int]) -> tuple[int, ...] | None:
    """Some ``x`` with ``A x = b`` over the ring of ``A``, or ``None``."""
    if len(b) != A.rows:
        raise ValueError(f"right-hand side has length {len(b)}, matrix has {A.rows} rows")
    ring = A.ring
    snf = smith_normal_form(A)
    c = snf.U_inv.apply([ring.reduce(int(x)) for x in b])
    diag = snf.diagonal
    y = [0] * A.cols
    for j, cj in enumerate(c):
        s = diag[j] if j < len(diag) else 0
        if s == 0:
            if cj != 0:
                return None
            continue
        if ring.p is None:
            if cj % s:
                return None
            y[j] = cj // s
        else:
            y[j] = ring.reduce(cj * ring.inverse(s))
    return snf.V_inv.apply(y)


def subquotient(outgoing: ExactMatrix, incoming: ExactMatrix):
    """``ker(outgoing) / im(incoming)`` for ``outgoing @ incoming == 0``.

    Returns ``(orders, generators)``: one generator vector per cyclic summand,
    with ``orders`` giving its order (``0`` for a free summand; over a field
    every summand is free).  Orders come out as a divisibility chain followed
    by the free summands, so the result is canonical.
    """
    ring = outgoing.ring
    n = outgoing.cols
    if incoming.rows != n:
        raise ValueError("incompatible maps")
    K = kernel_basis(outgoing)
    k = K.cols
    if k == 0:
        return [], []
    # express boundaries in kernel coordinates; K is a saturated basis so this is exact
    rel_cols = []
    for col in incoming.columns():
        c = solve(K, col)
        if c is None:
            raise ValueError("incoming image is not contained in the kernel")
        rel_cols.append(c)
    Rm = ExactMatrix.from_columns(ring, rel_cols, k) if rel_cols else ExactMatrix.zeros(ring, k, 0)
    snf = smith_normal_form(Rm)
    diag = snf.diagonal
    orders, gens = [], []
    for j in range(k):
        s = diag[j] if j < len(diag) else 0
        if s != 0 and ring.is_unit(s):
            continue
        if s != 0 and ring.is_field:
            continue
        orders.append(s)
        gens.append(K.apply(snf.U.column(j)))
    return orders, gens
