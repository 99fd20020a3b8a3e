"""Approximation triangles ``E -> F -> D -> E[1]`` by iterated cell attachment.

Stage ``k`` holds a chain map ``phi_k : E_k -> F`` with ``F_k = cone(phi_k)``.
Attaching cells ``C`` along ``psi : C -> F_k`` splits ``psi`` into
``psi_E : C -> E_k[1]`` and ``psi_F : C -> F``; then

* ``E_{k+1}`` is the node ``(E_k, C)`` glued by ``-psi_E[-1]``;
* ``phi_{k+1} = [psi_F, phi_k]`` on the blocks ``(C, E_k)``;
* ``cone(phi_{k+1}) = cone(psi)`` holds on the nose.

So ``E`` is always a left-associated tower ``((Q_0 * Q_1) * Q_2) ...`` and
``D = cone(phi)`` exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from sympy import primefactors

from .complexes import (BoundedComplex, ChainMap, DimensionVector, Triangle, block_chain_map,
                        component_family, cone, cone_projection, homology,
                        homology_support, shift, shift_map, triangle_of, zero_complex, zero_map)
from .derived import derived_hom, hom_window
from .errors import DerivedCellsError, HypothesisFailed, NoCertificate, VanishingPreconditionFailed
from .modules import scalar_annihilator
from .negativity import Generator, GeneratorSystem, check_negativity
from .towers import (AnnihilationCertificate, Leaf, LeafTerm, Node, WitnessTower,
                     annihilation_certificate, layers)

WEIGHT_CONVENTION_NOTE = (
    "Cohomological grading throughout. The weight decomposition L_w -> F -> R_w is the "
    "approximation triangle E -> F -> D; L_w = E and the R_w-side is D, which lies in "
    "the homology-shadow aisle (H^i(D) = 0 for i >= 0). A homological weight convention "
    "would negate all degrees.")


# ---------------------------------------------------------------------------
# aisle predicate


@dataclass(frozen=True)
class AisleVerdict:
    accepted: bool
    bound: int
    nonzero_degrees: tuple[int, ...]
    unsupported_degrees: tuple[int, ...]
    homology: tuple[tuple[int, str], ...]


@dataclass(frozen=True, eq=False)
class AislePredicate:
    """Homology shadow of the aisle generated by the shifted generators.

    ``verdict(D, bound)`` accepts iff ``H^i(D) = 0`` for ``i > bound`` and
    every nonzero homology group is supported on the generators.  The
    default ``bound = -1`` is the ``C^{t<=-1}`` test used for ``D``; ``bound
    = 0`` is the ``C^{t<=0}`` test used for the input ``F``.

    Support over Z: if some generator has free homology everything is
    supported; otherwise a group is supported iff it is torsion with every
    prime dividing some generator's torsion.  Over a quiver every
    representation is supported.
    """

    system: GeneratorSystem

    def _support(self):
        if self.system.base.kind != "Z":
            return None
        primes = set()
        for g in self.system.generators:
            for i in homology_support(g.complex):
                H = homology(g.complex, i)
                if H.free_rank:
                    return None
                for d in H.torsion:
                    primes.update(primefactors(d))
        return primes

    def supported(self, H) -> bool:
        primes = self._support()
        if primes is None or isinstance(H, DimensionVector):
            return True
        if H.free_rank:
            return False
        return all(set(primefactors(d)) <= primes for d in H.torsion)

    def verdict(self, D: BoundedComplex, bound: int = -1) -> AisleVerdict:
        nonzero, unsupported, hom = [], [], []
        for i in homology_support(D):
            H = homology(D, i)
            hom.append((i, str(H)))
            if i > bound:
                nonzero.append(i)
            if not self.supported(H):
                unsupported.append(i)
        return AisleVerdict(not nonzero and not unsupported, bound, tuple(nonzero),
                            tuple(unsupported), tuple(hom))

    def accepts(self, D: BoundedComplex, bound: int = -1) -> bool:
        return self.verdict(D, bound).accepted


# ---------------------------------------------------------------------------
# one stage


@dataclass(frozen=True, eq=False)
class CellRecord:
    label: str
    hom: str
    orders: tuple[int, ...]
    count: int


@dataclass(frozen=True, eq=False)
class StageRecord:
    index: int
    part: int | None
    cells: tuple[CellRecord, ...]
    homology_after: tuple[tuple[int, str], ...]

    @property
    def attached(self) -> int:
        return sum(c.count for c in self.cells)


@dataclass(frozen=True, eq=False)
class Stage:
    """Result of one attachment: ``E1 -> F`` with cone ``F1``."""

    cells: Leaf
    psi: ChainMap
    E1: BoundedComplex
    phi1: ChainMap
    F1: BoundedComplex
    record: StageRecord


def _positive_ext_vanishes(P: BoundedComplex, F: BoundedComplex) -> int | None:
    """First degree ``i >= 1`` with ``Hom(P, F[i]) != 0``, or ``None``."""
    for i in hom_window(P, F):
        if i >= 1 and not derived_hom(P, F, i).is_zero:
            return i
    return None


def _attach(F_k: BoundedComplex, cells: Sequence[Generator], index: int,
            part: int | None) -> tuple[Leaf, ChainMap, list[CellRecord]]:
    """One copy of each cell per Hom generator, with the tautological map ``psi``."""
    base = F_k.base
    terms, maps, records = [], [], []
    for g in cells:
        H = derived_hom(g.complex, F_k, 0)
        records.append(CellRecord(g.label, str(H.value), H.orders, len(H.generators)))
        if H.generators:
            terms.append(LeafTerm(g.label, g.complex, 0, len(H.generators)))
            maps.extend(H.generators)
    leaf = Leaf(base, tuple(terms))
    C = leaf.realize
    if not maps:
        return leaf, zero_map(C, F_k), records
    parts = [m.source for m in maps]
    psi = block_chain_map(C, F_k, parts, [F_k], {(0, c): m for c, m in enumerate(maps)})
    return leaf, psi, records


def _check_entry(F: BoundedComplex, S: GeneratorSystem):
    """Weak negativity of ``S`` and ``F`` in the homology shadow of ``C^{t<=0}``."""
    report = check_negativity(S)
    if not report.weakly_negative:
        o = next(o for o in report.offending_pairs if "weak" in o.reasons)
        raise HypothesisFailed(
            f"generators are not weakly negative: Hom({o.source}, {o.target}[{o.degree}]) = "
            f"{o.value}")
    entry = AislePredicate(S).verdict(F, bound=0)
    if not entry.accepted:
        deg = (entry.nonzero_degrees or entry.unsupported_degrees)[0]
        raise VanishingPreconditionFailed(
            f"F is not in the aisle generated by the generators (degree {deg})", degree=deg)
    return report


def cell_attachment_step(F: BoundedComplex, cells: Sequence[Generator | tuple]) -> Stage:
    """Attach one copy of each cell per generator of ``Hom(P, F)``.

    Returns ``E1`` (the coproduct of cells), ``phi1 : E1 -> F`` and
    ``F1 = cone(phi1)``.  The cells must be weakly negative and ``F`` must
    pass the homology aisle test at bound 0.  Whenever ``Hom(P, F[i]) = 0`` for all ``i >= 1``
    on entry, the same vanishing for ``F1`` is asserted (given weak
    negativity of the cells).
    """
    cells = [c if isinstance(c, Generator) else Generator(*c) for c in cells]
    _check_entry(F, GeneratorSystem.single_part(F.base, cells))
    held = [g for g in cells if _positive_ext_vanishes(g.complex, F) is None]
    leaf, psi, records = _attach(F, cells, 0, None)
    F1 = cone(psi)
    for g in held:
        i = _positive_ext_vanishes(g.complex, F1)
        if i is not None:
            raise VanishingPreconditionFailed(
                f"Hom({g.label}, F1[{i}]) != 0 after attachment; cells are not weakly negative",
                degree=i)
    rec = StageRecord(0, None, tuple(records), _homology_summary(F1))
    return Stage(leaf, psi, leaf.realize, psi, F1, rec)


def _homology_summary(X: BoundedComplex) -> tuple[tuple[int, str], ...]:
    return tuple((i, str(homology(X, i))) for i in homology_support(X))


# ---------------------------------------------------------------------------
# the full construction


@dataclass(frozen=True, eq=False)
class ApproximationCertificate:
    """``E -> F -> D -> E[1]`` with ``D = cone(phi)`` exactly.

    ``status`` is ``"SUCCESS"`` or ``"PARTIAL"``; a partial certificate can be
    passed back to :func:`approximate` as ``resume``.
    """

    status: str
    mode: str
    system: GeneratorSystem
    F: BoundedComplex
    E_witness: WitnessTower | None
    phi: ChainMap
    D: BoundedComplex
    depth: int
    stage_log: tuple[StageRecord, ...]
    aisle_evidence: AisleVerdict | None
    annihilation: AnnihilationCertificate | None = None
    next_stage: int = 0

    @property
    def E(self) -> BoundedComplex:
        return self.phi.source

    def triangle(self) -> Triangle:
        return triangle_of(self.phi)

    @property
    def leaf_shifts(self) -> set[int]:
        if self.E_witness is None:
            return set()
        return {t.shift for t in self.E_witness.leaf_terms}

    def replay(self) -> list[str]:
        """Re-check every stored claim; returns the list of failures (empty if all replay)."""
        bad = []
        try:
            self.phi.validate()
        except DerivedCellsError as exc:
            bad.append(f"phi is not a chain map: {exc}")
        if self.phi.target != self.F:
            bad.append("phi does not land in F")
        if cone(self.phi) != self.D:
            bad.append("D != cone(phi)")
        if self.E_witness is None:
            if not self.E.is_zero:
                bad.append("missing witness for nonzero E")
        else:
            if self.E_witness.realize != self.E:
                bad.append("E_witness does not realize E")
            if self.E_witness.depth != self.depth:
                bad.append("depth disagrees with the witness")
            attached = [s.attached for s in self.stage_log if s.attached]
            in_layers = [sum(t.multiplicity for t in q.leaf_terms)
                         for q in layers(self.E_witness)]
            if attached != in_layers:
                bad.append("stage log disagrees with the layers of the witness")
        if self.mode == "partitioned" and self.depth > len(self.system.parts):
            bad.append("partitioned depth exceeds the number of parts")
        if self.status == "SUCCESS":
            v = AislePredicate(self.system).verdict(self.D)
            if not v.accepted:
                bad.append(f"D fails the aisle predicate in degrees {v.nonzero_degrees}")
            if self.aisle_evidence is None or v != self.aisle_evidence:
                bad.append("recorded aisle evidence does not replay")
        if self.annihilation is not None:
            if self.annihilation.object != self.E or not self.annihilation.verify():
                bad.append("annihilation certificate does not replay")
        return bad


def _initial(F: BoundedComplex) -> tuple[WitnessTower | None, ChainMap]:
    return None, zero_map(zero_complex(F.base), F)


def _step(E_w: WitnessTower | None, phi: ChainMap, cells: Sequence[Generator], index: int,
          part: int | None) -> tuple[WitnessTower | None, ChainMap, StageRecord]:
    F = phi.target
    F_k = cone(phi)
    leaf, psi, records = _attach(F_k, cells, index, part)
    if not leaf.terms:
        return E_w, phi, StageRecord(index, part, tuple(records), _homology_summary(F_k))
    C = leaf.realize
    E = phi.source
    E1 = shift(E, 1)
    psi_E = cone_projection(phi) @ psi  # C -> E[1]
    psi_F = component_family(psi, [C], [E1, F], 1, 0)  # C^i -> F^i
    if E_w is None:
        new_w = leaf
        new_phi = ChainMap(C, F, psi_F)
    else:
        glue = shift_map(psi_E, -1).scale(-1)
        glue = ChainMap(shift(C, -1), E, glue.components)
        new_w = Node(E_w, leaf, glue)
        new_phi = block_chain_map(new_w.realize, F, [C, E], [F],
                                  {(0, 0): psi_F, (0, 1): phi})
    if cone(new_phi) != cone(psi):
        raise DerivedCellsError("internal: cone(phi_{k+1}) != cone(psi)")
    return new_w, new_phi, StageRecord(index, part, tuple(records),
                                       _homology_summary(cone(new_phi)))


def _hom_zero_degree_vanishes(gens: Sequence[Generator], X: BoundedComplex) -> bool:
    return all(derived_hom(g.complex, X, 0).is_zero for g in gens)


def approximate(F: BoundedComplex, S: GeneratorSystem, max_depth: int | None = None, *,
                mode: str = "auto", resume: ApproximationCertificate | None = None,
                with_annihilation: bool = True) -> ApproximationCertificate:
    """Build ``E -> F -> D`` with ``E`` a tower over the generators and ``D`` in the aisle.

    ``mode`` is ``"partitioned"`` (stage ``k`` attaches only part ``P_k``,
    exactly ``n+1`` stages; requires ``partition_ok``), ``"weak"`` (every
    stage attaches all generators until ``Hom(P, F_k) = 0``) or ``"auto"``
    (partitioned when the part order allows it).

    Raises :class:`HypothesisFailed` if ``S`` is not weakly negative and
    :class:`VanishingPreconditionFailed` if ``F`` is not in the homology
    shadow of ``C^{t<=0}``.  Returns a ``PARTIAL`` certificate when
    ``max_depth`` is reached first.
    """
    if F.base != S.base:
        raise HypothesisFailed("F and the generators live over different bases")
    report = _check_entry(F, S)
    aisle = AislePredicate(S)
    if mode == "auto":
        mode = "partitioned" if report.partition_ok else "weak"
    if mode == "partitioned" and not report.partition_ok:
        raise HypothesisFailed("partitioned mode needs Hom(P_i, P_j[1]) = 0 for i <= j")
    if mode not in ("partitioned", "weak"):
        raise ValueError(f"unknown mode {mode!r}")
    gens = S.generators
    n_parts = len(S.parts)
    if max_depth is None:
        max_depth = n_parts if mode == "partitioned" else 64

    if resume is not None:
        if resume.F != F or resume.mode != mode:
            raise ValueError("resume state belongs to a different problem")
        E_w, phi, log, k = resume.E_witness, resume.phi, list(resume.stage_log), resume.next_stage
    else:
        (E_w, phi), log, k = _initial(F), [], 0
    held = [g for g in gens if _positive_ext_vanishes(g.complex, F) is None]

    def depth_of(w):
        return 0 if w is None else w.depth

    def partial():
        return ApproximationCertificate("PARTIAL", mode, S, F, E_w, phi, cone(phi), depth_of(E_w),
                                        tuple(log), None, None, k)

    while True:
        F_k = cone(phi)
        if mode == "partitioned":
            if k >= n_parts:
                break
            cells, part = S.parts[k], k
        else:
            if _hom_zero_degree_vanishes(gens, F_k):
                break
            cells, part = gens, None
        if depth_of(E_w) >= max_depth and not _hom_zero_degree_vanishes(cells, F_k):
            return partial()
        E_w, phi, rec = _step(E_w, phi, cells, k, part)
        log.append(rec)
        F_k = cone(phi)
        for g in held:
            i = _positive_ext_vanishes(g.complex, F_k)
            if i is not None:
                raise DerivedCellsError(f"internal: Hom({g.label}, F_k[{i}]) != 0 after stage {k}")
        if mode == "partitioned":
            done = [g for part_ in S.parts[:k + 1] for g in part_]
            if not _hom_zero_degree_vanishes(done, F_k):
                raise DerivedCellsError(f"internal: Hom(P_j, F_k) != 0 after stage {k}")
        k += 1

    D = cone(phi)
    verdict = aisle.verdict(D)
    if not verdict.accepted:
        raise DerivedCellsError(f"internal: D fails the aisle predicate: {verdict}")
    ann = None
    if with_annihilation and E_w is not None and S.base.kind == "Z":
        ann = _try_annihilation(E_w, S)
    return ApproximationCertificate("SUCCESS", mode, S, F, E_w, phi, D, depth_of(E_w),
                                    tuple(log), verdict, ann, k)


def _try_annihilation(w: WitnessTower, S: GeneratorSystem) -> AnnihilationCertificate | None:
    ann = {g.label: scalar_annihilator(g.complex) for g in S.generators}
    try:
        return annihilation_certificate(w, ann)
    except NoCertificate:
        return None


# ---------------------------------------------------------------------------
# weak weight decompositions


@dataclass(frozen=True, eq=False)
class WeightDecomposition:
    """The approximation triangle read as ``L_w -> F -> R_w``."""

    certificate: ApproximationCertificate
    convention_note: str = WEIGHT_CONVENTION_NOTE

    @property
    def status(self) -> str:
        return self.certificate.status

    @property
    def L_w(self) -> BoundedComplex:
        return self.certificate.E

    @property
    def R_w(self) -> BoundedComplex:
        return self.certificate.D

    @property
    def F(self) -> BoundedComplex:
        return self.certificate.F

    @property
    def depth(self) -> int:
        return self.certificate.depth


def weight_decomposition(F: BoundedComplex, S: GeneratorSystem, max_depth: int | None = None,
                         **kwargs) -> WeightDecomposition:
    return WeightDecomposition(approximate(F, S, max_depth, **kwargs))


def stage_layers(cert: ApproximationCertificate) -> list[WitnessTower]:
    return [] if cert.E_witness is None else layers(cert.E_witness)
