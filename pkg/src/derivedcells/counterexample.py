"""Depth lower bounds for approximating ``Z/p^(A+1)`` by ``Z/p``-cells.

Every tower of depth ``<= A`` over ``Z/p[s]`` leaves is annihilated by
``p^A`` (by composing leaf null-homotopies), while any approximation triangle
``E -> F -> D`` with ``H^0(D) = 0`` makes ``H^0(E) -> H^0(F)`` surjective.
Since ``p^A`` does not kill ``Z/p^(A+1)``, no such ``E`` exists.  The matching
upper bound is an explicit depth ``A + 1`` approximation.
"""
from __future__ import annotations

from dataclasses import dataclass

from sympy import isprime

from .approximation import ApproximationCertificate, approximate
from .complexes import (BoundedComplex, ChainMap, find_homotopy, homology, identity_map, shift,
                        shift_map, zero_map)
from .derived import derived_hom
from .errors import MalformedInput
from .modules import cyclic_group
from .negativity import Generator, GeneratorSystem
from .towers import (AnnihilationCertificate, Leaf, WitnessTower, annihilation_certificate,
                     build_extension)

INFINITE_SUM_NOTE = (
    "The variant with F the direct sum of Z/p^m over all m needs an infinite coproduct "
    "and is not representable here; each F = Z/p^(A+1) is treated separately.")


@dataclass(frozen=True, eq=False)
class LeafAnnihilation:
    shift: int
    certificate: AnnihilationCertificate


@dataclass(frozen=True, eq=False)
class ObstructionCertificate:
    p: int
    A: int
    F: BoundedComplex
    annihilation_bound: int
    leaf_certificates: tuple[LeafAnnihilation, ...]
    composition_rule: str
    sample_witness: WitnessTower
    sample_tower: AnnihilationCertificate
    H0_F: str
    H0_F_exponent: int
    bound_kills_F: bool
    surjection_argument: str
    verdict: str
    note: str = INFINITE_SUM_NOTE

    def replay(self) -> list[str]:
        bad = []
        if self.F != cyclic_group(self.p ** (self.A + 1)):
            bad.append("F is not the standard presentation of Z/p^(A+1)")
        if self.annihilation_bound != self.p ** self.A:
            bad.append("annihilation bound is not p^A")
        shifts = sorted(c.shift for c in self.leaf_certificates)
        if shifts != list(range(-self.A, self.A + 1)):
            bad.append("leaf certificates do not cover shifts -A..A")
        for c in self.leaf_certificates:
            if c.certificate.exponent != self.p or not c.certificate.verify():
                bad.append(f"leaf certificate for shift {c.shift} does not replay")
            if c.certificate.object != shift(cyclic_group(self.p), c.shift):
                bad.append(f"leaf certificate for shift {c.shift} has the wrong object")
        if not self.sample_tower.verify() or self.sample_tower.exponent != self.p ** self.A:
            bad.append("sample tower certificate does not replay")
        if self.sample_tower.object != self.sample_witness.realize:
            bad.append("sample certificate is not about the sample tower")
        if self.sample_witness.depth != self.A:
            bad.append("sample tower does not have depth A")
        H0 = homology(self.F, 0)
        if str(H0) != self.H0_F or H0.exponent != self.H0_F_exponent:
            bad.append("H^0(F) does not replay")
        kills = _bound_kills(self.F, self.annihilation_bound)
        if kills != self.bound_kills_F or kills:
            bad.append("p^A unexpectedly annihilates F")
        if self.verdict != "CONTRADICTION":
            bad.append("verdict is not CONTRADICTION")
        return bad


def _bound_kills(F: BoundedComplex, N: int) -> bool:
    return find_homotopy(identity_map(F).scale(N), zero_map(F, F)) is not None


def _check(p: int, A: int):
    if not isprime(p):
        raise MalformedInput(f"{p} is not prime")
    if A < 1:
        raise MalformedInput("A must be a positive integer")


def power_tower(p: int, depth: int) -> WitnessTower:
    """Left-associated tower of ``depth`` copies of ``Z/p`` realizing ``Z/p^depth``."""
    G = cyclic_group(p)
    leaf = Leaf.single(f"Z/{p}", G)
    w = leaf
    for _ in range(depth - 1):
        ext = derived_hom(G, w.realize, 1)
        e = next(g for g, o in zip(ext.generators, ext.orders) if o)
        glue = ChainMap(shift(G, -1), w.realize, shift_map(e, -1).components)
        w = build_extension(w, leaf, glue)
    return w


def obstruct(p: int, A: int) -> ObstructionCertificate:
    """Certify that ``Z/p^(A+1)`` has no approximation with ``E`` of depth ``<= A``."""
    _check(p, A)
    label = f"Z/{p}"
    G = cyclic_group(p)
    leaves = tuple(
        LeafAnnihilation(s, annihilation_certificate(Leaf.single(label, G, s), {label: p}))
        for s in range(-A, A + 1))
    sample_w = power_tower(p, A)
    sample = annihilation_certificate(sample_w, {label: p})
    F = cyclic_group(p ** (A + 1))
    H0 = homology(F, 0)
    kills = _bound_kills(F, p ** A)
    rule = (f"a node whose children are killed by a and b is killed by a*b, so a tower of "
            f"depth d <= {A} over leaves killed by {p} is killed by {p}^d, which divides {p}^{A}")
    surj = (f"if H^i(D) = 0 for i >= 0 then H^0(E) -> H^0(F) -> H^0(D) = 0 is exact, so "
            f"H^0(E) surjects onto H^0(F) = {H0}; but {p}^{A} kills H^0(E) and not H^0(F)")
    verdict = "CONTRADICTION" if (not kills and H0.exponent % p ** A == 0
                                  and H0.exponent != p ** A) else "INCONCLUSIVE"
    return ObstructionCertificate(p, A, F, p ** A, leaves, rule, sample_w, sample, str(H0),
                                  H0.exponent, kills, surj, verdict)


@dataclass(frozen=True, eq=False)
class MinimalDepth:
    p: int
    A: int
    value: int
    lower: ObstructionCertificate
    upper: ApproximationCertificate
    capped: ApproximationCertificate


def minimal_depth(p: int, A: int) -> MinimalDepth:
    """``A + 1``: the obstruction gives ``>= A + 1``; an explicit approximation gives ``<= A + 1``."""
    lower = obstruct(p, A)
    S = GeneratorSystem.single_part(lower.F.base, [Generator(f"Z/{p}", cyclic_group(p))])
    upper = approximate(lower.F, S, A + 1)
    capped = approximate(lower.F, S, A)
    if lower.verdict != "CONTRADICTION" or upper.status != "SUCCESS":
        raise RuntimeError("minimal depth could not be certified")
    if capped.status != "PARTIAL" or upper.depth != A + 1:
        raise RuntimeError("upper bound does not match the obstruction")
    return MinimalDepth(p, A, upper.depth, lower, upper, capped)
