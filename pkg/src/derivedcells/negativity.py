"""Exact checks of (weak) negativity and of the part-order condition."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property

from .base import BaseCategory
from .complexes import BoundedComplex, ChainMap, shift
from .derived import derived_hom, hom_window
from .errors import MalformedInput
from .sampling import random_tower
from .towers import WitnessTower


@dataclass(frozen=True)
class Generator:
    label: str
    complex: BoundedComplex


@dataclass(frozen=True, eq=False)
class GeneratorSystem:
    """Ordered parts ``P_0, ..., P_n`` of a finite set of compact generators."""

    base: BaseCategory
    parts: tuple[tuple[Generator, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(tuple(p) for p in self.parts))
        seen = set()
        for part in self.parts:
            for g in part:
                if g.complex.base != self.base:
                    raise MalformedInput(f"generator {g.label} lives over a different base")
                if g.complex.is_zero:
                    raise MalformedInput(f"generator {g.label} is the zero complex")
                if g.label in seen:
                    raise MalformedInput(f"duplicate generator label {g.label}")
                seen.add(g.label)

    @classmethod
    def single_part(cls, base: BaseCategory, generators) -> "GeneratorSystem":
        return cls(base, (tuple(generators),))

    @property
    def generators(self) -> list[Generator]:
        return [g for part in self.parts for g in part]

    def part_of(self, label: str) -> int:
        for k, part in enumerate(self.parts):
            if any(g.label == label for g in part):
                return k
        raise KeyError(label)

    def __getitem__(self, label: str) -> Generator:
        for g in self.generators:
            if g.label == label:
                return g
        raise KeyError(label)

    @cached_property
    def sum(self) -> BoundedComplex:
        from .complexes import direct_sum
        return direct_sum(*(g.complex for g in self.generators))


@dataclass(frozen=True, eq=False)
class OffendingPair:
    source: str
    target: str
    degree: int
    value: str
    representative: ChainMap
    reasons: tuple[str, ...]


@dataclass(frozen=True, eq=False)
class NegativityReport:
    weakly_negative: bool
    negative: bool
    partition_ok: bool
    offending_pairs: list[OffendingPair] = field(default_factory=list)
    windows: dict = field(default_factory=dict)


def check_negativity(S: GeneratorSystem) -> NegativityReport:
    """Decide ``Hom(P, Q[i]) = 0`` for ``i >= 2`` (weak), ``i = 1`` (negative) and the part order.

    Every degree in the Hom window is computed, so the result is exact.
    """
    gens = S.generators
    weak = neg = part_ok = True
    offending, windows = [], {}
    for P in gens:
        for Q in gens:
            window = hom_window(P.complex, Q.complex)
            windows[(P.label, Q.label)] = (window.start, window.stop - 1) if window else None
            for i in window:
                if i < 1:
                    continue
                G = derived_hom(P.complex, Q.complex, i)
                if G.is_zero:
                    continue
                reasons = []
                if i >= 2:
                    weak = False
                    reasons.append("weak")
                if i >= 1:
                    neg = False
                    reasons.append("negative")
                if i == 1 and S.part_of(P.label) <= S.part_of(Q.label):
                    part_ok = False
                    reasons.append("partition")
                offending.append(OffendingPair(P.label, Q.label, i, str(G), G.generators[0],
                                               tuple(reasons)))
    order = {g.label: k for k, g in enumerate(sorted(gens, key=lambda g: g.label))}
    offending.sort(key=lambda o: (order[o.source], order[o.target], o.degree))
    return NegativityReport(weak, neg, part_ok, offending, windows)


# ---------------------------------------------------------------------------
# orthogonality propagation


@dataclass(frozen=True, eq=False)
class PropagationReport:
    status: str  # PASSED | HYPOTHESIS_FAILED | VIOLATION
    trials: int
    passed: int
    seed: int
    violations: list = field(default_factory=list)
    hypothesis_witness: tuple | None = None


def verify_orthogonality_propagation(A: list[WitnessTower], B: list[BoundedComplex],
                                     trials: int = 100, seed: int = 0,
                                     max_depth: int = 4) -> PropagationReport:
    """If the leaves of ``A`` are orthogonal to ``B`` in every degree, so is every tower over them.

    Random towers are built from the leaf terms of ``A`` (with random extra
    shifts, which is harmless since the hypothesis covers all degrees) and
    ``derived_hom(tower, b, i)`` is checked over the full Hom window.
    """
    terms = {}
    for w in A:
        for t in w.leaf_terms:
            terms.setdefault((t.label, t.shift), t)
    for t in terms.values():
        G = shift(t.generator, t.shift)
        for k, b in enumerate(B):
            for i in hom_window(G, b):
                H = derived_hom(G, b, i)
                if not H.is_zero:
                    return PropagationReport("HYPOTHESIS_FAILED", 0, 0, seed,
                                             hypothesis_witness=(t.label, k, i, str(H)))
    if not terms:
        return PropagationReport("PASSED", trials, trials, seed)
    generators = [(label if s == 0 else f"{label}[{s}]", shift(t.generator, s))
                  for (label, s), t in sorted(terms.items())]
    rng = random.Random(seed)
    passed, violations = 0, []
    for trial in range(trials):
        w = random_tower(generators, rng.randint(1, max_depth), rng, shifts=(-1, 1))
        X = w.realize
        bad = None
        for k, b in enumerate(B):
            for i in hom_window(X, b):
                H = derived_hom(X, b, i)
                if not H.is_zero:
                    bad = (trial, k, i, str(H))
                    break
            if bad:
                break
        if bad:
            violations.append(bad)
        else:
            passed += 1
    return PropagationReport("VIOLATION" if violations else "PASSED", trials, passed, seed,
                             violations)
