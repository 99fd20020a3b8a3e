"""Acceptance criteria 1-8, each at its stated tolerance and time budget.

Every test prints one ``criterion N: PASS|FAIL`` line; the lines are
repeated in the terminal summary.
"""
import random
import time

from derivedcells.approximation import approximate
from derivedcells.base import BaseCategory, Morphism
from derivedcells.complexes import cone, homology, is_acyclic, is_quasi_iso, shift
from derivedcells.counterexample import minimal_depth
from derivedcells.derived import derived_hom, hom_window
from derivedcells.errors import OrthogonalityFailed
from derivedcells.linalg import ZZ, ExactMatrix, FGAbelianGroup, cokernel_invariants, smith_normal_form
from derivedcells.modules import cyclic_group, indecomposable_projective, simple_module
from derivedcells.negativity import (Generator, GeneratorSystem, check_negativity,
                                     verify_orthogonality_propagation)
from derivedcells.sampling import random_left_nested, random_tower
from derivedcells.towers import (Leaf, annihilation_certificate, leaf_multiset,
                                 octahedral_rebracket, rebracket_extension_of_stars)

from builders import A2, star_extension_instance
from oracles import invariant_factors, torsion_counts_bruteforce, torsion_counts_from_factors

Z = BaseCategory.integers()


def fresh_caches():
    """Timings are taken without results memoized by earlier tests."""
    derived_hom.cache_clear()
    smith_normal_form.cache_clear()


# --- 1 -----------------------------------------------------------------------


def test_criterion_1_negativity_classification(acceptance):
    fresh_caches()
    checks, times = [], []

    def timed(S):
        t = time.perf_counter()
        r = check_negativity(S)
        times.append(time.perf_counter() - t)
        return r

    r = timed(GeneratorSystem.single_part(Z, [Generator("Z", cyclic_group(0))]))
    checks.append(r.negative and r.weakly_negative)
    for p in (2, 3, 5):
        r = timed(GeneratorSystem.single_part(Z, [Generator(f"Z/{p}", cyclic_group(p))]))
        [o] = r.offending_pairs or [None]
        checks.append(r.weakly_negative and not r.negative and o is not None and o.degree == 1
                      and derived_hom(cyclic_group(p), cyclic_group(p), 1).value
                      == FGAbelianGroup(0, (p,)) and o.value == f"Z/{p}")
    r = timed(GeneratorSystem(A2, ((Generator("S2", simple_module(A2, 1)),),
                                   (Generator("S1", simple_module(A2, 0)),))))
    checks.append(r.weakly_negative and r.partition_ok and not r.negative)
    ok = all(checks) and max(times) < 1.0
    acceptance(1, ok, f"{sum(checks)}/{len(checks)} classifications exact, "
                      f"slowest {max(times):.3f} s (< 1 s each)")
    assert ok


# --- 2 -----------------------------------------------------------------------


def test_criterion_2_partitioned_approximation(acceptance):
    fresh_caches()
    S = GeneratorSystem(A2, ((Generator("S2", simple_module(A2, 1)),),
                             (Generator("S1", simple_module(A2, 0)),)))
    t = time.perf_counter()
    c = approximate(indecomposable_projective(A2, 0), S)
    failures = c.replay()
    dt = time.perf_counter() - t
    ok = (c.status == "SUCCESS" and c.depth == 2 == len(S.parts) and c.leaf_shifts == {0}
          and is_acyclic(c.D) and not failures and dt < 1.0)
    acceptance(2, ok, f"status {c.status}, depth {c.depth} (n+1 = {len(S.parts)}), "
                      f"shifts {sorted(c.leaf_shifts)}, D acyclic {is_acyclic(c.D)}, "
                      f"replay {'ok' if not failures else failures}, {dt:.3f} s")
    assert ok


# --- 3 -----------------------------------------------------------------------


def test_criterion_3_counterexample_minimal_depth(acceptance):
    fresh_caches()
    t = time.perf_counter()
    good = 0
    cases = [(p, A) for p in (2, 3, 5) for A in (1, 2, 3, 4)]
    for p, A in cases:
        m = minimal_depth(p, A)
        if (m.value == A + 1 and m.lower.verdict == "CONTRADICTION" and m.lower.replay() == []
                and m.upper.status == "SUCCESS" and m.upper.depth == A + 1
                and m.upper.replay() == [] and m.capped.status == "PARTIAL"):
            good += 1
    dt = time.perf_counter() - t
    ok = good == len(cases) and dt < 30.0
    acceptance(3, ok, f"minimal_depth(p, A) = A+1 certified for {good}/{len(cases)} (p, A), "
                      f"{dt:.2f} s (< 30 s)")
    assert ok


# --- 4 -----------------------------------------------------------------------


def _homotopy_identity_holds(cert):
    X, h, N = cert.object, cert.homotopy, cert.exponent
    for i in range(X.lo - 1, X.hi + 2):
        lhs = X.d(i - 1) @ h[i] + h[i + 1] @ X.d(i)
        if lhs != Morphism.identity(X.base, X.term(i)).scale(N):
            return False
    return True


def test_criterion_4_annihilation_certificates(acceptance):
    fresh_caches()
    t = time.perf_counter()
    good = 0
    for seed in range(200):
        rng = random.Random(seed)
        p = rng.choice([2, 3, 5])
        depth = rng.randint(1, 4)
        w = random_tower([(f"Z/{p}", cyclic_group(p))], depth, rng, shifts=(-2, 2),
                         max_multiplicity=2)
        c = annihilation_certificate(w, {f"Z/{p}": p})
        if c.exponent == p ** w.depth and c.object == w.realize and _homotopy_identity_holds(c):
            good += 1
    dt = time.perf_counter() - t
    ok = good == 200 and dt < 60.0
    acceptance(4, ok, f"d h + h d = p^depth id exactly on {good}/200 towers, {dt:.2f} s (< 60 s)")
    assert ok


# --- 5 -----------------------------------------------------------------------


def _same_homology(X, Y):
    degs = set(X.degrees) | set(Y.degrees)
    return all(homology(X, i) == homology(Y, i) for i in degs)


def test_criterion_5_octahedral_rebracket(acceptance):
    fresh_caches()
    backends = {
        "Z": [("Z/2", cyclic_group(2)), ("Z/3", cyclic_group(3)), ("Z", cyclic_group(0))],
        "kA2": [("S1", simple_module(A2, 0)), ("S2", simple_module(A2, 1)),
                ("P1", indecomposable_projective(A2, 0))],
    }
    t = time.perf_counter()
    counts = {}
    for name, gens in backends.items():
        good = 0
        for seed in range(100):
            w = random_left_nested(gens, random.Random(seed), shifts=(-1, 1))
            r = octahedral_rebracket(w)
            if (is_quasi_iso(r.comparison) and r.comparison.source == r.tower.realize
                    and r.comparison.target == w.realize
                    and r.tower.depth == w.depth == 3
                    and leaf_multiset(r.tower) == leaf_multiset(w)
                    and _same_homology(r.tower.realize, w.realize)):
                good += 1
        counts[name] = good
    dt = time.perf_counter() - t
    ok = all(v == 100 for v in counts.values()) and dt < 60.0
    acceptance(5, ok, ", ".join(f"{k} {v}/100" for k, v in counts.items())
               + f" quasi-isomorphic with leaves and depth preserved, {dt:.2f} s (< 60 s)")
    assert ok


# --- 6 -----------------------------------------------------------------------


def test_criterion_6_extension_closedness(acceptance):
    fresh_caches()
    verified, refused = {}, {}
    for backend in ("Z", "kA2"):
        good = bad = 0
        for seed in range(100):
            phi, w1, w2 = star_extension_instance("Z" if backend == "Z" else "A2",
                                                  random.Random(seed))
            r = rebracket_extension_of_stars(phi, w1, w2)
            a_ok = leaf_multiset(r.tower.left) == leaf_multiset(w1.left) + leaf_multiset(w2.left)
            b_ok = leaf_multiset(r.tower.right) == leaf_multiset(w1.right) + leaf_multiset(w2.right)
            if r.verify() and r.comparison.target == cone(phi) and a_ok and b_ok:
                good += 1
            phi, w1, w2 = star_extension_instance("Z" if backend == "Z" else "A2",
                                                  random.Random(seed), violating=True)
            try:
                rebracket_extension_of_stars(phi, w1, w2)
            except OrthogonalityFailed:
                bad += 1
        verified[backend], refused[backend] = good, bad
    ok = all(v == 100 for v in verified.values()) and all(v == 100 for v in refused.values())
    acceptance(6, ok, "verified A*B witnesses " + ", ".join(f"{k} {v}/100" for k, v in verified.items())
               + "; ORTHOGONALITY_FAILED on violations "
               + ", ".join(f"{k} {v}/100" for k, v in refused.items()))
    assert ok


# --- 7 -----------------------------------------------------------------------


def test_criterion_7_orthogonality_propagation(acceptance):
    fresh_caches()
    B = [cyclic_group(3), shift(cyclic_group(9), 1), shift(cyclic_group(3), -1)]
    gens = [("Z/2", cyclic_group(2))]
    t = time.perf_counter()
    good = 0
    for seed in range(500):
        rng = random.Random(seed)
        w = random_tower(gens, rng.randint(1, 4), rng, shifts=(-2, 2), max_multiplicity=2)
        X = w.realize
        if all(derived_hom(X, b, i).is_zero for b in B for i in hom_window(X, b)):
            good += 1
    rep = verify_orthogonality_propagation([Leaf.single("Z/2", cyclic_group(2))], B,
                                           trials=500, seed=0)
    dt = time.perf_counter() - t
    ok = good == 500 and rep.status == "PASSED" and rep.passed == 500
    acceptance(7, ok, f"Hom(tower, b[i]) = 0 over the whole window for {good}/500 towers; "
                      f"harness {rep.status} {rep.passed}/{rep.trials}, {dt:.2f} s")
    assert ok


# --- 8 -----------------------------------------------------------------------


def _random_finite_cokernel_matrix(rng):
    while True:
        m = rng.randint(1, 3)
        n = rng.randint(m, m + 2)
        rows = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
        s = invariant_factors(rows)
        if len(s) < m:
            continue
        order = 1
        for d in s:
            order *= d
        if order <= 1000:
            return rows


def test_criterion_8_linear_algebra_oracle(acceptance):
    rng = random.Random(8)
    agree = 0
    disagreements = []
    for _ in range(1000):
        rows = _random_finite_cokernel_matrix(rng)
        G = cokernel_invariants(ExactMatrix.from_rows(ZZ, rows, len(rows[0])))
        brute = torsion_counts_bruteforce(rows)
        if G.free_rank == 0 and brute == torsion_counts_from_factors(list(G.torsion)):
            agree += 1
        elif len(disagreements) < 3:
            disagreements.append(rows)
    ok = agree == 1000
    acceptance(8, ok, f"cokernel invariants agree with quotient enumeration on {agree}/1000 "
                      f"matrices" + (f"; first disagreements {disagreements}" if not ok else ""))
    assert ok
