import pytest

from derivedcells.complexes import homology
from derivedcells.errors import MalformedInput
from derivedcells.linalg import FGAbelianGroup
from derivedcells.counterexample import minimal_depth, obstruct, power_tower


@pytest.mark.parametrize("p,A,F_order,bound", [(2, 1, 4, 2), (3, 2, 27, 9), (2, 4, 32, 16)])
def test_obstruction(p, A, F_order, bound):
    o = obstruct(p, A)
    assert o.verdict == "CONTRADICTION"
    assert o.annihilation_bound == bound
    assert homology(o.F, 0) == FGAbelianGroup(0, (F_order,))
    assert o.H0_F_exponent == F_order and not o.bound_kills_F
    assert sorted(c.shift for c in o.leaf_certificates) == list(range(-A, A + 1))
    assert all(c.certificate.verify() and c.certificate.exponent == p for c in o.leaf_certificates)
    assert o.sample_tower.exponent == p ** A and o.sample_tower.verify()
    assert o.replay() == []


@pytest.mark.parametrize("p,A", [(2, 1), (2, 3), (5, 1)])
def test_minimal_depth(p, A):
    m = minimal_depth(p, A)
    assert m.value == A + 1
    assert m.upper.status == "SUCCESS" and m.upper.depth == A + 1
    assert m.upper.replay() == []
    assert m.capped.status == "PARTIAL"
    assert m.lower.replay() == []


def test_upper_bound_for_Z32():
    m = minimal_depth(2, 4)
    assert m.upper.depth == 5
    assert homology(m.upper.E, 0) == FGAbelianGroup(0, (32,))


def test_power_tower_is_Zpd():
    assert homology(power_tower(5, 3).realize, 0) == FGAbelianGroup(0, (125,))


def test_tampered_obstruction_fails_replay():
    import dataclasses
    o = obstruct(2, 2)
    bad = dataclasses.replace(o, annihilation_bound=8)
    assert "annihilation bound is not p^A" in bad.replay()
    bad = dataclasses.replace(o, leaf_certificates=o.leaf_certificates[1:])
    assert bad.replay()


def test_bad_arguments():
    with pytest.raises(MalformedInput):
        obstruct(4, 1)
    with pytest.raises(MalformedInput):
        obstruct(2, 0)
