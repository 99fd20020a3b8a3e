import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from derivedcells import certificates as cert
from derivedcells.approximation import approximate
from derivedcells.base import BaseCategory
from derivedcells.counterexample import minimal_depth
from derivedcells.errors import ComplexError, MalformedInput
from derivedcells.modules import cyclic_group, simple_module
from derivedcells.negativity import check_negativity
from derivedcells.sampling import random_left_nested, random_tower
from derivedcells.serialize import (dec_base, dec_complex, dec_int, dec_tower, dumps, enc_base,
                                    enc_complex, enc_tower, load_problem)
from derivedcells.towers import octahedral_rebracket

from builders import A2, A3, PROBLEMS, random_complex


def test_integers_are_strings():
    doc = json.loads(dumps({"x": enc_complex(cyclic_group(10 ** 30))}))
    assert doc["x"]["differentials"]["-1"] == [[str(10 ** 30)]]
    assert dec_int("12") == 12 and dec_int(12) == 12
    for bad in (True, "1.5", None, [1]):
        with pytest.raises(MalformedInput):
            dec_int(bad)


def test_base_round_trip():
    for b in (BaseCategory.integers(), A2, A3):
        assert dec_base(json.loads(json.dumps(enc_base(b)))) == b
    assert enc_base(A2)["arrows"] == [["1", "2"]]
    with pytest.raises(MalformedInput):
        dec_base({"kind": "quiver", "prime": "4", "vertices": "2", "arrows": []})
    with pytest.raises(MalformedInput):
        dec_base({"kind": "quiver", "prime": "2", "vertices": "2", "arrows": [["1", "2"], ["2", "1"]]})


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([None, A2, A3]))
def test_complex_round_trip(seed, base):
    X = random_complex(random.Random(seed), base)
    assert dec_complex(X.base, json.loads(dumps(enc_complex(X)))) == X


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["Z", "A2"]))
def test_tower_round_trip(seed, backend):
    rng = random.Random(seed)
    gens = ([("Z/2", cyclic_group(2)), ("Z", cyclic_group(0))] if backend == "Z"
            else [("S1", simple_module(A2, 0)), ("S2", simple_module(A2, 1))])
    w = random_tower(gens, rng.randint(1, 4), rng, shifts=(-1, 1), max_multiplicity=2)
    back = dec_tower(w.base, json.loads(dumps(enc_tower(w))))
    assert back.realize == w.realize
    assert enc_tower(back) == enc_tower(w)


def test_problem_errors():
    good = {"base": {"kind": "Z"}, "objects": {"A": {"group": ["2"]}}, "generators": [["A"]]}
    load_problem(json.dumps(good))
    for patch in ({"generators": [["B"]]}, {"target": "B"},
                  {"objects": {"A": {"presentation": [["1", "2"], ["3"]]}}},
                  {"objects": {"A": {"simple": "1"}}},
                  {"base": {"kind": "R"}}):
        with pytest.raises(MalformedInput):
            load_problem(json.dumps({**good, **patch}))
    with pytest.raises(MalformedInput):
        load_problem("{not json")
    bad_d = {"terms": {"-1": "1", "0": "1", "1": "1"},
             "differentials": {"-1": [["1"]], "0": [["1"]]}}
    with pytest.raises(ComplexError) as err:
        load_problem(json.dumps({**good, "objects": {"A": {"complex": bad_d}}}))
    assert err.value.degree == -1


def test_problem_objects():
    p = load_problem(json.dumps({
        "base": {"kind": "quiver", "prime": "3", "vertices": "2", "arrows": [["1", "2"]]},
        "objects": {"M": {"representation": {"dims": ["1", "1"], "maps": [[["1"]]]}},
                    "S": {"simple": "2", "degree": "-1"}},
        "generators": [["M"], ["S"]], "target": "M", "options": {"max_depth": "3"}}))
    assert p.options.max_depth == 3
    assert p.objects["S"].terms == {-1: (1,)}
    from derivedcells.complexes import homology
    assert homology(p.objects["M"], 0).dims == (1, 1)
    assert [len(part) for part in p.system.parts] == [1, 1]


# --- certificates ------------------------------------------------------------


def _round_trip(doc):
    doc = json.loads(dumps(doc))
    assert cert.replay(doc) == []
    return doc


def test_negativity_certificate():
    p = load_problem((PROBLEMS / "kA2_simples.json").read_text())
    S = p.system
    doc = _round_trip(cert.negativity_document(S, check_negativity(S)))
    doc["partition_ok"] = not doc["partition_ok"]
    assert cert.replay(doc)


def test_approximation_certificate():
    p = load_problem((PROBLEMS / "zp_squared.json").read_text())
    c = approximate(p.target_object, p.system, 4)
    doc = _round_trip(cert.approximation_document(c, target=p.target))
    back = cert.decode_approximation(doc)
    assert back.phi == c.phi and back.D == c.D and back.depth == 2
    doc["depth"] = "3"
    assert cert.replay(doc)


def test_tower_and_rebracket_certificates():
    w = random_left_nested([("Z/3", cyclic_group(3))], random.Random(5), shifts=(-1, 1))
    _round_trip(cert.tower_document(w))
    r = octahedral_rebracket(w)
    doc = _round_trip(cert.rebracket_document(w, r, "octahedral", seed=5))
    assert doc["seed"] == "5"


def test_counterexample_certificate():
    doc = _round_trip(cert.counterexample_document(minimal_depth(3, 2)))
    doc["minimal_depth"] = "4"
    assert cert.replay(doc)


def test_replay_rejects_foreign_documents():
    with pytest.raises(MalformedInput):
        cert.replay({"format": "other"})
    with pytest.raises(MalformedInput):
        cert.replay({"format": "derivedcells", "kind": "nope"})
