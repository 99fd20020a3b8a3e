"""Certificate documents: encoding, decoding and replay.

Every certificate is a JSON object with a ``format``/``version``/``kind``
header.  :func:`replay` decodes a certificate from scratch, so every stored
chain map, homotopy and cone is re-validated, and returns the list of claims
that failed (empty when everything replays).
"""
from __future__ import annotations

from typing import Any

from .approximation import (AisleVerdict, ApproximationCertificate, CellRecord, StageRecord)
from .base import BaseCategory
from .complexes import (ChainMap, find_homotopy, is_quasi_iso, shift, zero_complex, zero_map)
from .counterexample import LeafAnnihilation, MinimalDepth, ObstructionCertificate
from .derived import derived_hom
from .errors import DerivedCellsError, MalformedInput
from .negativity import Generator, GeneratorSystem, NegativityReport, check_negativity
from .serialize import (FORMAT, dec_annihilation, dec_base, dec_complex, dec_components,
                        dec_int, dec_tower, enc_annihilation, enc_base, enc_complex,
                        enc_components, enc_int, enc_tower, header)
from .modules import cyclic_group
from .towers import Rebracketing, WitnessTower, leaf_multiset


# ---------------------------------------------------------------------------
# generator systems


def enc_system(S: GeneratorSystem) -> list:
    return [[{"label": g.label, "complex": enc_complex(g.complex)} for g in part]
            for part in S.parts]


def dec_system(base: BaseCategory, d: Any) -> GeneratorSystem:
    return GeneratorSystem(base, tuple(
        tuple(Generator(str(g["label"]), dec_complex(base, g["complex"], str(g["label"])))
              for g in part) for part in d))


# ---------------------------------------------------------------------------
# negativity


def negativity_document(S: GeneratorSystem, r: NegativityReport) -> dict:
    doc = header("negativity")
    doc.update({
        "base": enc_base(S.base),
        "generators": enc_system(S),
        "weakly_negative": r.weakly_negative,
        "negative": r.negative,
        "partition_ok": r.partition_ok,
        "offending_pairs": [{
            "source": o.source, "target": o.target, "degree": enc_int(o.degree),
            "value": o.value, "reasons": list(o.reasons),
            "representative": enc_components(o.representative.components)}
            for o in r.offending_pairs],
        "windows": [{"source": a, "target": b,
                     "window": None if w is None else [enc_int(w[0]), enc_int(w[1])]}
                    for (a, b), w in r.windows.items()],
    })
    return doc


def _replay_negativity(doc: dict) -> list[str]:
    base = dec_base(doc["base"])
    S = dec_system(base, doc["generators"])
    r = check_negativity(S)
    bad = []
    for key in ("weakly_negative", "negative", "partition_ok"):
        if doc[key] != getattr(r, key):
            bad.append(f"{key} does not replay")
    stored = [(o["source"], o["target"], dec_int(o["degree"])) for o in doc["offending_pairs"]]
    if stored != [(o.source, o.target, o.degree) for o in r.offending_pairs]:
        bad.append("offending pairs do not replay")
    for o in doc["offending_pairs"]:
        P, Q, i = S[o["source"]].complex, S[o["target"]].complex, dec_int(o["degree"])
        Qi = shift(Q, i)
        rep = ChainMap(P, Qi, dec_components(base, o["representative"], P, Qi))
        if find_homotopy(rep, zero_map(P, Qi)) is not None:
            bad.append(f"representative for ({o['source']}, {o['target']}, {i}) is null-homotopic")
        if str(derived_hom(P, Q, i)) != o["value"]:
            bad.append(f"Hom value for ({o['source']}, {o['target']}, {i}) does not replay")
    return bad


# ---------------------------------------------------------------------------
# approximation


def _enc_stage(s: StageRecord) -> dict:
    return {"index": enc_int(s.index), "part": None if s.part is None else enc_int(s.part),
            "cells": [{"label": c.label, "hom": c.hom, "orders": [enc_int(o) for o in c.orders],
                       "count": enc_int(c.count)} for c in s.cells],
            "homology_after": [[enc_int(i), h] for i, h in s.homology_after]}


def _dec_stage(d: dict) -> StageRecord:
    return StageRecord(
        dec_int(d["index"]), None if d["part"] is None else dec_int(d["part"]),
        tuple(CellRecord(c["label"], c["hom"], tuple(dec_int(o) for o in c["orders"]),
                         dec_int(c["count"])) for c in d["cells"]),
        tuple((dec_int(i), h) for i, h in d["homology_after"]))


def _enc_verdict(v: AisleVerdict | None):
    if v is None:
        return None
    return {"accepted": v.accepted, "bound": enc_int(v.bound),
            "nonzero_degrees": [enc_int(i) for i in v.nonzero_degrees],
            "unsupported_degrees": [enc_int(i) for i in v.unsupported_degrees],
            "homology": [[enc_int(i), h] for i, h in v.homology]}


def _dec_verdict(d) -> AisleVerdict | None:
    if d is None:
        return None
    return AisleVerdict(bool(d["accepted"]), dec_int(d["bound"]),
                        tuple(dec_int(i) for i in d["nonzero_degrees"]),
                        tuple(dec_int(i) for i in d["unsupported_degrees"]),
                        tuple((dec_int(i), h) for i, h in d["homology"]))


def approximation_body(c: ApproximationCertificate) -> dict:
    return {
        "status": c.status,
        "mode": c.mode,
        "base": enc_base(c.F.base),
        "generators": enc_system(c.system),
        "F": enc_complex(c.F),
        "E_witness": None if c.E_witness is None else enc_tower(c.E_witness),
        "phi": enc_components(c.phi.components),
        "D": enc_complex(c.D),
        "depth": enc_int(c.depth),
        "stage_log": [_enc_stage(s) for s in c.stage_log],
        "aisle_evidence": _enc_verdict(c.aisle_evidence),
        "annihilation": None if c.annihilation is None else enc_annihilation(c.annihilation),
        "next_stage": enc_int(c.next_stage),
    }


def approximation_document(c: ApproximationCertificate, **extra) -> dict:
    doc = header("approximation", **extra)
    doc.update(approximation_body(c))
    return doc


def decode_approximation(d: dict) -> ApproximationCertificate:
    base = dec_base(d["base"])
    S = dec_system(base, d["generators"])
    F = dec_complex(base, d["F"], "F")
    w = None if d["E_witness"] is None else dec_tower(base, d["E_witness"], "E_witness")
    E = zero_complex(base) if w is None else w.realize
    phi = ChainMap(E, F, dec_components(base, d["phi"], E, F, 0, "phi"))
    D = dec_complex(base, d["D"], "D")
    ann = None if d.get("annihilation") is None else dec_annihilation(base, d["annihilation"], E)
    return ApproximationCertificate(
        d["status"], d["mode"], S, F, w, phi, D, dec_int(d["depth"]),
        tuple(_dec_stage(s) for s in d["stage_log"]), _dec_verdict(d["aisle_evidence"]), ann,
        dec_int(d.get("next_stage", 0)))


def _replay_approximation(doc: dict) -> list[str]:
    c = decode_approximation(doc)
    bad = c.replay()
    if c.status not in ("SUCCESS", "PARTIAL"):
        bad.append(f"unknown status {c.status}")
    return bad


# ---------------------------------------------------------------------------
# towers and rebracketing


def tower_document(w: WitnessTower, **extra) -> dict:
    doc = header("tower", **extra)
    doc.update({"base": enc_base(w.base), "depth": enc_int(w.depth), "tower": enc_tower(w)})
    return doc


def _replay_tower(doc: dict) -> list[str]:
    base = dec_base(doc["base"])
    w = dec_tower(base, doc["tower"])
    return [] if w.depth == dec_int(doc["depth"]) else ["depth does not replay"]


def rebracket_document(original: WitnessTower, r: Rebracketing, operation: str, **extra) -> dict:
    doc = header("rebracket", **extra)
    doc.update({"base": enc_base(original.base), "operation": operation,
                "original": enc_tower(original), "rebracketed": enc_tower(r.tower),
                "comparison": enc_components(r.comparison.components)})
    return doc


def _replay_rebracket(doc: dict) -> list[str]:
    base = dec_base(doc["base"])
    w = dec_tower(base, doc["original"], "original")
    v = dec_tower(base, doc["rebracketed"], "rebracketed")
    cmp = ChainMap(v.realize, w.realize,
                   dec_components(base, doc["comparison"], v.realize, w.realize, 0, "comparison"))
    bad = []
    if not is_quasi_iso(cmp):
        bad.append("comparison is not a quasi-isomorphism")
    if w.depth != v.depth:
        bad.append("depth changed")
    if leaf_multiset(w) != leaf_multiset(v):
        bad.append("leaf multiset changed")
    return bad


# ---------------------------------------------------------------------------
# counterexample


def _enc_obstruction(o: ObstructionCertificate) -> dict:
    return {
        "p": enc_int(o.p), "A": enc_int(o.A), "F": enc_complex(o.F),
        "annihilation_bound": enc_int(o.annihilation_bound),
        "leaf_certificates": [{"shift": enc_int(c.shift), **enc_annihilation(c.certificate)}
                              for c in o.leaf_certificates],
        "composition_rule": o.composition_rule,
        "sample_tower": {"tower": enc_tower(o.sample_witness),
                         **enc_annihilation(o.sample_tower)},
        "H0_F": o.H0_F, "H0_F_exponent": enc_int(o.H0_F_exponent),
        "bound_kills_F": o.bound_kills_F,
        "surjection_argument": o.surjection_argument,
        "verdict": o.verdict, "note": o.note,
    }


def counterexample_document(m: MinimalDepth) -> dict:
    doc = header("counterexample", p=m.p, A=m.A)
    doc.update({"minimal_depth": enc_int(m.value),
                "obstruction": _enc_obstruction(m.lower),
                "upper": approximation_body(m.upper),
                "capped": approximation_body(m.capped)})
    return doc


def _replay_counterexample(doc: dict) -> list[str]:
    base = BaseCategory.integers()
    o = doc["obstruction"]
    p, A = dec_int(o["p"]), dec_int(o["A"])
    leaves = []
    for c in o["leaf_certificates"]:
        s = dec_int(c["shift"])
        leaves.append(LeafAnnihilation(s, dec_annihilation(base, c, shift(cyclic_group(p), s))))
    w = dec_tower(base, o["sample_tower"]["tower"], "sample_tower")
    sample = dec_annihilation(base, o["sample_tower"], w.realize)
    obs = ObstructionCertificate(
        p, A, dec_complex(base, o["F"], "F"), dec_int(o["annihilation_bound"]), tuple(leaves),
        o["composition_rule"], w, sample, o["H0_F"], dec_int(o["H0_F_exponent"]),
        bool(o["bound_kills_F"]), o["surjection_argument"], o["verdict"], o["note"])
    bad = obs.replay()
    if w.depth != A or any(t.label != f"Z/{p}" for t in w.leaf_terms):
        bad.append("sample tower is not a depth-A tower of Z/p leaves")
    upper = decode_approximation(doc["upper"])
    capped = decode_approximation(doc["capped"])
    bad += ["upper: " + b for b in upper.replay()]
    bad += ["capped: " + b for b in capped.replay()]
    if upper.F != obs.F or capped.F != obs.F:
        bad.append("approximations are for a different F")
    if upper.status != "SUCCESS" or upper.depth != A + 1:
        bad.append("upper bound is not a SUCCESS at depth A+1")
    if capped.status != "PARTIAL" or capped.depth > A:
        bad.append("capped run is not PARTIAL within depth A")
    if dec_int(doc["minimal_depth"]) != A + 1:
        bad.append("minimal depth is not A+1")
    return bad


# ---------------------------------------------------------------------------


_REPLAYERS = {
    "negativity": _replay_negativity,
    "approximation": _replay_approximation,
    "tower": _replay_tower,
    "rebracket": _replay_rebracket,
    "counterexample": _replay_counterexample,
}


def replay(doc: Any) -> list[str]:
    """Decode and re-check a certificate; returns the failed claims."""
    if not isinstance(doc, dict) or doc.get("format") != FORMAT:
        raise MalformedInput("not a derivedcells certificate")
    kind = doc.get("kind")
    if kind not in _REPLAYERS:
        raise MalformedInput(f"no replay procedure for certificate kind {kind!r}")
    try:
        return _REPLAYERS[kind](doc)
    except MalformedInput as exc:
        return [f"certificate does not decode: {exc}"]
    except (KeyError, TypeError, ValueError) as exc:
        return [f"certificate does not decode: {type(exc).__name__}: {exc}"]
    except DerivedCellsError as exc:
        return [f"replay error: {exc}"]
