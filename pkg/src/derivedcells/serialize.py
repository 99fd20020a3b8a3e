"""JSON encoding of problems and certificates.

Integers are written as decimal strings; on input both strings and JSON
integers are accepted.  Vertices are 1-based in JSON and 0-based inside.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .base import BaseCategory, Morphism, Obj
from .complexes import BoundedComplex, ChainMap, Homotopy, identity_map, shift, zero_map
from .errors import MalformedInput
from .linalg import ExactMatrix, FGAbelianGroup
from .modules import (Presentation, QuiverRepresentation, indecomposable_projective,
                      projective_resolution, simple_module)
from .negativity import Generator, GeneratorSystem
from .towers import AnnihilationCertificate, Leaf, LeafTerm, Node, WitnessTower

FORMAT = "derivedcells"
VERSION = "0.1.0"


def header(kind: str, **extra) -> dict:
    out = {"format": FORMAT, "version": VERSION, "kind": kind}
    out.update({k: enc_int(v) if isinstance(v, int) else v for k, v in extra.items()})
    return out


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# scalars and matrices


def enc_int(x: int) -> str:
    return str(int(x))


def dec_int(x: Any, what: str = "integer") -> int:
    if isinstance(x, bool):
        raise MalformedInput(f"{what}: expected an integer, got {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x.strip())
        except ValueError:
            pass
    raise MalformedInput(f"{what}: expected an integer, got {x!r}")


def enc_matrix(M: ExactMatrix) -> list:
    return [[enc_int(x) for x in row] for row in M.to_lists()]


def dec_matrix(ring, data: Any, rows: int | None = None, cols: int | None = None,
               what: str = "matrix") -> ExactMatrix:
    if not isinstance(data, list) or any(not isinstance(r, list) for r in data):
        raise MalformedInput(f"{what}: expected a list of rows")
    if rows and cols == 0 and not data:
        data = [[] for _ in range(rows)]
    r = len(data)
    c = len(data[0]) if data else (cols or 0)
    if any(len(row) != c for row in data):
        raise MalformedInput(f"{what}: ragged rows")
    if rows is not None and r != rows:
        raise MalformedInput(f"{what}: expected {rows} rows, got {r}")
    if cols is not None and r and c != cols:
        raise MalformedInput(f"{what}: expected {cols} columns, got {c}")
    vals = [[dec_int(x, what) for x in row] for row in data]
    return ExactMatrix.from_rows(ring, vals, c)


# ---------------------------------------------------------------------------
# base categories


def enc_base(base: BaseCategory) -> dict:
    if base.kind == "Z":
        return {"kind": "Z"}
    return {"kind": "quiver", "prime": enc_int(base.ring.p),
            "vertices": enc_int(base.quiver.vertex_count),
            "arrows": [[enc_int(s + 1), enc_int(t + 1)] for s, t in base.quiver.arrows]}


def dec_base(d: Any) -> BaseCategory:
    if not isinstance(d, dict) or "kind" not in d:
        raise MalformedInput("base: expected an object with a 'kind'")
    if d["kind"] == "Z":
        return BaseCategory.integers()
    if d["kind"] != "quiver":
        raise MalformedInput(f"base: unknown kind {d['kind']!r}")
    try:
        n = dec_int(d["vertices"], "base.vertices")
        arrows = [(dec_int(s, "arrow") - 1, dec_int(t, "arrow") - 1) for s, t in d.get("arrows", [])]
        return BaseCategory.quiver_algebra(dec_int(d["prime"], "base.prime"), n, arrows)
    except (KeyError, TypeError) as exc:
        raise MalformedInput(f"base: missing or malformed field ({exc})") from exc
    except ValueError as exc:
        raise MalformedInput(f"base: {exc}") from exc


# ---------------------------------------------------------------------------
# objects, maps, complexes


def enc_obj(base: BaseCategory, obj: Obj):
    if base.kind == "Z":
        return enc_int(len(obj))
    return {"summands": [enc_int(v + 1) for v in obj]}


def dec_obj(base: BaseCategory, d: Any, what: str = "term") -> Obj:
    if base.kind == "Z":
        n = dec_int(d, what)
        if n < 0:
            raise MalformedInput(f"{what}: negative rank")
        return base.free(n)
    if isinstance(d, dict) and "summands" in d:
        obj = tuple(dec_int(v, what) - 1 for v in d["summands"])
        if any(not 0 <= v < base.quiver.vertex_count for v in obj):
            raise MalformedInput(f"{what}: vertex out of range")
        return obj
    if isinstance(d, list):
        mults = [dec_int(m, what) for m in d]
        if len(mults) != base.quiver.vertex_count or any(m < 0 for m in mults):
            raise MalformedInput(f"{what}: bad multiplicity vector")
        return base.projective(mults)
    raise MalformedInput(f"{what}: expected a multiplicity vector or {{'summands': [...]}}")


def enc_morphism(m: Morphism):
    if m.base.kind == "Z":
        return enc_matrix(m.blocks[0])
    return [enc_matrix(b) for b in m.blocks]


def dec_morphism(base: BaseCategory, d: Any, source: Obj, target: Obj,
                 what: str = "map") -> Morphism:
    if base.kind == "Z":
        M = dec_matrix(base.ring, d, len(target), len(source), what)
        return Morphism(base, source, target, (M,))
    if not isinstance(d, list) or len(d) != base.quiver.vertex_count:
        raise MalformedInput(f"{what}: expected one matrix per vertex")
    blocks = tuple(dec_matrix(base.ring, b, base.dim(target, w), base.dim(source, w), what)
                   for w, b in zip(base.vertices, d))
    return Morphism(base, source, target, blocks)


def enc_complex(X: BoundedComplex) -> dict:
    return {"terms": {enc_int(i): enc_obj(X.base, t) for i, t in X.terms.items()},
            "differentials": {enc_int(i): enc_morphism(d) for i, d in X.differentials.items()}}


def dec_complex(base: BaseCategory, d: Any, what: str = "complex") -> BoundedComplex:
    if not isinstance(d, dict) or "terms" not in d:
        raise MalformedInput(f"{what}: expected an object with 'terms'")
    terms = {dec_int(i, f"{what} degree"): dec_obj(base, t, f"{what} term {i}")
             for i, t in d["terms"].items()}
    diffs = {}
    for i, m in (d.get("differentials") or {}).items():
        k = dec_int(i, f"{what} degree")
        diffs[k] = dec_morphism(base, m, terms.get(k, ()), terms.get(k + 1, ()),
                                f"{what} differential {k}")
    return BoundedComplex(base, terms, diffs)


def enc_components(comps: dict[int, Morphism]) -> dict:
    return {enc_int(i): enc_morphism(m) for i, m in sorted(comps.items()) if not m.is_zero}


def dec_components(base: BaseCategory, d: Any, source: BoundedComplex, target: BoundedComplex,
                   degree_shift: int = 0, what: str = "components") -> dict[int, Morphism]:
    """Components ``source^i -> target^{i + degree_shift}``."""
    if not isinstance(d, dict):
        raise MalformedInput(f"{what}: expected a degree -> matrix object")
    out = {}
    for i, m in d.items():
        k = dec_int(i, what)
        mor = dec_morphism(base, m, source.term(k), target.term(k + degree_shift), f"{what} {k}")
        if not mor.is_module_map():
            raise MalformedInput(f"{what} {k}: not a module map")
        out[k] = mor
    return out


def dec_chain_map(d: Any, source: BoundedComplex, target: BoundedComplex,
                  what: str = "chain map") -> ChainMap:
    return ChainMap(source, target, dec_components(source.base, d, source, target, 0, what))


# ---------------------------------------------------------------------------
# module descriptors


def dec_object(base: BaseCategory, d: Any, name: str = "object") -> BoundedComplex:
    """A named object: an explicit complex or a module placed in some degree."""
    if not isinstance(d, dict):
        raise MalformedInput(f"{name}: expected an object")
    degree = dec_int(d.get("degree", 0), f"{name}.degree")
    if "complex" in d:
        return dec_complex(base, d["complex"], name)
    if "terms" in d:
        return dec_complex(base, d, name)
    if "group" in d:
        if base.kind != "Z":
            raise MalformedInput(f"{name}: abelian group over a quiver base")
        G = FGAbelianGroup.from_orders(dec_int(o, name) for o in d["group"])
        X = projective_resolution(G, base)
    elif "presentation" in d:
        if base.kind != "Z":
            raise MalformedInput(f"{name}: presentation over a quiver base")
        rows = d["presentation"]
        ncols = dec_int(d["relations"], name) if "relations" in d else None
        X = projective_resolution(Presentation(dec_matrix(base.ring, rows, None, ncols, name)),
                                  base)
    elif "representation" in d:
        if base.kind != "quiver":
            raise MalformedInput(f"{name}: representation over the integer base")
        rep = d["representation"]
        dims = tuple(dec_int(x, name) for x in rep["dims"])
        maps = []
        for a, ((s, t), M) in enumerate(zip(base.quiver.arrows, rep.get("maps", []))):
            maps.append(dec_matrix(base.ring, M, dims[t], dims[s], f"{name} arrow {a + 1}"))
        X = projective_resolution(QuiverRepresentation(base, dims, tuple(maps)))
    elif "projective" in d:
        v = dec_int(d["projective"], name) - 1
        if base.kind != "quiver" or not 0 <= v < base.quiver.vertex_count:
            raise MalformedInput(f"{name}: bad projective vertex")
        X = indecomposable_projective(base, v)
    elif "simple" in d:
        v = dec_int(d["simple"], name) - 1
        if base.kind != "quiver" or not 0 <= v < base.quiver.vertex_count:
            raise MalformedInput(f"{name}: bad simple vertex")
        X = simple_module(base, v)
    else:
        raise MalformedInput(f"{name}: unknown object description {sorted(d)}")
    return shift(X, -degree)


# ---------------------------------------------------------------------------
# problem files


@dataclass
class Options:
    max_depth: int | None = None
    seed: int = 0
    trials: int = 100


@dataclass
class ProblemFile:
    base: BaseCategory
    objects: dict[str, BoundedComplex]
    generators: list[list[str]]
    target: str | None = None
    options: Options = field(default_factory=Options)

    @property
    def system(self) -> GeneratorSystem:
        return GeneratorSystem(self.base, tuple(
            tuple(Generator(n, self.objects[n]) for n in part) for part in self.generators))

    @property
    def target_object(self) -> BoundedComplex:
        if self.target is None:
            raise MalformedInput("problem has no target object")
        return self.objects[self.target]


def load_problem(text: str) -> ProblemFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedInput("problem file must be a JSON object")
    base = dec_base(doc.get("base", {"kind": "Z"}))
    objects = {}
    for name, d in (doc.get("objects") or {}).items():
        objects[name] = dec_object(base, d, name)
    parts = doc.get("generators") or []
    if parts and all(isinstance(p, str) for p in parts):
        parts = [parts]
    for part in parts:
        if not isinstance(part, list):
            raise MalformedInput("generators: expected a list of parts (lists of names)")
        for n in part:
            if n not in objects:
                raise MalformedInput(f"generators: unknown object {n!r}")
    target = doc.get("target")
    if target is not None and target not in objects:
        raise MalformedInput(f"target: unknown object {target!r}")
    o = doc.get("options") or {}
    opts = Options(
        max_depth=dec_int(o["max_depth"], "options.max_depth") if "max_depth" in o else None,
        seed=dec_int(o.get("seed", 0), "options.seed"),
        trials=dec_int(o.get("trials", 100), "options.trials"))
    return ProblemFile(base, objects, [list(p) for p in parts], target, opts)


# ---------------------------------------------------------------------------
# towers


def enc_tower(w: WitnessTower) -> dict:
    if isinstance(w, Leaf):
        return {"leaf": [{"label": t.label, "shift": enc_int(t.shift),
                          "multiplicity": enc_int(t.multiplicity),
                          "generator": enc_complex(t.generator)} for t in w.terms]}
    return {"node": {"left": enc_tower(w.left), "right": enc_tower(w.right),
                     "glue": enc_components(w.glue.components)}}


def dec_tower(base: BaseCategory, d: Any, what: str = "tower") -> WitnessTower:
    if not isinstance(d, dict):
        raise MalformedInput(f"{what}: expected an object")
    if "leaf" in d:
        terms = []
        for t in d["leaf"]:
            terms.append(LeafTerm(str(t["label"]), dec_complex(base, t["generator"], what),
                                  dec_int(t.get("shift", 0), what),
                                  dec_int(t.get("multiplicity", 1), what)))
        return Leaf(base, tuple(terms))
    if "node" in d:
        n = d["node"]
        left = dec_tower(base, n["left"], what + ".left")
        right = dec_tower(base, n["right"], what + ".right")
        src = shift(right.realize, -1)
        glue = dec_chain_map(n.get("glue", {}), src, left.realize, what + ".glue")
        return Node(left, right, glue)
    raise MalformedInput(f"{what}: expected 'leaf' or 'node'")


def enc_homotopy(h: Homotopy) -> dict:
    return enc_components(h.components)


def dec_annihilation(base: BaseCategory, d: Any, X: BoundedComplex) -> AnnihilationCertificate:
    N = dec_int(d["exponent"], "annihilation.exponent")
    comps = dec_components(base, d["homotopy"], X, X, -1, "annihilation.homotopy")
    return AnnihilationCertificate(X, N, Homotopy(identity_map(X).scale(N), zero_map(X, X), comps))


def enc_annihilation(c: AnnihilationCertificate) -> dict:
    return {"exponent": enc_int(c.exponent), "homotopy": enc_homotopy(c.homotopy)}
