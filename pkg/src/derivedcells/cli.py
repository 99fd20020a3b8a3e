"""Command-line interface.

Exit codes: 0 success, 2 hypothesis failed / partial result / not weakly
negative, 3 malformed input, 4 replay failure.
"""
from __future__ import annotations

import argparse
import json
import random
import sys

from . import certificates as cert
from .approximation import approximate
from .counterexample import minimal_depth
from .derived import derived_hom, hom_window
from .errors import HypothesisFailed, MalformedInput, ReplayFailed
from .modules import cyclic_group
from .negativity import check_negativity, verify_orthogonality_propagation
from .sampling import random_left_nested
from .serialize import dec_base, dec_tower, dumps, header, load_problem
from .towers import Leaf, Node, inverse_octahedral_rebracket, octahedral_rebracket

EXIT_OK, EXIT_HYPOTHESIS, EXIT_MALFORMED, EXIT_REPLAY = 0, 2, 3, 4


def _parse_range(text: str) -> range:
    try:
        lo, hi = text.split("..")
        return range(int(lo), int(hi) + 1)
    except ValueError as exc:
        raise MalformedInput(f"--range expects lo..hi, got {text!r}") from exc


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc}") from exc


def _emit(doc: dict, args) -> None:
    text = dumps(doc)
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_json(path: str):
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path}: invalid JSON: {exc}") from exc


# ---------------------------------------------------------------------------
# commands


def cmd_check_negativity(args) -> int:
    problem = load_problem(_read(args.input))
    S = problem.system
    report = check_negativity(S)
    _emit(cert.negativity_document(S, report), args)
    return EXIT_OK if report.weakly_negative else EXIT_HYPOTHESIS


def cmd_ext_table(args) -> int:
    problem = load_problem(_read(args.input))
    gens = problem.system.generators
    rows = []
    for P in gens:
        for Q in gens:
            window = hom_window(P.complex, Q.complex)
            degrees = _parse_range(args.range) if args.range else window
            rows.append({
                "source": P.label, "target": Q.label,
                "window": [str(window.start), str(window.stop - 1)] if window else None,
                "values": {str(i): str(derived_hom(P.complex, Q.complex, i)) for i in degrees},
            })
    doc = header("ext-table")
    doc["rows"] = rows
    _emit(doc, args)
    return EXIT_OK


def cmd_approximate(args) -> int:
    problem = load_problem(_read(args.input))
    max_depth = args.max_depth if args.max_depth is not None else problem.options.max_depth
    c = approximate(problem.target_object, problem.system, max_depth)
    _emit(cert.approximation_document(c, target=problem.target), args)
    return EXIT_OK if c.status == "SUCCESS" else EXIT_HYPOTHESIS


def cmd_counterexample(args) -> int:
    if args.prime is None or args.bound is None:
        raise MalformedInput("counterexample needs --prime and --bound")
    m = minimal_depth(args.prime, args.bound)
    _emit(cert.counterexample_document(m), args)
    return EXIT_OK


def cmd_rebracket(args) -> int:
    seed = args.seed if args.seed is not None else 0
    if args.input:
        doc = _load_json(args.input)
        if not isinstance(doc, dict):
            raise MalformedInput("expected a certificate object")
        base = dec_base(doc.get("base"))
        if doc.get("kind") == "tower":
            w = dec_tower(base, doc["tower"])
        elif doc.get("kind") == "approximation" and doc.get("E_witness"):
            w = dec_tower(base, doc["E_witness"])
        elif doc.get("kind") == "rebracket":
            w = dec_tower(base, doc["rebracketed"])
        else:
            raise MalformedInput("rebracket needs a tower, approximation or rebracket certificate")
    else:
        p = args.prime or 2
        rng = random.Random(seed)
        w = random_left_nested([(f"Z/{p}", cyclic_group(p))], rng, shifts=(-1, 1))
    if isinstance(w, Node) and isinstance(w.left, Node):
        r, op = octahedral_rebracket(w), "octahedral"
    elif isinstance(w, Node) and isinstance(w.right, Node):
        r, op = inverse_octahedral_rebracket(w), "inverse_octahedral"
    else:
        raise MalformedInput("tower must have a Node child to rebracket")
    if not r.verify():
        raise ReplayFailed("comparison map is not a quasi-isomorphism")
    _emit(cert.rebracket_document(w, r, op, seed=seed), args)
    return EXIT_OK


def cmd_propagate(args) -> int:
    problem = load_problem(_read(args.input))
    if len(problem.generators) != 2:
        raise MalformedInput("propagate expects two parts: the A-leaves and B")
    S = problem.system
    A = [Leaf.single(g.label, g.complex) for g in S.parts[0]]
    B = [g.complex for g in S.parts[1]]
    trials = args.trials if args.trials is not None else problem.options.trials
    seed = args.seed if args.seed is not None else problem.options.seed
    rep = verify_orthogonality_propagation(A, B, trials, seed)
    doc = header("propagation", seed=seed)
    doc.update({"status": rep.status, "trials": str(rep.trials), "passed": str(rep.passed),
                "violations": [[str(x) for x in v] for v in rep.violations],
                "hypothesis_witness": None if rep.hypothesis_witness is None
                else [str(x) for x in rep.hypothesis_witness]})
    _emit(doc, args)
    return {"PASSED": EXIT_OK, "HYPOTHESIS_FAILED": EXIT_HYPOTHESIS}.get(rep.status, EXIT_REPLAY)


def cmd_verify(args) -> int:
    path = args.verify or args.file
    if not path:
        raise MalformedInput("verify needs a certificate file")
    failures = cert.replay(_load_json(path))
    if failures:
        for f in failures:
            print(f"REPLAY FAILED: {f}", file=sys.stderr)
        return EXIT_REPLAY
    print(f"replay ok: {path}")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="derivedcells",
        description="Star calculus, negativity checks and approximation certificates "
                    "for desk-scale derived categories.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--input", help="problem or certificate JSON file")
        p.add_argument("--output", help="write the result here instead of stdout")
        p.add_argument("--seed", type=int)
        p.add_argument("--trials", type=int)
        p.add_argument("--max-depth", dest="max_depth", type=int)
        p.add_argument("--range", help="degree range lo..hi")
        p.add_argument("--prime", type=int)
        p.add_argument("--bound", type=int)
        p.add_argument("--verify", help="certificate file to replay")
        return p

    add("check-negativity", cmd_check_negativity, "weak negativity / negativity / part order")
    add("ext-table", cmd_ext_table, "derived Hom groups between all generator pairs")
    add("approximate", cmd_approximate, "approximation triangle E -> F -> D")
    add("counterexample", cmd_counterexample, "minimal depth certificate for Z/p^(A+1)")
    add("rebracket", cmd_rebracket, "octahedral rebracketing of a stored or sampled tower")
    add("propagate", cmd_propagate, "randomized orthogonality propagation check")
    v = add("verify", cmd_verify, "replay a certificate")
    v.add_argument("file", nargs="?")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # "--range -1..2" would otherwise be read as an option
    for k in range(len(argv) - 1):
        if argv[k] == "--range":
            argv[k:k + 2] = [f"--range={argv[k + 1]}", ""]
    args = parser.parse_args([a for a in argv if a != ""])
    needs_input = {"check-negativity", "ext-table", "approximate", "propagate"}
    try:
        if args.verify:
            return cmd_verify(args)
        if args.command in needs_input and not args.input:
            raise MalformedInput(f"{args.command} needs --input FILE")
        return args.func(args)
    except MalformedInput as exc:
        degree = getattr(exc, "degree", None)
        where = f" (degree {degree})" if degree is not None else ""
        print(f"malformed input{where}: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except HypothesisFailed as exc:
        print(f"hypothesis failed: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except ReplayFailed as exc:
        print(f"replay failed: {exc}", file=sys.stderr)
        return EXIT_REPLAY


if __name__ == "__main__":
    sys.exit(main())
