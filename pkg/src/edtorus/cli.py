"""Command-line front end: input schema, report formats, exit codes.

Input files are UTF-8 JSON with keys p, torus_rank, root_of_unity_exponent,
weights, generators (each {perm, coeff_num, coeff_den} with 1-based
permutation image lists), optional extra_blocks (same shape per block) and an
optional split claim.  Unknown keys are rejected so golden outputs stay
bit-exact.

Exit codes: 0 success, 1 invalid input, 2 inconclusive (no certified
exactness), 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import oracle, pipeline
from .monogrp import (
    MonomialGroupPresentation,
    MonomialRep,
    PresentationError,
    RepBlock,
    character_lattice_action,
    natural_rep,
    validate,
)
from .oracle import OracleError
from .pipeline import PipelineError
from .stab import StabError, generic_stabilizer
from .symrank import (
    EtaError,
    Inconclusive,
    SearchBudgetExceeded,
    eta_bounds,
    symrank as symrank_search,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_INCONCLUSIVE = 2
EXIT_BUDGET = 3

MAX_STEPS_ENV = "EDTORUS_MAX_STEPS"


class InputError(Exception):
    pass


# -- schema ---------------------------------------------------------------------

_TOP_KEYS = {"p", "torus_rank", "root_of_unity_exponent", "weights", "generators", "extra_blocks", "split"}
_GEN_KEYS = {"perm", "coeff_num", "coeff_den"}
_BLOCK_KEYS = {"weights", "generators"}


def _parse_generator(obj, num_lines: int):
    if set(obj) - _GEN_KEYS:
        raise InputError(f"unknown generator keys: {sorted(set(obj) - _GEN_KEYS)}")
    perm = obj.get("perm")
    num = obj.get("coeff_num")
    den = obj.get("coeff_den")
    if not isinstance(perm, list) or sorted(perm) != list(range(1, num_lines + 1)):
        raise InputError("perm must be a 1-based image list of the lines")
    if not isinstance(num, list) or not isinstance(den, list) or len(num) != num_lines or len(den) != num_lines:
        raise InputError("coeff_num/coeff_den must be integer arrays over the lines")
    coeff = tuple(Fraction(int(a), int(b)) % 1 for a, b in zip(num, den))
    return tuple(x - 1 for x in perm), coeff


def presentation_from_json(doc) -> tuple[MonomialGroupPresentation, list[RepBlock]]:
    if not isinstance(doc, dict):
        raise InputError("top level must be a JSON object")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise InputError(f"unknown keys: {sorted(unknown)}")
    for key in ("p", "torus_rank", "root_of_unity_exponent", "weights", "generators"):
        if key not in doc:
            raise InputError(f"missing key: {key}")
    weights = doc["weights"]
    if not isinstance(weights, list) or not weights:
        raise InputError("weights must be a nonempty array of integer arrays")
    d = doc["torus_rank"]
    for w in weights:
        if not isinstance(w, list) or len(w) != d:
            raise InputError("each weight must have length torus_rank")
    m = len(weights)
    gens = [_parse_generator(g, m) for g in doc["generators"]]
    try:
        P = MonomialGroupPresentation(
            p=int(doc["p"]),
            torus_rank=int(d),
            root_of_unity_exponent=int(doc["root_of_unity_exponent"]),
            weights=tuple(tuple(int(x) for x in w) for w in weights),
            generators=tuple(gens),
            split_claim=doc.get("split"),
        )
    except PresentationError as exc:
        raise InputError(str(exc)) from exc
    blocks: list[RepBlock] = []
    for block in doc.get("extra_blocks", []):
        if set(block) - _BLOCK_KEYS:
            raise InputError(f"unknown block keys: {sorted(set(block) - _BLOCK_KEYS)}")
        bweights = block.get("weights")
        bgens = block.get("generators")
        if not isinstance(bweights, list) or not bweights:
            raise InputError("block weights must be a nonempty array")
        if not isinstance(bgens, list) or len(bgens) != len(gens):
            raise InputError("each block needs one action per presentation generator")
        bm = len(bweights)
        parsed = [_parse_generator(g, bm) for g in bgens]
        blocks.append(
            RepBlock(
                weights=tuple(tuple(int(x) for x in w) for w in bweights),
                gen_perms=tuple(g[0] for g in parsed),
                gen_coeffs=tuple(g[1] for g in parsed),
            )
        )
    return P, blocks


def presentation_to_json(P: MonomialGroupPresentation) -> dict:
    doc = {
        "p": P.p,
        "torus_rank": P.torus_rank,
        "root_of_unity_exponent": P.root_of_unity_exponent,
        "weights": [list(w) for w in P.weights],
        "generators": [
            {
                "perm": [x + 1 for x in perm],
                "coeff_num": [c.numerator for c in coeff],
                "coeff_den": [c.denominator for c in coeff],
            }
            for perm, coeff in P.generators
        ],
    }
    if P.split_claim is not None:
        doc["split"] = P.split_claim
    return doc


def load_presentation(path: str, rep_selector: str) -> tuple[MonomialGroupPresentation, MonomialRep]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {path}: {exc}") from exc
    P, blocks = presentation_from_json(doc)
    rep = natural_rep(P)
    if rep_selector == "full" and blocks:
        rep = MonomialRep(presentation=P, blocks=rep.blocks + tuple(blocks))
    return P, rep


# -- report serialization ---------------------------------------------------------


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def jsonable_validation(report) -> dict:
    return {
        "ok": report.ok,
        "error": report.error,
        "detail": report.detail,
        "induced_matrices": [m.to_rows() for m in report.induced_matrices],
        "component_order": report.component_order,
        "split_witness": report.split_witness,
        "diagnostics": list(report.diagnostics),
    }


def jsonable_stabilizer(report) -> dict:
    return {
        "torus_part_invariant_factors": list(report.torus_part.invariant_factors),
        "component_image_size": len(report.component_image),
        "component_image_indices": list(report.component_image),
        "p_rank": report.p_rank,
        "p_faithful": report.p_faithful,
        "p_generically_free": report.p_generically_free,
        "stabilizer_order": report.stabilizer_order,
    }


def jsonable_symrank(res) -> dict:
    return {
        "value": res.value,
        "status": res.status,
        "lower_bound_used": res.lower_bound_used,
        "search_bound": res.search_bound,
        "witness": [list(v) for v in res.witness],
    }


def jsonable_eta(res) -> dict:
    return {
        "lower": res.lower,
        "upper": res.upper,
        "exact": res.exact,
        "split_witness": res.split_witness,
        "certificate": res.certificate,
        "symrank": jsonable_symrank(res.symrank) if res.symrank else None,
    }


def jsonable_ed(report) -> dict:
    return {
        "dim_group": report.dim_group,
        "eta_lower": report.eta_lower,
        "eta_upper": report.eta_upper,
        "stabilizer_p_rank": report.stabilizer_p_rank,
        "dim_free_rep": report.dim_free_rep,
        "ed_lower": report.ed_lower,
        "ed_upper": report.ed_upper,
        "exact": report.exact,
        "hypotheses": {
            "component_abelian": report.hypotheses.component_abelian,
            "split_witness": report.hypotheses.split_witness,
            "v_minimal_certified": report.hypotheses.v_minimal_certified,
            "eta_certificate": report.hypotheses.eta_certificate,
            "lower_source": report.hypotheses.lower_source,
        },
        "notes": list(report.notes),
    }


def emit(doc, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n")
        return
    _emit_table(doc, out)


def _emit_table(doc, out, indent: str = "") -> None:
    if isinstance(doc, dict):
        width = max((len(str(k)) for k in doc), default=0)
        for k in sorted(doc):
            v = doc[k]
            if isinstance(v, (dict, list)) and v and not _is_scalar_list(v):
                out.write(f"{indent}{k}:\n")
                _emit_table(v, out, indent + "  ")
            else:
                out.write(f"{indent}{str(k).ljust(width)}  {_scalar(v)}\n")
    elif isinstance(doc, list):
        for item in doc:
            if isinstance(item, (dict, list)):
                _emit_table(item, out, indent + "  ")
                out.write("\n" if indent == "" else "")
            else:
                out.write(f"{indent}- {_scalar(item)}\n")
    else:
        out.write(f"{indent}{_scalar(doc)}\n")


def _is_scalar_list(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    return str(v)


# -- command handlers --------------------------------------------------------------


def _cmd_validate(args, out) -> int:
    P, _ = load_presentation(args.input, "natural")
    report = validate(P)
    emit(jsonable_validation(report), args.format, out)
    return EXIT_OK if report.ok else EXIT_INVALID


def _cmd_stabilizer(args, out) -> int:
    P, rep = load_presentation(args.input, args.rep)
    report = generic_stabilizer(P, rep)
    emit(jsonable_stabilizer(report), args.format, out)
    return EXIT_OK


def _cmd_symrank(args, out) -> int:
    P, _ = load_presentation(args.input, "natural")
    L = character_lattice_action(P)
    res = symrank_search(
        L, P.p, B=args.bound, node_budget=args.max_steps, box_budget=args.max_steps
    )
    emit(jsonable_symrank(res), args.format, out)
    return EXIT_OK if res.status == "EXACT" else EXIT_INCONCLUSIVE


def _cmd_eta(args, out) -> int:
    P, rep = load_presentation(args.input, args.rep)
    res = eta_bounds(P, rep if args.rep != "none" else None, B=args.bound)
    emit(jsonable_eta(res), args.format, out)
    return EXIT_OK if res.exact is not None else EXIT_INCONCLUSIVE


def _ed_from_args(args):
    if args.target[0] == "case":
        rest = args.target[1:]
        if len(rest) == 3 and rest[0] == "sl":
            return pipeline.ed_case_sl(int(rest[1]), int(rest[2]))
        if len(rest) == 2 and rest[0] == "so":
            return pipeline.ed_case_so(int(rest[1]))
        raise InputError("usage: ed case sl <n> <p> | ed case so <n>")
    if len(args.target) != 1:
        raise InputError("usage: ed <input.json> | ed case ...")
    P, rep = load_presentation(args.target[0], args.rep)
    return pipeline.essential_p_dimension(P, rep)


def _cmd_ed(args, out) -> int:
    report = _ed_from_args(args)
    emit(jsonable_ed(report), args.format, out)
    return EXIT_OK if report.exact is not None else EXIT_INCONCLUSIVE


def _cmd_case(args, out) -> int:
    if args.family == "sl":
        case = pipeline.sln_case(args.n, args.p)
        doc = {
            "family": "sl",
            "n": case.n,
            "p": case.p,
            "case": case.label,
            "h_description": case.h_description,
            "presentation": presentation_to_json(case.presentation),
        }
    else:
        case = pipeline.so_case(args.n)
        doc = {
            "family": "so",
            "n": case.n,
            "h_description": case.h_description,
            "notes": list(case.notes),
            "presentation": presentation_to_json(case.presentation),
        }
    emit(doc, args.format, out)
    return EXIT_OK


def _cmd_table(args, out) -> int:
    if args.family == "sl":
        rows = pipeline.table_sl(args.nmax, args.p)
    else:
        rows = pipeline.table_so(args.nmax)
    emit(rows, args.format, out)
    return EXIT_OK


def _cmd_oracle(args, out) -> int:
    if args.kind == "stab":
        P, rep = load_presentation(args.input, args.rep)
        report = oracle.ff_stabilizer(
            P, rep, q=args.q, trials=args.trials, seed=args.seed, budget=args.max_steps
        )
        doc = {
            "q": report.q,
            "trials": report.trials,
            "seed": report.seed,
            "min_order": report.min_order,
            "min_torus_order": report.min_torus_order,
            "min_component_image": list(report.min_component_image),
            "orders": list(report.orders),
        }
        emit(doc, args.format, out)
        return EXIT_OK
    if args.kind == "symrank":
        P, _ = load_presentation(args.input, "natural")
        L = character_lattice_action(P)
        value = oracle.symrank_bruteforce(L, P.p, args.bound if args.bound else 3)
        emit({"value": value, "search_bound": args.bound if args.bound else 3}, args.format, out)
        return EXIT_OK
    if args.kind == "sylow":
        report = oracle.sylow_abelian_bound_check(args.d, args.p)
        doc = {
            "max_order": report.max_order,
            "bound": report.bound,
            "passed": report.passed,
            "witness_size": len(report.witness),
        }
        emit(doc, args.format, out)
        return EXIT_OK if report.passed else EXIT_INCONCLUSIVE
    raise InputError("unknown oracle kind")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="edtorus",
        description="essential p-dimension of torus extensions presented by monomial generators",
    )
    env_steps = os.environ.get(MAX_STEPS_ENV)
    default_steps = int(env_steps) if env_steps else 10**8

    def common(sub):
        sub.add_argument("--format", choices=("table", "json"), default="table")
        sub.add_argument("--max-steps", type=int, default=default_steps, dest="max_steps")

    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("validate", help="check a presentation file")
    s.add_argument("input")
    common(s)
    s.set_defaults(fn=_cmd_validate)

    s = subs.add_parser("stabilizer", help="generic stabilizer of a representation")
    s.add_argument("input")
    s.add_argument("--rep", choices=("natural", "full"), default="full")
    common(s)
    s.set_defaults(fn=_cmd_stabilizer)

    s = subs.add_parser("symrank", help="symmetric p-rank of the character lattice")
    s.add_argument("input")
    s.add_argument("-B", "--bound", type=int, default=None)
    common(s)
    s.set_defaults(fn=_cmd_symrank)

    s = subs.add_parser("eta", help="minimal p-faithful dimension bounds")
    s.add_argument("input")
    s.add_argument("--rep", choices=("natural", "full", "none"), default="full")
    s.add_argument("-B", "--bound", type=int, default=None)
    common(s)
    s.set_defaults(fn=_cmd_eta)

    s = subs.add_parser("ed", help="essential p-dimension report")
    s.add_argument("target", nargs="+", help="<input.json> or: case sl <n> <p> | case so <n>")
    s.add_argument("--rep", choices=("natural", "full"), default="full")
    common(s)
    s.set_defaults(fn=_cmd_ed)

    s = subs.add_parser("case", help="emit a case-study presentation")
    fam = s.add_subparsers(dest="family", required=True)
    sl = fam.add_parser("sl")
    sl.add_argument("n", type=int)
    sl.add_argument("p", type=int)
    common(sl)
    sl.set_defaults(fn=_cmd_case, family="sl")
    so = fam.add_parser("so")
    so.add_argument("n", type=int)
    common(so)
    so.set_defaults(fn=_cmd_case, family="so")

    s = subs.add_parser("table", help="case-study tables against the closed forms")
    fam = s.add_subparsers(dest="family", required=True)
    sl = fam.add_parser("sl")
    sl.add_argument("nmax", type=int)
    sl.add_argument("p", type=int)
    common(sl)
    sl.set_defaults(fn=_cmd_table, family="sl")
    so = fam.add_parser("so")
    so.add_argument("nmax", type=int)
    common(so)
    so.set_defaults(fn=_cmd_table, family="so")

    s = subs.add_parser("oracle", help="independent brute-force checks")
    kinds = s.add_subparsers(dest="kind", required=True)
    stab = kinds.add_parser("stab")
    stab.add_argument("input")
    stab.add_argument("--rep", choices=("natural", "full"), default="full")
    stab.add_argument("-q", type=int, default=None)
    stab.add_argument("--trials", type=int, default=50)
    stab.add_argument("--seed", type=int, default=0)
    common(stab)
    stab.set_defaults(fn=_cmd_oracle, kind="stab")
    sr = kinds.add_parser("symrank")
    sr.add_argument("input")
    sr.add_argument("-B", "--bound", type=int, default=3)
    common(sr)
    sr.set_defaults(fn=_cmd_oracle, kind="symrank")
    sy = kinds.add_parser("sylow")
    sy.add_argument("d", type=int)
    sy.add_argument("p", type=int)
    common(sy)
    sy.set_defaults(fn=_cmd_oracle, kind="sylow")

    return parser


def _diagnostic(code: str, detail: str) -> None:
    sys.stderr.write(json.dumps({"error": code, "detail": detail}, sort_keys=True) + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args, sys.stdout)
    except InputError as exc:
        _diagnostic("BAD_INPUT", str(exc))
        return EXIT_INVALID
    except PresentationError as exc:
        if exc.code == "LIMIT_EXCEEDED":
            _diagnostic(exc.code, exc.detail)
            return EXIT_BUDGET
        _diagnostic(exc.code, exc.detail)
        return EXIT_INVALID
    except (StabError, EtaError, PipelineError) as exc:
        _diagnostic(exc.code, exc.detail)
        return EXIT_INVALID
    except OracleError as exc:
        _diagnostic(exc.code, exc.detail)
        return EXIT_BUDGET if exc.code == "BUDGET_EXCEEDED" else EXIT_INVALID
    except Inconclusive as exc:
        _diagnostic("INCONCLUSIVE", str(exc))
        return EXIT_INCONCLUSIVE
    except SearchBudgetExceeded as exc:
        _diagnostic("BUDGET_EXCEEDED", str(exc))
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
