"""Command-line interface: ``contact-type <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import re
import sys
from importlib import resources
from pathlib import Path
from typing import List, Optional

from . import __version__
from .config import DEFAULT_CONFIG, RunConfig
from .curves import CurveJet
from .decomp import NonSquareWeightError, check_q_positivity, extract_fg, polarize, rescale_hint, truncate_jet
from .localalg import BudgetExceeded, IdealPresentation, LinearFormSet, empty_forms, mora_standard_basis
from .parse import ParseError, RealityError, parse_poly, parse_real
from .poly import INF, DimensionError
from .qtypes import (
    Case,
    TestVariety,
    UnsupportedConfiguration,
    delta1_ideal,
    dn_ideal,
    hypersurface_q_types,
    ideal_q_types,
    verify_theorems,
    _params_to_z,
)
from .typevalue import TypeValue, value_json, value_str

SCHEMA = "contact-type/1"

EXIT_OK, EXIT_PARSE, EXIT_BUDGET, EXIT_UNSUPPORTED, EXIT_FAIL = 0, 2, 3, 4, 5


class InputError(ValueError):
    pass


def shipped_corpus() -> Path:
    return Path(str(resources.files("contact_type") / "corpus"))


def load_corpus(path) -> List[Case]:
    path = Path(path)
    files = sorted(path.glob("*.json")) if path.is_dir() else [path]
    cases = []
    for f in files:
        try:
            obj = json.loads(f.read_text())
        except json.JSONDecodeError as exc:
            raise InputError(f"{f}: invalid JSON: {exc}") from exc
        items = obj if isinstance(obj, list) else [obj]
        for item in items:
            try:
                cases.append(Case.from_json(item))
            except KeyError as exc:
                raise InputError(f"{f}: missing field {exc}") from exc
    return cases


# argument handling


def _common_flags(parser: argparse.ArgumentParser, suppress: bool):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    g = parser.add_argument_group("run configuration")
    g.add_argument("--seed", type=int, default=d(DEFAULT_CONFIG.seed), help="sampling seed (CONTACT_TYPE_SEED wins)")
    g.add_argument("--samples", type=int, default=d(DEFAULT_CONFIG.sample_count), help="random draws per genericity claim")
    g.add_argument("--budget-steps", type=int, default=d(DEFAULT_CONFIG.budget_steps), help="reduction step cap")
    g.add_argument("--precision", type=int, default=d(None), help="jet precision T (default: automatic)")
    g.add_argument("--exponent-bound", type=int, default=d(DEFAULT_CONFIG.E), help="curve search exponent bound E")
    g.add_argument("--face-degree", type=int, default=d(DEFAULT_CONFIG.D), help="curve search face equation degree D")
    g.add_argument("--json", action="store_true", default=d(False), help="emit a JSON report")


def _ideal_inputs(p: argparse.ArgumentParser):
    p.add_argument("inputs", nargs="+", help="a case file, or generators with -n")
    p.add_argument("-n", type=int, help="ambient dimension for inline generators")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="contact-type", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _common_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        _common_flags(p, suppress=True)
        return p

    _ideal_inputs(add("colength", "dimension of the local quotient ring"))
    _ideal_inputs(add("delta1", "Delta_1 of an ideal"))
    for name, text in (("deltaq", "Delta_q of an ideal or hypersurface"), ("dq", "D_q of an ideal or hypersurface")):
        p = add(name, text)
        _ideal_inputs(p)
        p.add_argument("-q", type=int, required=True)
        p.add_argument("--germ", action="store_true", help="inline input is a real germ, not generators")
        p.add_argument("--variety", action="append", default=[],
                       help="parametric test variety, components separated by ';' in parameters s,u,v,w")
        p.add_argument("--implicit", action="append", default=[],
                       help="implicit test variety: generators separated by ';' then '@q', e.g. 'z1^3+z2^3-z3^3@2'")
    _ideal_inputs(add("dn", "Delta_n = D_n of an ideal"))
    p = add("decompose", "holomorphic decomposition of a real germ")
    p.add_argument("germ")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-k", type=int, help="jet order (default: degree of the germ)")
    p = add("qpos", "search a curve family for q-positivity violations")
    p.add_argument("germ")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-q", type=int, required=True)
    p.add_argument("--curves", help="JSON file: {\"curves\": [[components...]], \"forms\": [[forms...]]}")
    p.add_argument("--curve", action="append", default=[], help="curve components separated by ';' in t")
    p.add_argument("--form", action="append", default=[], help="linear form shared by all curves")
    p = add("verify", "check the inequalities on a corpus")
    p.add_argument("corpus", nargs="?", help="case file or directory (default: shipped corpus)")
    return parser


def config_from(args) -> RunConfig:
    cfg = RunConfig(
        seed=args.seed,
        sample_count=args.samples,
        E=args.exponent_bound,
        D=args.face_degree,
        precision=args.precision,
        budget_steps=args.budget_steps,
    )
    return cfg.with_env()


def _load_target(args):
    """(kind, n, ideal-or-germ, case) from a case file or inline text."""
    first = args.inputs[0]
    if len(args.inputs) == 1 and first.endswith(".json"):
        cases = load_corpus(first)
        if len(cases) != 1:
            raise InputError(f"{first}: expected exactly one case")
        c = cases[0]
        return c.kind, c.n, (c.ideal if c.kind == "ideal" else c.germ), c
    if args.n is None:
        raise InputError("inline generators need -n")
    if getattr(args, "germ", False):
        if len(args.inputs) != 1:
            raise InputError("give exactly one real germ")
        return "hypersurface", args.n, parse_real(first, args.n), None
    return "ideal", args.n, IdealPresentation(args.n, [parse_poly(s, args.n) for s in args.inputs]), None


def _require_ideal(kind, command):
    if kind != "ideal":
        raise InputError(f"{command} needs an ideal, not a real germ")


def _varieties(args, n, case) -> List[TestVariety]:
    out = list(case.varieties) if case else []
    for idx, text in enumerate(args.variety):
        comps = [c.strip() for c in text.split(";")]
        joined = " ".join(comps)
        q = max((j + 1 for j, p in enumerate("suvw") if re.search(rf"\b{p}\b", joined)), default=1)
        out.append(TestVariety.parametric([parse_poly(_params_to_z(c, q), q) for c in comps], f"cli-{idx + 1}"))
    for i, text in enumerate(args.implicit):
        body, _, q = text.rpartition("@")
        if not body:
            raise InputError("implicit variety needs '@q' with its dimension")
        gens = [parse_poly(g.strip(), n) for g in body.split(";")]
        out.append(TestVariety.implicit(gens, int(q), f"cli-implicit-{i + 1}"))
    return out


# commands


def cmd_colength(args, cfg):
    kind, n, ideal, _ = _load_target(args)
    _require_ideal(kind, "colength")
    sb = mora_standard_basis(ideal, budget=cfg.budget)
    value = sb.staircase_size()
    result = {
        "colength": value_json(value),
        "leading_monomials": [list(m) for m in sb.minimal_leading],
        "finite": value != INF,
    }
    lines = [f"colength: {'infinite' if value == INF else value}"]
    if value != INF:
        lines.append(f"staircase size: {value} standard monomials")
    lines.append("leading monomials: " + ", ".join("(" + ",".join(map(str, m)) + ")" for m in sb.minimal_leading))
    return result, lines, EXIT_OK


def _type_lines(label, tv: TypeValue):
    lines = [f"{label}: {value_str(tv.value)}", f"certificate: {tv.certificate}",
             f"bounds: [{value_str(tv.lower)}, {value_str(tv.upper)}]"]
    for k in sorted(tv.witnesses):
        w = tv.witnesses[k]
        if isinstance(w, CurveJet):
            w = w.describe()
        elif isinstance(w, LinearFormSet):
            w = ", ".join(str(f) for f in w.forms) or "(none)"
        elif isinstance(w, dict):
            w = json.dumps(w, sort_keys=True)
        lines.append(f"witness {k}: {w}")
    lines += [f"note: {s}" for s in tv.notes]
    return lines


def cmd_delta1(args, cfg):
    kind, n, ideal, _ = _load_target(args)
    _require_ideal(kind, "delta1")
    tv = delta1_ideal(ideal, cfg)
    return {"Delta_1": tv.to_json()}, _type_lines("Delta_1", tv), EXIT_OK


def cmd_dn(args, cfg):
    kind, n, ideal, _ = _load_target(args)
    _require_ideal(kind, "dn")
    tv = dn_ideal(ideal, cfg)
    return {f"Delta_{n}": tv.to_json(), f"D_{n}": tv.to_json()}, _type_lines(f"Delta_{n} = D_{n}", tv), EXIT_OK


def _q_types(args, cfg):
    kind, n, target, case = _load_target(args)
    q = args.q
    if not 1 <= q <= n:
        raise InputError(f"q={q} out of range 1..{n}")
    vs = _varieties(args, n, case)
    if kind == "ideal":
        return ideal_q_types(target, q, vs, cfg)
    return hypersurface_q_types(target, q, vs, cfg)


def cmd_deltaq(args, cfg):
    delta, _ = _q_types(args, cfg)
    key = f"Delta_{args.q}"
    return {key: delta.to_json()}, _type_lines(key, delta), EXIT_OK


def cmd_dq(args, cfg):
    _, d = _q_types(args, cfg)
    key = f"D_{args.q}"
    return {key: d.to_json()}, _type_lines(key, d), EXIT_OK


def cmd_decompose(args, cfg):
    r = parse_real(args.germ, args.n)
    k = args.k if args.k is not None else r.degree()
    rk = truncate_jet(r, k)
    d = polarize(rk)
    ok = d.reconstruct() == rk
    result = {"k": k, "decomposition": d.to_json(), "reconstruction": "ok" if ok else "mismatch"}
    lines = [f"jet order k = {k}", f"h = {d.h}"]
    for s, w, p in d.summands:
        lines.append(f"{'+' if s > 0 else '-'} {value_str(w)} * |{p}|^2")
    lines.append(f"reconstruction check: {'ok' if ok else 'MISMATCH'}")
    try:
        f, g = extract_fg(d)
        result["f"] = [str(p) for p in f if p]
        result["g"] = [str(p) for p in g if p]
        lines.append("f = (" + ", ".join(result["f"]) + ")")
        lines.append("g = (" + ", ".join(result["g"]) + ")")
    except NonSquareWeightError as exc:
        hint = rescale_hint(d)
        result["extract_error"] = str(exc)
        result["rescale_hint"] = hint
        lines.append(f"f, g unavailable: {exc}")
    return result, lines, EXIT_OK if ok else EXIT_FAIL


def cmd_qpos(args, cfg):
    n, q = args.n, args.q
    r = parse_real(args.germ, n)
    curves, forms = [], []
    if args.curves:
        obj = json.loads(Path(args.curves).read_text())
        curves += [CurveJet.parse(c) for c in obj.get("curves", [])]
        forms += [LinearFormSet(n, [_form_row(f, n) for f in fs]) for fs in obj.get("forms", [])]
    curves += [CurveJet.parse([c.strip() for c in text.split(";")]) for text in args.curve]
    if args.form or not forms:
        forms = [LinearFormSet(n, [_form_row(f, n) for f in args.form]) if args.form else empty_forms(n)]
    if not curves:
        raise InputError("no curves given")
    rep = check_q_positivity(r, q, curves, forms)
    lines = [f"q = {q}: {rep.verdict}"]
    for v in rep.verdicts:
        extra = f" order {value_str(v.order)}" if v.order is not None else ""
        lines.append(f"  {v.curve.describe()}: {v.status}{extra}" + (f" ({v.reason})" if v.reason else ""))
    return rep.to_json(), lines, EXIT_OK


def _form_row(text: str, n: int):
    p = parse_poly(text, n)
    if p.degree() != 1 or p.constant_term():
        raise InputError(f"not a linear form: {text}")
    return [p.terms.get(tuple(1 if i == j else 0 for i in range(n)), 0) for j in range(n)]


def cmd_verify(args, cfg):
    cases = load_corpus(args.corpus or shipped_corpus())
    rep = verify_theorems(cases, cfg)
    counts = rep.counts()
    lines = []
    for c in rep.cases:
        lines.append(f"{c.name}:")
        for ch in c.checks:
            lines.append(f"  {ch.status:<12} {ch.name}: {ch.detail}")
        if c.failed:
            lines.append("  diagnostics:")
            for k, v in sorted(c.values.items()):
                lines.append(f"    {k} = {v}")
            for k, v in sorted(c.extras.get("errors", {}).items()):
                lines.append(f"    error {k}: {v}")
    lines.append("summary: " + ", ".join(f"{k} {v}" for k, v in counts.items()))
    return rep.to_json(), lines, EXIT_FAIL if rep.failed else EXIT_OK


COMMANDS = {
    "colength": cmd_colength,
    "delta1": cmd_delta1,
    "deltaq": cmd_deltaq,
    "dq": cmd_dq,
    "dn": cmd_dn,
    "decompose": cmd_decompose,
    "qpos": cmd_qpos,
    "verify": cmd_verify,
}


def render_json(command: str, cfg: RunConfig, result) -> str:
    report = {"schema": SCHEMA, "version": __version__, "command": command, "config": cfg.to_json(), "result": result}
    return json.dumps(report, sort_keys=True, indent=2)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from(args)
        result, lines, code = COMMANDS[args.command](args, cfg)
    except (ParseError, RealityError, InputError, DimensionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except UnsupportedConfiguration as exc:
        print(f"configuration unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if args.json:
        print(render_json(args.command, cfg, result))
    else:
        print("\n".join(lines))
    return code


if __name__ == "__main__":
    sys.exit(main())
