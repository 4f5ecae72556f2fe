"""Batch command-line surface with deterministic JSON reporting.

Exit codes: 0 when every check passes, 1 when a check fails or a domain
precondition is violated, 2 on usage or literal-parse errors.  With --json a
single result document is emitted; plain output is a short human summary.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Dict, List, Optional

from . import abstract, cube, exparc, homography as hg, libra, reconstruct, wurf
from .errors import MeridianError, ParseError
from .report import Report
from .scalar import (
    FieldSpec,
    INF,
    Point,
    format_point,
    parse_point,
    parse_scalar,
    points_of,
)


class UsageError(Exception):
    pass


def _parse_field(text: str) -> FieldSpec:
    if text == "q":
        return FieldSpec.rationals()
    if text.startswith("gf:"):
        try:
            return FieldSpec.gf(int(text[3:]))
        except ValueError as exc:
            raise UsageError(str(exc))
    raise UsageError(f"bad field {text!r}: expected gf:<p> or q")


def _parse_points(text: str, field: FieldSpec, n: Optional[int] = None) -> List[Point]:
    parts = text.split(",")
    if n is not None and len(parts) != n:
        raise UsageError(f"expected {n} comma-separated points, got {len(parts)}")
    return [parse_point(p, field) for p in parts]


def _parse_matrix(text: str, field: FieldSpec) -> hg.Homography:
    parts = text.split(",")
    if len(parts) != 4:
        raise UsageError("matrix needs four comma-separated scalars")
    a, b, c, d = (parse_scalar(p, field) for p in parts)
    return hg.Homography.new(a, b, c, d)


def _parse_map(text: str, field: FieldSpec):
    pairs = []
    for chunk in text.split(","):
        if "->" not in chunk:
            raise UsageError(f"bad mapping chunk {chunk!r}: expected <pt>-><pt>")
        src, dst = chunk.split("->", 1)
        pairs.append((parse_point(src, field), parse_point(dst, field)))
    if len(pairs) != 2:
        raise UsageError("vol needs exactly two point mappings")
    return pairs


def _result(command: str, inputs: Dict, result=None, checks: Optional[List[Dict]] = None,
            error: Optional[str] = None) -> Dict:
    checks = checks or []
    if error is not None:
        status = "error"
    elif any(not c["pass"] for c in checks):
        status = "fail"
    else:
        status = "ok"
    doc = {
        "command": command,
        "inputs": inputs,
        "result": result,
        "checks": checks,
        "status": status,
    }
    if error is not None:
        doc["error"] = error
    return doc


def _report_checks(rep: Report) -> List[Dict]:
    return [c.to_dict() for c in sorted(rep.checks, key=lambda c: c.name)]


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_vol(args) -> Dict:
    field = _parse_field(args.field)
    (p, q), (r, s) = _parse_map(args.map, field)
    h = hg.vol(p, q, r, s, field=field)
    return _result(
        "vol",
        {"field": field.label(), "map": args.map},
        {"matrix": [format_point(x) for x in h.coeffs()]},
    )


def _cmd_hol(args) -> Dict:
    field = _parse_field(args.field)
    src = _parse_points(getattr(args, "from"), field, 3)
    dst = _parse_points(args.to, field, 3)
    h = hg.hol(src, dst, field=field)
    return _result(
        "hol",
        {"field": field.label(), "from": getattr(args, "from"), "to": args.to},
        {"matrix": [format_point(x) for x in h.coeffs()]},
    )


def _cmd_apply(args) -> Dict:
    field = _parse_field(args.field)
    h = _parse_matrix(args.matrix, field)
    x = parse_point(args.point, field)
    return _result(
        "apply",
        {"field": field.label(), "matrix": args.matrix, "point": args.point},
        format_point(hg.apply(h, x)),
    )


def _cmd_classify(args) -> Dict:
    field = _parse_field(args.field)
    h = _parse_matrix(args.matrix, field)
    return _result(
        "classify",
        {"field": field.label(), "matrix": args.matrix},
        {
            "class": hg.classify(h).value,
            "canonical": [format_point(x) for x in h.coeffs()],
            "det_class": hg.det_class(h).value,
        },
    )


def _cmd_crossratio(args) -> Dict:
    field = _parse_field(args.field)
    w, x, y, z = _parse_points(args.points, field, 4)
    return _result(
        "crossratio",
        {"field": field.label(), "points": args.points},
        format_point(wurf.cross_ratio(w, x, y, z)),
    )


def _cmd_quinary(args) -> Dict:
    field = _parse_field(args.field)
    a, b, c, d, e = _parse_points(args.args, field, 5)
    return _result(
        "quinary",
        {"field": field.label(), "args": args.args},
        format_point(cube.quinary(field, a, b, c, d, e)),
    )


def _cmd_wurf(args) -> Dict:
    field = _parse_field(args.field)
    quad = _parse_points(args.quad, field, 4)
    basis = _parse_points(args.basis, field, 3) if args.basis else wurf.default_basis(field)
    value = wurf.wurf_class(quad, basis=basis, field=field)
    kind = wurf.singular_kind(tuple(quad))
    harmonic = False
    if field.p is not None and kind is None:
        harmonic = value in set(wurf.harmonic_classes(field, basis).values())
    return _result(
        "wurf",
        {"field": field.label(), "quad": args.quad,
         "basis": ",".join(format_point(b) for b in basis)},
        {
            "class": format_point(value),
            "singular_kind": kind.value if kind else None,
            "harmonic": harmonic,
        },
    )


def _cmd_orientation(args) -> Dict:
    field = _parse_field(args.field)
    basis = _parse_points(args.basis, field, 3)
    o = exparc.orientation_of(basis, field=field)
    return _result(
        "orientation",
        {"field": field.label(), "basis": args.basis},
        o.sign.value,
    )


def _cmd_arc(args) -> Dict:
    field = _parse_field(args.field)
    a, b = _parse_points(args.pair, field, 2)
    t = parse_point(args.point, field)
    spec = exparc.arc(field, a, b)
    return _result(
        "arc",
        {"field": field.label(), "pair": args.pair, "point": args.point},
        {"contains": exparc.arc_contains(spec, t)},
    )


def _cmd_decompose(args) -> Dict:
    field = _parse_field(args.field)
    h = _parse_matrix(args.matrix, field)
    kind = hg.classify(h)
    if kind is hg.HClass.TRANSLATION:
        factors = exparc.decompose_translation(h)
        return _result(
            "decompose",
            {"field": field.label(), "matrix": args.matrix},
            {
                "kind": "translation",
                "factors": [[format_point(x) for x in f.coeffs()] for f in factors],
            },
        )
    if kind is hg.HClass.PURE_ROTATION:
        pi, tau = exparc.decompose_rotation(h)
        return _result(
            "decompose",
            {"field": field.label(), "matrix": args.matrix},
            {
                "kind": "rotation",
                "involution": [format_point(x) for x in pi.coeffs()],
                "translation": [format_point(x) for x in tau.coeffs()],
            },
        )
    raise MeridianError(f"nothing to decompose: input classifies as {kind.value}")


def _cmd_reconstruct(args) -> Dict:
    if not args.structure.startswith("gf:"):
        raise UsageError("reconstruct expects --structure gf:<p>")
    field = _parse_field(args.structure)
    _, fam, _ = abstract.from_field(field)
    z, o, i = (int(tok) for tok in args.basis.split(","))
    table = reconstruct.rebuild(fam, (z, o, i))
    rep = reconstruct.verify_field_axioms(table)
    iso = reconstruct.find_isomorphism(table, field.p)
    checks = _report_checks(rep)
    checks.append({"name": "isomorphic_to_prime_field", "pass": iso is not None})
    result = {"size": len(table.elements), "isomorphic": iso is not None}
    if args.dump_tables:
        result["tables"] = table.to_dict()
    return _result(
        "reconstruct",
        {"structure": args.structure, "basis": args.basis},
        result,
        checks,
    )


SUITES = ("axioms", "group", "loads", "libra", "wurf", "arcs", "reconstruct", "all")


def _field_suites(field: FieldSpec, suite: str, max_enum: int, seed: int) -> (List[Report], List[str]):
    p = field.p
    reports, skipped = [], []

    def want(name):
        return suite in (name, "all")

    carrier, fam, group = abstract.from_field(field, max_enum=max(max_enum * 8, p + 1))
    if want("axioms"):
        reports.append(abstract.verify_involution_family(fam, max_enum=max_enum, seed=seed))
    if want("group"):
        reports.append(abstract.verify_meridian_group(group))
    if want("loads"):
        if p <= 5:
            reports.append(cube.verify_load_axioms(field))
        else:
            skipped.append(f"loads: exhaustive sweep bounded to p <= 5, got {p}")
    if want("libra"):
        reports.append(_libra_suite(fam, p))
    if want("wurf"):
        if p <= 7:
            reports.append(wurf.verify_wurf_suite(field))
            if p <= 5:
                reports.append(wurf.verify_cross_ratio_invariance(field))
        else:
            skipped.append(f"wurf: sweeps bounded to p <= 7, got {p}")
    if want("arcs"):
        if p <= 11:
            reports.append(exparc.verify_partitions(field))
        else:
            skipped.append(f"arcs: partition sweeps bounded to p <= 11, got {p}")
    if want("reconstruct"):
        rep = Report("reconstruct")
        table = reconstruct.rebuild(fam, (0, 1, p))
        sub = reconstruct.verify_field_axioms(table)
        rep.merge(sub)
        rep.add("isomorphic_to_prime_field", reconstruct.find_isomorphism(table, p) is not None)
        reports.append(rep)
    return reports, skipped


def _libra_suite(fam: abstract.InvolutionFamily, p: int) -> Report:
    rep = Report("libra")
    inf_label = p
    pairs = [(0, inf_label), (inf_label, inf_label), (0, 1)]
    for a, b in pairs:
        sub = libra.verify_inner_family(libra.mab_family(fam, a, b))
        for chk in sub.checks:
            rep.add(f"mab_{a}_{b}.{chk.name}", chk.passed, chk.witness)
        rep.add(f"mab_{a}_{b}.abelian", libra.mab_induced_libra(fam, a, b).is_abelian())
    t_ne = libra.mab_function_libra(fam, 0, inf_label)
    t_ne2 = libra.mab_function_libra(fam, 1, 2 % p)
    t_eq = libra.mab_function_libra(fam, inf_label, inf_label)
    t_eq2 = libra.mab_function_libra(fam, 0, 0)
    rep.add("stabilizers_distinct_anchors_isomorphic",
            libra.libra_isomorphic(t_ne, t_ne2) is not None)
    rep.add("stabilizers_equal_anchors_isomorphic",
            libra.libra_isomorphic(t_eq, t_eq2) is not None)
    rep.add("mixed_anchor_kinds_not_isomorphic",
            libra.libra_isomorphic(t_ne, t_eq) is None)
    return rep


def _cmd_verify(args) -> Dict:
    suite = args.suite
    if suite not in SUITES:
        raise UsageError(f"unknown suite {suite!r}")
    inputs = {"structure": args.structure, "suite": suite}
    reports: List[Report] = []
    skipped: List[str] = []
    if args.structure.startswith("gf:"):
        field = _parse_field(args.structure)
        reports, skipped = _field_suites(field, suite, args.max_enum, args.seed)
    elif args.structure.startswith("file:"):
        with open(args.structure[5:], "r", encoding="utf-8") as fh:
            fam = abstract.load_structure(fh.read())
        if suite in ("axioms", "all"):
            reports.append(abstract.verify_involution_family(fam, max_enum=args.max_enum,
                                                             seed=args.seed))
        if suite in ("group", "all"):
            reports.append(abstract.verify_meridian_group(
                abstract.group_closure(sorted(fam.members))))
        if suite in ("libra", "wurf", "loads", "arcs", "reconstruct"):
            raise UsageError(f"suite {suite!r} needs a gf:<p> structure")
    else:
        raise UsageError("structure must be gf:<p> or file:<path>")

    checks: List[Dict] = []
    notes: List[str] = list(skipped)
    for rep in reports:
        for c in sorted(rep.checks, key=lambda c: c.name):
            entry = {"name": f"{rep.suite}.{c.name}", "pass": c.passed}
            if not c.passed and c.witness is not None:
                entry["witness"] = _jsonable(c.witness)
            checks.append(entry)
        notes.extend(rep.notes)
    return _result("verify", inputs, {"notes": sorted(notes)}, checks)


def _jsonable(obj):
    try:
        json.dumps(obj)
        return obj
    except TypeError:
        return repr(obj)


# ---------------------------------------------------------------------------
# argument parsing and dispatch
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="meridian", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def add(name, handler, **flags):
        p = sub.add_parser(name)
        for flag, kwargs in flags.items():
            p.add_argument(f"--{flag.replace('_', '-')}", **kwargs)
        p.add_argument("--json", action="store_true")
        p.set_defaults(handler=handler)
        return p

    add("vol", _cmd_vol, field={"required": True}, map={"required": True})
    add("hol", _cmd_hol, field={"required": True},
        **{"from": {"required": True}}, to={"required": True})
    add("apply", _cmd_apply, field={"required": True}, matrix={"required": True},
        point={"required": True})
    add("classify", _cmd_classify, field={"required": True}, matrix={"required": True})
    add("crossratio", _cmd_crossratio, field={"required": True}, points={"required": True})
    add("quinary", _cmd_quinary, field={"required": True}, args={"required": True})
    add("wurf", _cmd_wurf, field={"required": True}, quad={"required": True},
        basis={"default": None})
    add("orientation", _cmd_orientation, field={"required": True}, basis={"required": True})
    add("arc", _cmd_arc, field={"required": True}, pair={"required": True},
        point={"required": True})
    add("decompose", _cmd_decompose, field={"required": True}, matrix={"required": True})
    add("reconstruct", _cmd_reconstruct, structure={"required": True},
        basis={"default": "0,1,2"}, dump_tables={"action": "store_true"})
    add("verify", _cmd_verify, structure={"required": True}, suite={"default": "all"},
        max_enum={"type": int, "default": abstract.DEFAULT_MAX_CARRIER},
        seed={"type": int, "default": 0})
    return top


def _emit(doc: Dict, as_json: bool, out) -> None:
    if as_json:
        out.write(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n")
        return
    out.write(f"command: {doc['command']}\n")
    for k, v in sorted(doc["inputs"].items()):
        out.write(f"  {k}: {v}\n")
    if doc.get("error"):
        out.write(f"error: {doc['error']}\n")
    elif doc["result"] is not None:
        out.write(f"result: {json.dumps(doc['result'], sort_keys=True)}\n")
    for chk in doc["checks"]:
        mark = "PASS" if chk["pass"] else "FAIL"
        suffix = f"  witness={json.dumps(chk.get('witness'))}" if not chk["pass"] else ""
        out.write(f"  [{mark}] {chk['name']}{suffix}\n")
    out.write(f"status: {doc['status']}\n")


def run(argv: List[str], out=None) -> int:
    out = out or sys.stdout
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        doc = args.handler(args)
    except (UsageError, ParseError) as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2
    except MeridianError as exc:
        doc = _result(args.command, {}, error=str(exc))
        _emit(doc, args.json, out)
        return 1
    _emit(doc, args.json, out)
    return {"ok": 0, "fail": 1, "error": 1}[doc["status"]]


def main() -> None:
    sys.exit(run(sys.argv[1:]))
