"""Command-line front end.

Every report is JSON on standard output.  Domain errors exit with status 1
and a JSON error object on standard error; usage errors exit with status 2.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Callable

from . import FORMAT_VERSION, __version__
from . import jsonio
from .affine import affine_obstructions, face_trace_sets, face_traces, has_exchange_property, induced_geometry
from .census import (
    as_geometry,
    brute_force_geometries,
    census,
    enumerate_with_audit,
    isomorphism,
    summarize,
)
from .core import (
    AxiomViolation,
    ConvexGeometry,
    GeometryError,
    InvariantError,
    check_axioms,
    conv,
    extreme,
    validate_geometry,
)
from .ordinal import CycleError, NotOrdinal, associated_order, enumerate_posets, ideals, lex_sum
from .resolution import compose, resolve
from .shrink import NotShrinkable, deresolve, in_window, shrink_report, shrinkable_sets

PROG = "convexgeom"

# Class counts stated for n <= 4; n = 5 is only ever compared against a supplied file.
KNOWN_COUNTS = {1: 1, 2: 2, 3: 6, 4: 34}


class CensusMismatch(GeometryError):
    pass


def _emit(obj: Any, out) -> None:
    out.write(obj if isinstance(obj, str) else jsonio.dumps(obj))


def _with_format(obj: dict) -> dict:
    return {"format": FORMAT_VERSION, **obj}


def _parse_set(g: ConvexGeometry, text: str | None) -> int:
    if text is None:
        return g.full
    labels = [t for t in (s.strip() for s in text.split(",")) if t]
    if len(set(labels)) != len(labels):
        raise GeometryError(f"--set repeats a label: {text!r}")
    return g.ground.mask(labels)


def _labels(g, mask: int) -> list[str]:
    return sorted(g.ground.labels_of(mask))


def _load_geometry(path: str) -> ConvexGeometry:
    return jsonio.geometry_from_json(jsonio.load(path))


def cmd_validate(args) -> dict:
    fam = jsonio.family_from_json(jsonio.load(args.file))
    try:
        g = validate_geometry(fam)
    except AxiomViolation as exc:
        exc.ground = fam.ground
        raise
    return _with_format({"valid": True, "n": g.n, "members": len(g)})


def cmd_hull(args) -> dict:
    g = _load_geometry(args.file)
    a = _parse_set(g, args.set)
    return _with_format({"set": _labels(g, a), "hull": _labels(g, conv(g, a))})


def cmd_extreme(args) -> dict:
    g = _load_geometry(args.file)
    a = _parse_set(g, args.set)
    return _with_format({"set": _labels(g, a), "extreme": _labels(g, extreme(g, a))})


def cmd_resolve(args) -> dict:
    spec = jsonio.spec_from_json(jsonio.load(args.file))
    out = jsonio.geometry_to_json(resolve(spec))
    out["trivial"] = spec.is_trivial
    return out


def cmd_compose(args) -> dict:
    spec = jsonio.spec_from_json(jsonio.load(args.file))
    fam = compose(spec)
    out = jsonio.family_to_json(fam)
    violations = check_axioms(fam)
    out["geometry"] = not violations
    out["violations"] = [_violation_json(fam, v) for v in violations]
    return out


def _verdict_json(g, v) -> dict:
    return {"holds": v.holds, "witness": None if v.witness is None else [_labels(g, m) for m in v.witness]}


PROPS = ("S1", "S2", "T1", "T2", "T3", "V1", "V2")


def cmd_shrinkable(args) -> dict | str:
    g = _load_geometry(args.file)
    rows = []
    for s in sorted((s for s in range(g.full + 1) if in_window(g, s)), key=lambda m: (m.bit_count(), _labels(g, m))):
        r = shrink_report(g, s)
        row = {"set": _labels(g, s), "shrinkable": r.shrinkable, "extreme": r.extremely_shrinkable}
        for p in PROPS:
            row[p] = _verdict_json(g, getattr(r, p))
        rows.append(row)
    if args.pretty:
        return _table(rows)
    return _with_format({"rows": rows})


def _table(rows: list[dict]) -> str:
    head = ["S", *PROPS, "shrinkable", "extreme"]
    body = [
        ["{" + ",".join(r["set"]) + "}", *("+" if r[p]["holds"] else "-" for p in PROPS),
         "yes" if r["shrinkable"] else "no", "yes" if r["extreme"] else "no"]
        for r in rows
    ]
    widths = [max(len(x) for x in col) for col in zip(head, *body)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(line, widths)).rstrip() for line in [head, *body]]
    return "\n".join(lines) + "\n"


def cmd_primitive(args) -> dict:
    g = _load_geometry(args.file)
    return _with_format({"primitive": not shrinkable_sets(g)})


def cmd_deresolve(args) -> dict:
    g = _load_geometry(args.file)
    try:
        return jsonio.spec_to_json(deresolve(g, _parse_set(g, args.set)))
    except NotShrinkable as exc:
        exc.ground = g.ground
        raise


def cmd_from_poset(args) -> dict:
    return jsonio.geometry_to_json(ideals(jsonio.poset_from_json(jsonio.load(args.file))))


def cmd_to_poset(args) -> dict:
    g = _load_geometry(args.file)
    try:
        return jsonio.poset_to_json(associated_order(g))
    except NotOrdinal as exc:
        exc.ground = g.ground
        raise


def cmd_lex_sum(args) -> dict:
    data = jsonio.load(args.file)
    if not isinstance(data, dict) or not isinstance(data.get("fibers"), dict) or "base" not in data:
        raise GeometryError("lex-sum input needs 'base' and 'fibers' posets")
    base = jsonio.poset_from_json(data["base"])
    fibers = {k: jsonio.poset_from_json(v) for k, v in data["fibers"].items()}
    p = lex_sum(base, fibers)
    if args.geometry:
        return jsonio.geometry_to_json(ideals(p))
    return jsonio.poset_to_json(p)


def cmd_from_points(args) -> dict:
    return jsonio.geometry_to_json(induced_geometry(jsonio.config_from_json(jsonio.load(args.file))))


def cmd_obstructions(args) -> dict:
    g = _load_geometry(args.file)
    findings = [{"kind": f.kind, "elements": list(f.elements), "message": f.message} for f in affine_obstructions(g)]
    return _with_format({"findings": findings, "exchange_property": has_exchange_property(g)})


def cmd_faces(args) -> dict:
    cfg = jsonio.config_from_json(jsonio.load(args.file))
    g = induced_geometry(cfg)
    key = lambda m: (m.bit_count(), _labels(g, m))  # noqa: E731
    return _with_format({
        "faces": [_labels(g, m) for m in sorted(face_traces(cfg), key=key)],
        "face_trace_sets": [
            _labels(g, m) for m in sorted(face_trace_sets(cfg, cross_check=True), key=key) if in_window(g, m)
        ],
    })


def _read_reference(path: str) -> dict[int, int]:
    data = jsonio.load(path)
    if isinstance(data, dict) and isinstance(data.get("counts"), dict):
        data = data["counts"]
    if not isinstance(data, dict):
        raise GeometryError("reference file must map n to a class count")
    try:
        return {int(k): int(v) for k, v in data.items()}
    except (TypeError, ValueError) as exc:
        raise GeometryError(f"reference file has a non-integer entry: {exc}") from exc


def cmd_enumerate(args) -> dict:
    n = args.n
    res = enumerate_with_audit(n)
    checks: dict[str, Any] = {"audit": res.audit_ok}
    problems = []
    if not res.audit_ok:
        problems.append(f"orbit sum {res.orbit_sum} != labeled count {res.labeled_count}")
    if n in KNOWN_COUNTS:
        checks["known_count"] = len(res.classes) == KNOWN_COUNTS[n]
        if not checks["known_count"]:
            problems.append(f"expected {KNOWN_COUNTS[n]} classes, found {len(res.classes)}")
    if args.check_oracle:
        oracle = brute_force_geometries(n)
        checks["oracle"] = oracle == res.classes
        if not checks["oracle"]:
            problems.append("generator and brute-force oracle disagree")
    if args.reference:
        ref = _read_reference(args.reference)
        checks["reference"] = None if n not in ref else ref[n] == len(res.classes)
        if checks["reference"] is False:
            problems.append(f"reference count {ref[n]} != {len(res.classes)}")
    out: dict[str, Any] = {
        "n": n,
        "classes": len(res.classes),
        "labeled": res.labeled_count,
        "checks": checks,
    }
    if args.classify:
        entries = census(n, jobs=args.jobs)
        summary = summarize(entries)
        posets = len(enumerate_posets(n))
        checks["ordinal_equals_posets"] = summary.ordinal == posets
        if summary.ordinal != posets:
            problems.append(f"{summary.ordinal} ordinal classes but {posets} posets")
        out["summary"] = {k: v for k, v in vars(summary).items() if k != "n"}
        out["entries"] = [
            {
                "geometry": jsonio.geometry_to_json(e.geometry()),
                "ordinal": e.ordinal,
                "primitive": e.primitive,
                "extremely_resolvable": e.extremely_resolvable,
                "atomistic": e.atomistic,
                "affine": e.affine,
                "shrinkable_count": e.shrinkable_count,
            }
            for e in entries
        ]
    else:
        out["geometries"] = [jsonio.geometry_to_json(as_geometry(c, n)) for c in res.classes]
    if problems:
        raise CensusMismatch("; ".join(problems))
    return _with_format(out)


def cmd_iso(args) -> dict:
    g, h = _load_geometry(args.first), _load_geometry(args.second)
    m = isomorphism(g, h)
    return _with_format({"isomorphic": m is not None, "mapping": m})


def cmd_lattice(args) -> dict | str:
    g = _load_geometry(args.file)
    members = sorted(g.sets, key=lambda m: (m.bit_count(), _labels(g, m)))
    covers = [
        (a, b) for a in members for b in members
        if a != b and a & b == a and not any(c not in (a, b) and a & c == a and c & b == c for c in members)
    ]
    if not args.dot:
        return _with_format({"covers": [[_labels(g, a), _labels(g, b)] for a, b in covers]})

    def node(m: int) -> str:
        return json.dumps("{" + ",".join(_labels(g, m)) + "}", ensure_ascii=False)

    lines = ["digraph convex_sets {", "  rankdir=BT;", "  node [shape=plaintext];"]
    lines += [f"  {node(m)};" for m in members]
    lines += [f"  {node(a)} -> {node(b)} [arrowhead=none];" for a, b in covers]
    lines.append("}")
    return "\n".join(lines) + "\n"


def _violation_json(fam, v) -> dict:
    return {"axiom": v.axiom, "witness": [_labels(fam, m) for m in v.witness], "message": v.message}


def _error_json(exc: Exception) -> dict:
    out: dict[str, Any] = {"format": FORMAT_VERSION, "error": type(exc).__name__, "message": str(exc)}
    ground = getattr(exc, "ground", None)

    def names(masks) -> list[list[str]] | None:
        if masks is None or ground is None:
            return None
        return [sorted(ground.labels_of(m)) for m in masks]

    if isinstance(exc, AxiomViolation):
        out["violations"] = [
            {"axiom": v.axiom, "witness": names(v.witness), "message": v.message} for v in exc.violations
        ]
    elif isinstance(exc, NotShrinkable):
        out["property"] = exc.property
        out["witness"] = names(exc.witness)
    elif isinstance(exc, NotOrdinal):
        out["witness"] = names(exc.witness)
    elif isinstance(exc, CycleError):
        out["cycle"] = exc.cycle
    return out


COMMANDS: dict[str, tuple[Callable, str]] = {
    "validate": (cmd_validate, "check a family against the convex geometry axioms"),
    "hull": (cmd_hull, "convex hull of a set"),
    "extreme": (cmd_extreme, "extreme elements of a set"),
    "resolve": (cmd_resolve, "resolution of a base into fibers"),
    "compose": (cmd_compose, "composition of a base with fibers, with axiom report"),
    "shrinkable": (cmd_shrinkable, "S/T/V verdicts for every candidate subset"),
    "primitive": (cmd_primitive, "whether a geometry has no shrinkable set"),
    "deresolve": (cmd_deresolve, "resolution spec with a given shrinkable set as fiber"),
    "from-poset": (cmd_from_poset, "ideal geometry of a poset"),
    "to-poset": (cmd_to_poset, "poset whose ideals form a union-closed geometry"),
    "lex-sum": (cmd_lex_sum, "lexicographic sum of posets"),
    "from-points": (cmd_from_points, "geometry induced on a rational point set"),
    "obstructions": (cmd_obstructions, "betweenness patterns ruling out affineness"),
    "faces": (cmd_faces, "face traces of a point configuration"),
    "enumerate": (cmd_enumerate, "all geometries on n elements up to isomorphism"),
    "iso": (cmd_iso, "isomorphism test between two geometries"),
    "lattice": (cmd_lattice, "covering relation of the lattice of convex sets"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=PROG, description="Finite convex geometries and their resolutions.")
    parser.add_argument("--version", action="version", version=f"{PROG} {__version__} (format {FORMAT_VERSION})")
    parser.add_argument("-o", "--output", help="write the report here instead of standard output")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    p = {name: sub.add_parser(name, help=text, description=text) for name, (_, text) in COMMANDS.items()}

    for name in ("validate", "hull", "extreme", "shrinkable", "primitive", "deresolve",
                 "to-poset", "obstructions", "lattice"):
        p[name].add_argument("file", help="geometry JSON")
    for name in ("resolve", "compose"):
        p[name].add_argument("file", help="resolution spec JSON")
    p["from-poset"].add_argument("file", help="poset JSON")
    p["lex-sum"].add_argument("file", help="JSON with a 'base' poset and 'fibers' keyed by base element")
    p["lex-sum"].add_argument("--geometry", action="store_true", help="emit the ideal geometry instead")
    for name in ("from-points", "faces"):
        p[name].add_argument("file", help="point configuration JSON")
    for name in ("hull", "extreme"):
        p[name].add_argument("--set", help="comma-separated labels (default: whole ground set)")
    p["deresolve"].add_argument("--set", required=True, help="comma-separated labels of the shrinkable set")
    p["shrinkable"].add_argument("--pretty", action="store_true", help="plain-text table instead of JSON")
    p["lattice"].add_argument("--dot", action="store_true", help="emit Graphviz DOT")
    p["iso"].add_argument("first")
    p["iso"].add_argument("second")
    e = p["enumerate"]
    e.add_argument("--n", type=int, required=True, help="number of elements (1 to 5)")
    e.add_argument("--classify", action="store_true", help="attach census flags to every class")
    e.add_argument("--check-oracle", action="store_true", help="compare with brute force over all families (n <= 4)")
    e.add_argument("--reference", help="JSON file mapping n to an expected class count")
    e.add_argument("--jobs", type=int, default=1, help="worker processes for classification")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    func, _ = COMMANDS[args.command]
    try:
        report = func(args)
    except (GeometryError, InvariantError) as exc:
        sys.stderr.write(jsonio.dumps(_error_json(exc)))
        return 1
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            _emit(report, fh)
    else:
        _emit(report, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
