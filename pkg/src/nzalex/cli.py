"""``nz-alex`` command-line front end.

Exit codes: 0 success, 1 check failure, 2 I/O or parse error, 3 structural
(not ordered, not orderable, wrong boundary or first Betti number).
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import golden
from .dual_complex import presentation
from .errors import (InputError, NoKernel, NotOrderable, NotOrdered, NZError,
                     RankDeficient, StructuralError)
from .group_algebra import AlphaMap, word_str
from .l2 import cyclic_quotient, detB_profile, load_quotient
from .laurent import mat_to_json, normalize
from .nz import (alexander_polynomial, check_augmentation, check_symplectic,
                 fox_boundary_crosscheck, key_identity_check, mod2_report,
                 prepare, wada_alexander)
from .triangulation import KIND_NAMES, Triangulation, find_ordering, load_triangulation
from .twisted import fig8_geometric_rep, load_representation, twisted_alexander

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_STRUCTURAL = 0, 1, 2, 3


def _exit_code(exc: Exception) -> int:
    if isinstance(exc, (InputError, OSError)):
        return EXIT_INPUT
    if isinstance(exc, (StructuralError, RankDeficient, NoKernel)):
        return EXIT_STRUCTURAL
    return EXIT_CHECK


# -- helpers ---------------------------------------------------------------

def _digest(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _load(args, need_ordered: bool = True) -> tuple[Triangulation, list[str]]:
    tri = load_triangulation(args.file)
    warnings = []
    if need_ordered and not tri.ordered:
        if not args.order:
            raise NotOrdered(f"{args.file} is not ordered; rerun with --order")
        tri = find_ordering(tri)
        warnings.append("input relabeled by the first vertex ordering found")
    return tri, warnings


def _context(args, tri):
    alpha = AlphaMap.parse(args.alpha) if args.alpha else None
    return prepare(tri, meridian=args.meridian, alpha=alpha)


def _gen_table(ctx) -> list[dict]:
    return [{"name": g.name, "index": g.index, "source": list(g.source), "target": list(g.target),
             "eliminated": g.name in ctx.dual.tree, "alpha": ctx.alpha[g.name]}
            for g in ctx.dual.generators]


def _curves_json(ctx, kinds) -> dict:
    return {k: [{"word": word_str(c), "alpha": a}
                for c, a in zip(ctx.curves[k].components, ctx.curves[k].alphas)] for k in kinds}


def _poly(p):
    return None if p is None else normalize(p).to_json()


# -- commands ---------------------------------------------------------------

def cmd_info(args) -> tuple[dict, list[str], bool]:
    tri, _ = _load(args, need_ordered=False)
    try:
        orderable = tri.ordered or find_ordering(tri) is not None
    except NotOrderable:
        orderable = False
    out = {"num_tets": tri.num_tets,
           "edge_classes": [{"index": ec.index, "valence": ec.valence,
                             "members": [[t, list(e)] for t, e, _ in ec.members]} for ec in tri.edge_classes],
           "valences": [ec.valence for ec in tri.edge_classes],
           "ordered": tri.ordered,
           "orderable": orderable,
           "orientable": tri.orientations is not None,
           "orientations": list(tri.orientations) if tri.orientations else None,
           "num_cusps": tri.num_cusps,
           "vertex_link_euler_characteristics": list(tri.vertex_link_euler_characteristics)}
    return out, [], True


def cmd_order(args):
    tri = load_triangulation(args.file)
    ordered = find_ordering(tri)
    text = ordered.to_text()
    if args.output:
        Path(args.output).write_text(text)
    return {"already_ordered": tri.ordered, "triangulation": ordered.to_json(), "text": text}, [], True


def cmd_curves(args):
    tri, warnings = _load(args)
    ctx = _context(args, tri)
    kinds = [args.kind] if args.kind else list(KIND_NAMES)
    return {"generators": _gen_table(ctx), "curves": _curves_json(ctx, kinds)}, warnings, True


def _elem_matrix_json(m) -> list:
    return [[repr(x) for x in row] for row in m]


def cmd_nz(args):
    tri, warnings = _load(args)
    ctx = _context(args, tri)
    out = {"generators": _gen_table(ctx),
           "note": "matrices are representatives up to left multiplication by a diagonal matrix"}
    if args.spec == "raw":
        tm = ctx.twisted
        out["matrices"] = {name: _elem_matrix_json(getattr(tm, name)) for name in ("G", "Gp", "Gpp", "A", "B")}
    else:
        out["matrices"] = {"A": mat_to_json(ctx.A_alpha), "B": mat_to_json(ctx.B_alpha)}
        out["matrices_text"] = {"A": [[str(x) for x in row] for row in ctx.A_alpha],
                                "B": [[str(x) for x in row] for row in ctx.B_alpha]}
    return out, warnings, True


def cmd_alexander(args):
    tri, warnings = _load(args)
    ctx = _context(args, tri)
    res = alexander_polynomial(ctx, check_knot=args.check_knot)
    gens, rels = presentation(ctx.tri, ctx.dual)
    checks = dict(res.checks)
    checks["symplectic"] = check_symplectic(ctx)
    checks["augmentation_ok"] = check_augmentation(ctx)
    key = key_identity_check(ctx)
    checks["key_identity_ok"] = not key
    if key:
        warnings.extend(key)
    checks["fox_boundary"] = fox_boundary_crosscheck(ctx)
    if not res.degenerate:
        checks["mod2"] = mod2_report(ctx, res.alexander)
        wada = wada_alexander(gens, rels, ctx.alpha)
        checks["wada_oracle"] = {"alexander": _poly(wada), "ok": normalize(wada) == res.alexander}
    out = {"generators": _gen_table(ctx),
           "presentation": {"generators": gens, "relators": [word_str(r) for r in rels]},
           "alexander": _poly(res.alexander),
           "alexander_text": None if res.alexander is None else str(res.alexander),
           "detB": _poly(res.detB),
           "detB_text": str(normalize(res.detB)),
           "degenerate": res.degenerate,
           "z_alphas": res.z_alphas,
           "curves": _curves_json(ctx, KIND_NAMES),
           "checks": checks}
    verdicts = [v for v in res.checks.values() if isinstance(v, bool)]
    verdicts += [checks["augmentation_ok"], checks["key_identity_ok"]]
    verdicts += [checks[k]["ok"] for k in ("symplectic", "fox_boundary", "mod2", "wada_oracle") if k in checks]
    ok = all(verdicts)
    return out, warnings, ok


def cmd_twisted(args):
    tri, warnings = _load(args)
    ctx = _context(args, tri)
    if args.builtin == "fig8-geometric":
        rho = fig8_geometric_rep()
    elif args.rep:
        rho = load_representation(args.rep)
    else:
        raise InputError("twisted needs --rep FILE or --builtin fig8-geometric")
    res = twisted_alexander(ctx, rho)
    out = res.to_json()
    out["representation_dim"] = rho.dim
    return out, warnings, all(res.checks.values())


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def cmd_l2(args):
    tri, warnings = _load(args)
    ctx = _context(args, tri)
    quotients = [cyclic_quotient(ctx.alpha, m) for m in _ints(args.cyclic)]
    for path in args.quotient or []:
        quotients.append(load_quotient(path))
    prof = detB_profile(ctx, _floats(args.t), quotients)
    out = prof.to_json()
    out["note"] = "estimates under the listed finite quotients; not an L2 torsion value"
    return out, warnings + prof.warnings, True


def cmd_selftest(args):
    results = golden.run_all(args.fixtures)
    ok = all(r["ok"] or r["known_discrepancy"] for r in results)
    return {"results": results}, [], ok


COMMANDS = {"info": cmd_info, "order": cmd_order, "curves": cmd_curves, "nz": cmd_nz,
            "alexander": cmd_alexander, "twisted": cmd_twisted, "l2": cmd_l2, "selftest": cmd_selftest}


# -- text rendering -----------------------------------------------------------

def _poly_text(d) -> str:
    if d is None:
        return "-"
    from .laurent import LaurentPoly
    return str(LaurentPoly.from_json(d))


def _failed_checks(checks: dict, prefix: str = "") -> list[str]:
    out = []
    for k, v in checks.items():
        if isinstance(v, dict):
            out += _failed_checks(v, f"{prefix}{k}.")
        elif isinstance(v, bool) and not v:
            out.append(prefix + k)
    return out


def _render_text(command: str, out: dict) -> str:
    lines = []
    if command == "selftest":
        for r in out["results"]:
            status = "PASS" if r["ok"] else ("KNOWN" if r["known_discrepancy"] else "FAIL")
            lines.append(f"[{status}] {r['id']}. {r['name']}: {r['detail']}")
    elif command == "info":
        lines.append(f"tetrahedra: {out['num_tets']}")
        lines.append(f"edge valences: {out['valences']}")
        lines.append(f"cusps: {out['num_cusps']}, orientable: {out['orientable']}")
        lines.append(f"ordered: {out['ordered']}, orderable: {out['orderable']}")
    elif command == "order":
        lines.append(out["text"].rstrip("\n"))
    elif command == "curves":
        for kind, comps in out["curves"].items():
            for c in comps:
                lines.append(f"{kind}: {c['word']}  alpha = {c['alpha']}")
    elif command == "nz":
        mats = out.get("matrices_text", out["matrices"])
        suffix = "_alpha" if "matrices_text" in out else ""
        for name, m in mats.items():
            lines.append(f"{name}{suffix}:")
            lines.extend("  [" + ", ".join(row) + "]" for row in m)
    elif command == "alexander":
        lines.append(f"Delta = {out['alexander_text']}" if not out["degenerate"] else "degenerate: det B = 0")
        lines.append(f"det B = {out['detB_text']}")
        lines.append(f"alpha(Z_i) = {out['z_alphas']}")
        for r in out["presentation"]["relators"]:
            lines.append(f"relator: {r}")
        failed = _failed_checks(out["checks"])
        lines.append("checks: " + ("all passed" if not failed else "FAILED " + ", ".join(failed)))
    elif command == "twisted":
        if out["degenerate"]:
            lines.append("degenerate: det B = 0")
        else:
            lines.append(f"det B = {_poly_text(out['detB'])}")
            lines.append(f"curve factor product = {_poly_text(out['divisor'])}")
            if out["rational"]:
                lines.append("twisted Alexander = det B / curve factor product (not a polynomial)")
            else:
                lines.append(f"twisted Alexander = {_poly_text(out['twisted_alexander'])}")
        lines.append(f"alpha(Z_i) = {out['z_alphas']}")
    elif command == "l2":
        lines.append(f"alpha(Z_i) = {out['z_alphas']}; {out['note']}")
        for row in out["profile"]:
            for label, e in zip(out["quotients"], row["estimates"]):
                flag = f"  (kernel {e['kernel_dim']})" if e["kernel_dim"] else ""
                lines.append(f"t = {row['t']:<8g} {label:<14} {e['log_det']}{flag}")
    return "\n".join(lines)


# -- entry point ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a machine-readable report")
    common.add_argument("--meridian", help="generator sent to +1 by alpha")
    common.add_argument("--alpha", help="explicit alpha, e.g. g2=0,g3=-1,g4=1")
    common.add_argument("--order", action="store_true", help="relabel an unordered input first")

    parser = argparse.ArgumentParser(prog="nz-alex", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("info", "order", "curves", "nz", "alexander", "twisted", "l2"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("file")
        if name == "order":
            p.add_argument("--output", help="write the ordered triangulation here")
        if name == "curves":
            p.add_argument("--kind", choices=KIND_NAMES)
        if name == "nz":
            p.add_argument("--spec", choices=("alpha", "raw"), default="alpha")
        if name == "alexander":
            p.add_argument("--check-knot", action="store_true", help="also require Delta(1) = +-1")
        if name == "twisted":
            p.add_argument("--rep", help="representation JSON file")
            p.add_argument("--builtin", choices=("fig8-geometric",))
        if name == "l2":
            p.add_argument("--t", default="0.5,1,2", help="comma-separated positive reals")
            p.add_argument("--cyclic", default="64,256,1024", help="comma-separated cyclic degrees")
            p.add_argument("--quotient", action="append", help="permutation quotient JSON (repeatable)")
    p = sub.add_parser("selftest", parents=[common])
    p.add_argument("--fixtures", help="directory with fig8.tri and k8_2.tri (default: bundled)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    report = {"command": args.command}
    if hasattr(args, "file"):
        report["input"] = {"file": args.file}
    try:
        if hasattr(args, "file"):
            report["input"]["sha256"] = _digest(args.file)
        out, warnings, ok = COMMANDS[args.command](args)
    except (NZError, OSError, ValueError) as exc:
        code = _exit_code(exc) if not isinstance(exc, ValueError) else EXIT_INPUT
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        if args.json:
            print(json.dumps(report, indent=2))
        print(f"nz-alex: {type(exc).__name__}: {exc}", file=sys.stderr)
        return code
    report["ok"] = ok
    report["outputs"] = out
    report["warnings"] = warnings
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print(_render_text(args.command, out))
        for w in warnings:
            print(f"warning: {w}", file=sys.stderr)
        if not ok:
            print("nz-alex: some checks failed", file=sys.stderr)
    return EXIT_OK if ok else EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
