"""Command-line surface: info, stabilize, graph, fiber, ehrhart, verify.

Exit codes: 0 success, 1 usage error, 2 verification failure,
3 resource cap exceeded.  Output is deterministic for identical
invocations (fixed seeds, sorted iteration everywhere).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from itertools import product

from . import ehrhart as eh
from . import firing as fi
from . import polytope as pt
from . import rootsys as rsys
from .errors import (
    ClassificationError,
    DomainError,
    FitInconsistentError,
    NonGoodParamsError,
    PreconditionError,
    ResourceCapError,
)

USAGE_EXIT, VERIFY_EXIT, CAP_EXIT = 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # weights like "-3,2" must parse as positionals, not option strings;
        # none of our options look like negative numbers
        self._negative_number_matcher = re.compile(r"^-\d+(,-?\d+)*$")

    def error(self, message):  # argparse would exit(2); we want exit(1)
        raise UsageError(message)


def _parse_weight(rs, text: str):
    try:
        coords = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"cannot parse weight {text!r}") from None
    if len(coords) != rs.rank:
        raise UsageError(f"weight {text!r} has {len(coords)} coordinates, need {rs.rank}")
    return coords


def _parse_k(text: str) -> tuple[int, int]:
    try:
        parts = [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse firing parameter {text!r}") from None
    if len(parts) == 1:
        if parts[0] < 0:
            raise UsageError("firing parameter must be nonnegative")
        return parts[0], parts[0]
    if len(parts) == 2:
        if min(parts) < 0:
            raise UsageError("firing parameters must be nonnegative")
        return parts[0], parts[1]
    raise UsageError(f"firing parameter {text!r} must be k or k_short,k_long")


def _params(kind: str, ktext: str) -> fi.FiringParams:
    if kind not in ("sym", "tr", "central"):
        raise UsageError(f"unknown kind {kind!r} (expected sym, tr, or central)")
    ks, kl = _parse_k(ktext)
    return fi.FiringParams.make(kind, ks, kl)


def _system(spec: str) -> rsys.RootSystem:
    try:
        return rsys.from_spec(spec)
    except ClassificationError as exc:
        raise UsageError(str(exc)) from None


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _wfmt(w) -> str:
    return ",".join(str(c) for c in w)


# -- info ----------------------------------------------------------------------


def cmd_info(args) -> int:
    rs = _system(args.system)
    theta = fi.root_label(rs, rs.highest_root)
    theta_s = fi.root_label(rs, rs.highest_short_root)
    if args.format == "json":
        obj = {
            "system": rs.spec,
            "rank": rs.rank,
            "simply_laced": rs.simply_laced,
            "cartan": [list(r) for r in rs.cartan],
            "symmetrizer": list(rs.symmetrizer),
            "pos_roots": [list(r) for r in rs.pos_roots],
            "length_class": list(rs.length_class),
            "highest_root": rs.highest_root,
            "highest_short_root": rs.highest_short_root,
            "coxeter_number": rs.coxeter_number,
            "index_of_connection": rs.index_of_connection,
            "minuscule_nodes": sorted(rs.minuscule),
            "subgroup_C_size": len(rsys.subgroup_C(rs)),
        }
        _emit(json.dumps(obj, indent=2, sort_keys=True) + "\n", args.out)
        return 0
    lines = [
        f"system {rs.spec}  rank {rs.rank}  simply laced: {'yes' if rs.simply_laced else 'no'}",
        "cartan matrix:",
    ]
    lines += ["  " + " ".join(f"{x:3d}" for x in row) for row in rs.cartan]
    lines.append(f"positive roots ({len(rs.pos_roots)}):")
    for i, _ in enumerate(rs.pos_roots):
        lines.append(f"  [{i}] {fi.root_label(rs, i)} ({rs.length_class[i]})")
    lines.append(f"coxeter number h = {rs.coxeter_number}")
    lines.append(f"index of connection f = {rs.index_of_connection}")
    lines.append(f"highest root = {theta}; highest short root = {theta_s}")
    minus = ",".join(str(i) for i in sorted(rs.minuscule)) or "none"
    lines.append(f"minuscule nodes: {minus}")
    lines.append(f"|C| = {len(rsys.subgroup_C(rs))}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


# -- stabilize -------------------------------------------------------------------


def cmd_stabilize(args) -> int:
    rs = _system(args.system)
    params = _params(args.kind, args.k)
    weight = _parse_weight(rs, args.weight)
    if params.kind == "central":
        raise UsageError("central firing does not stabilize; use `graph` to explore")
    good = params.is_good(rs)
    if not good and not args.force:
        raise UsageError(
            f"{params.label()} is not good on {rs.spec}; rerun with --force"
        )
    policy = "random" if args.seed is not None else "first"
    sink, steps = fi.stabilize_trace(rs, weight, params, policy, args.seed)
    label = fi.eta_inverse(rs, sink, params)
    lines = []
    if not good:
        lines.append("warning: parameters are not good; result has unverified confluence")
    lines.append(f"sink {_wfmt(sink)}")
    lines.append(f"label {_wfmt(label) if label is not None else 'none'}")
    lines.append(f"steps {steps}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


# -- graph -----------------------------------------------------------------------


_SVG_COLORS = ("#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _svg_render(rs, graph: fi.FiringGraph) -> str:
    if rs.rank != 2:
        raise UsageError("svg rendering requires a rank-2 system")
    b = [
        [rs.symmetrizer[j] * rs.cartan[i][j] for j in range(2)] for i in range(2)
    ]
    e1 = (math.sqrt(b[0][0]), 0.0)
    off = b[0][1] / e1[0]
    e2 = (off, math.sqrt(b[1][1] - off * off))

    def xy(w):
        r = rs.root_coords(w)
        x = float(r[0]) * e1[0] + float(r[1]) * e2[0]
        y = float(r[0]) * e1[1] + float(r[1]) * e2[1]
        return x, -y  # svg y grows downward

    reps = rsys.minuscule_weights(rs)

    def coset(w):
        for i, om in enumerate(reps):
            diff = tuple(a - b_ for a, b_ in zip(w, om))
            if all(x.denominator == 1 for x in rs.root_coords(diff)):
                return i
        return 0

    pts = {v: xy(v) for v in graph.vertices}
    xs = [p[0] for p in pts.values()] or [0.0]
    ys = [p[1] for p in pts.values()] or [0.0]
    pad, scale = 20.0, 40.0
    w = (max(xs) - min(xs)) * scale + 2 * pad
    h = (max(ys) - min(ys)) * scale + 2 * pad

    def at(v):
        x, y = pts[v]
        return (x - min(xs)) * scale + pad, (y - min(ys)) * scale + pad

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.1f}" height="{h:.1f}" '
        f'viewBox="0 0 {w:.1f} {h:.1f}">',
        "<defs><marker id='tip' markerWidth='7' markerHeight='7' refX='6' refY='3' "
        "orient='auto'><path d='M0,0 L6,3 L0,6 z' fill='#444'/></marker></defs>",
    ]
    for s, t, _ in graph.edges:
        x1, y1 = at(graph.vertices[s])
        x2, y2 = at(graph.vertices[t])
        # stop the arrow a bit short of the target disc
        dx, dy = x2 - x1, y2 - y1
        norm = math.hypot(dx, dy) or 1.0
        x2 -= dx / norm * 6.0
        y2 -= dy / norm * 6.0
        out.append(
            f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}" '
            f'stroke="#444" stroke-width="1" marker-end="url(#tip)"/>'
        )
    for v in graph.vertices:
        x, y = at(v)
        color = _SVG_COLORS[coset(v) % len(_SVG_COLORS)]
        sink = fi.is_sink(rs, v, graph.params)
        fill = color if sink else "white"
        out.append(
            f'<circle cx="{x:.1f}" cy="{y:.1f}" r="4" fill="{fill}" '
            f'stroke="{color}" stroke-width="1.5"><title>{_wfmt(v)}</title></circle>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def cmd_graph(args) -> int:
    rs = _system(args.system)
    params = _params(args.kind, args.k)
    region = fi.coord_box(rs, args.box)
    graph = fi.build_graph(rs, region, params)
    if args.format == "json":
        _emit(graph.to_json() + "\n", args.out)
    elif args.format == "dot":
        _emit(graph.to_dot(rs), args.out)
    elif args.format == "svg":
        _emit(_svg_render(rs, graph), args.out)
    else:
        raise UsageError(f"unknown graph format {args.format!r}")
    return 0


# -- fiber -----------------------------------------------------------------------


def cmd_fiber(args) -> int:
    rs = _system(args.system)
    params = _params(args.kind, args.k)
    label = _parse_weight(rs, args.label)
    if params.kind == "central":
        raise UsageError("central firing has no stabilization fibers")
    if not params.is_good(rs) and not args.force:
        raise UsageError(
            f"{params.label()} is not good on {rs.spec}; rerun with --force"
        )
    pts = fi.fiber(rs, label, params, force=args.force)
    if args.format == "json":
        obj = {
            "system": rs.spec,
            "label": list(label),
            "params": {"kind": params.kind, "k_short": params.k_short, "k_long": params.k_long},
            "size": len(pts),
            "weights": [list(v) for v in pts],
        }
        _emit(json.dumps(obj, indent=2, sort_keys=True) + "\n", args.out)
    else:
        lines = [f"fiber of {_wfmt(label)} under {params.label()}: {len(pts)} weights"]
        lines += ["  " + _wfmt(v) for v in pts]
        _emit("\n".join(lines) + "\n", args.out)
    return 0


# -- ehrhart ----------------------------------------------------------------------


def cmd_ehrhart(args) -> int:
    rs = _system(args.system)
    if args.kind not in ("sym", "tr"):
        raise UsageError("ehrhart fitting needs kind sym or tr")
    label = _parse_weight(rs, args.label)
    rep = eh.fit_ehrhart_like(rs, label, args.kind, args.degree)
    if args.format == "json":
        _emit(json.dumps(rep.to_json_obj(), indent=2, sort_keys=True) + "\n", args.out)
    else:
        lines = [
            f"{rs.spec} {args.kind} label {_wfmt(label)}: {rep.polynomial}",
            f"integer coefficients: {rep.integer}; nonnegative: {rep.nonnegative}",
        ]
        if rep.notes:
            lines.append("notes: " + ", ".join(rep.notes))
        _emit("\n".join(lines) + "\n", args.out)
    return 0


# -- verify suites -----------------------------------------------------------------

SUITES = (
    "confluence",
    "sinks",
    "traverse",
    "nonescape",
    "symmetry",
    "decompose",
    "iterate",
    "tables",
    "conjectures",
)


def _suite_confluence(rs, args, say):
    bad = 0
    for k in range(args.k_max + 1):
        box = fi.coord_box(rs, 2 * k + 2)
        for kind in ("sym", "tr"):
            params = fi.FiringParams.make(kind, k, k)
            fails = sum(
                not fi.check_confluence_random(rs, w, params, args.trials, args.seed)
                for w in box
            )
            say(
                f"{'ok' if not fails else 'FAIL'} - {rs.spec} {params.label()} "
                f"box {2*k+2}: {len(box)} weights x {args.trials} orders, {fails} disagreements"
            )
            bad += fails
    if not rs.simply_laced:
        # no guarantee without goodness; observed behaviour is reported only
        for kl in range(1, args.k_max + 1):
            params = fi.FiringParams.make("sym", 0, kl)
            box = fi.coord_box(rs, 2 * kl + 2)
            fails = sum(
                not fi.check_confluence_random(rs, w, params, args.trials, args.seed)
                for w in box
            )
            say(
                f"note - {rs.spec} {params.label()} (not good): "
                f"{fails} of {len(box)} weights disagreed across orders"
            )
    return bad == 0


def _suite_sinks(rs, args, say):
    ok = True
    for k in range(args.k_max + 1):
        box = fi.coord_box(rs, 2 * k + 3)
        for kind in ("sym", "tr"):
            params = fi.FiringParams.make(kind, k, k)
            sinks = {w for w in box if fi.is_sink(rs, w, params)}
            expected = set()
            for w in box:
                lab = fi.eta_inverse(rs, w, params)
                if lab is None:
                    continue
                if kind == "sym" and not fi.sym_sink_labels_valid(rs, lab):
                    continue
                expected.add(w)
            good = sinks == expected
            say(
                f"{'ok' if good else 'FAIL'} - {rs.spec} {params.label()} sinks: "
                f"{len(sinks)} found, {len(expected)} expected from labels"
            )
            ok = ok and good
    return ok


def _suite_traverse(rs, args, say):
    mism = 0
    total = 0
    for lam in product(range(args.cmax + 1), repeat=rs.rank):
        for root in rs.pos_roots:
            total += 1
            if pt.traverse_bruteforce(rs, lam, root) != pt.traverse_formula(rs, lam, root):
                mism += 1
                say(f"FAIL - {rs.spec} traverse mismatch at {lam} along {root}")
    say(f"{'ok' if not mism else 'FAIL'} - {rs.spec} traverse: {total} cases, {mism} mismatches")
    return mism == 0


def _edge_escapes(rs, params, center) -> list[tuple]:
    perm = pt.enumerate_perm(rs, center)
    out = []
    for mu in perm.points:
        for w, j in fi.neighbors(rs, mu, params, "out"):
            if w not in perm:
                out.append((mu, w, j))
    return out


def _suite_nonescape(rs, args, say):
    ok = True
    for k in range(args.k_max + 1):
        params = fi.FiringParams.make("sym", k, k)
        for bits in product((0, 1), repeat=rs.rank):
            center = fi.eta(rs, bits, params)
            esc = _edge_escapes(rs, params, center)
            if esc:
                ok = False
                say(f"FAIL - {rs.spec} {params.label()} escapes {center}: {esc[:3]}")
        say(f"ok - {rs.spec} {params.label()} non-escaping on {2**rs.rank} permutohedra")
    if rs.spec == "B2":
        params = fi.FiringParams.make("sym", 0, 1)  # not good
        center = fi.rho_of_k(rs, params)
        esc = _edge_escapes(rs, params, center)
        alpha1 = rs.pos_root_weights[rs.root_index((1, 0))]
        expected = (rs.zero(), alpha1, rs.root_index((1, 0)))
        if expected in esc:
            say("ok - B2 sym k=(0,1) reproduces the known escaping edge 0 -> a1")
        else:
            say("FAIL - B2 sym k=(0,1) does not reproduce the known escaping edge")
            ok = False
    return ok


def _suite_symmetry(rs, args, say):
    ok = True
    for k in range(args.k_max + 1):
        for kind in ("sym", "tr"):
            params = fi.FiringParams.make(kind, k, k)
            rep = fi.graph_symmetry_check(rs, params, 2 * k + 2)
            say(
                f"{'ok' if rep.passed else 'FAIL'} - {rs.spec} {params.label()}: "
                f"{rep.maps_checked} maps on {rep.num_edges} edges, "
                f"{len(rep.violations)} violations"
            )
            ok = ok and rep.passed
    return ok


def _suite_decompose(rs, args, say):
    ok = True
    for k in range(1, args.k_max + 1):
        params = fi.FiringParams.make("sym", k, k)
        rep = eh.decomposition_check(rs, fi.coord_box(rs, args.box), params)
        status = "ok" if rep.passed else "FAIL"
        extra = "" if rep.tr_asserted else " (truncated identity reported only)"
        say(
            f"{status} - {rs.spec} k={k} decomposition on {rep.num_weights} weights: "
            f"{len(rep.sym_failures)} sym fails, {len(rep.tr_failures)} tr fails{extra}"
        )
        ok = ok and rep.passed
    return ok


def _suite_iterate(rs, args, say):
    if not rs.simply_laced:
        raise UsageError("iterate suite applies to simply laced systems only")
    ok = True
    labels = [rs.zero()] + [rs.fundamental_weight(i) for i in range(1, rs.rank + 1)]
    labels.append(rs.rho())
    for lam in labels:
        rep = eh.iterate_check(rs, lam, args.k_max)
        good = rep.passed
        say(
            f"{'ok' if good else 'FAIL'} - {rs.spec} iterate {_wfmt(lam)}: "
            f"counts {list(rep.counts)} vs fitted {list(rep.fitted)}"
        )
        ok = ok and good
    return ok


def _suite_tables(rs, args, say):
    ok = True
    if rs.spec not in eh.REFERENCE_SYM_POLYS:
        raise UsageError(f"no reference table for {rs.spec}")
    nvars = 1 if rs.simply_laced else 2
    for lam in sorted(eh.REFERENCE_SYM_POLYS[rs.spec]):
        rep = eh.fit_ehrhart_like(rs, lam, "sym")
        want = eh.reference_poly(eh.REFERENCE_SYM_POLYS[rs.spec], nvars, lam)
        good = rep.polynomial == want
        say(f"{'ok' if good else 'FAIL'} - {rs.spec} sym {_wfmt(lam)}: {rep.polynomial}")
        ok = ok and good
    if rs.spec in eh.REFERENCE_TR_POLYS:
        for lam in sorted(eh.REFERENCE_TR_POLYS[rs.spec]):
            rep = eh.fit_ehrhart_like(rs, lam, "tr")
            want = eh.reference_poly(eh.REFERENCE_TR_POLYS[rs.spec], nvars, lam)
            good = rep.polynomial == want and rep.polynomial.constant_term() == 1
            say(f"{'ok' if good else 'FAIL'} - {rs.spec} tr {_wfmt(lam)}: {rep.polynomial}")
            ok = ok and good
    return ok


def _suite_conjectures(rs, args, say):
    sym_rows = eh.conjecture_scan(rs, eh.full_dim_labels(rs, dominant_only=True), "sym")
    for row in sym_rows:
        say(
            f"note - {rs.spec} sym {_wfmt(row.label)}: {row.polynomial} "
            f"integer={row.integer} nonnegative={row.nonnegative}"
        )
    tr_rows = eh.conjecture_scan(rs, eh.full_dim_labels(rs, dominant_only=False), "tr")
    for row in tr_rows:
        say(
            f"note - {rs.spec} tr {_wfmt(row.label)}: {row.polynomial} "
            f"integer={row.integer} nonnegative={row.nonnegative} "
            f"constant={row.constant_term}"
        )
    sym_checks = eh.tr_symmetry_scan(
        rs, eh.full_dim_labels(rs), fi.FiringParams.make("tr", 1, 1)
    )
    for lam, idx, agrees in sym_checks:
        say(
            f"note - {rs.spec} tr k=1 fiber of {_wfmt(lam)} under C[{idx}]: "
            f"{'respects' if agrees else 'breaks'} the affine symmetry"
        )
    say(f"ok - {rs.spec} scanned {len(sym_rows)} sym and {len(tr_rows)} tr rows")
    return True  # findings are data, never a failure


def cmd_verify(args) -> int:
    rs = _system(args.system)
    if rs.rank > 4 and not args.force:
        raise UsageError(
            f"verification suites enumerate exhaustively and default to rank <= 4; "
            f"pass --force to run on {rs.spec}"
        )
    lines: list[str] = []

    def say(msg):
        lines.append(msg)

    runner = {
        "confluence": _suite_confluence,
        "sinks": _suite_sinks,
        "traverse": _suite_traverse,
        "nonescape": _suite_nonescape,
        "symmetry": _suite_symmetry,
        "decompose": _suite_decompose,
        "iterate": _suite_iterate,
        "tables": _suite_tables,
        "conjectures": _suite_conjectures,
    }[args.suite]
    passed = runner(rs, args, say)
    lines.append(f"suite {args.suite} on {rs.spec}: {'PASS' if passed else 'FAIL'}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0 if passed else VERIFY_EXIT


# -- entry point --------------------------------------------------------------------


def build_parser() -> _Parser:
    p = _Parser(prog="rootfire", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="write output to a file instead of stdout")
        sp.add_argument("--max-points", type=int, help="enumeration cap override")

    sp = sub.add_parser("info", help="print root-system data")
    sp.add_argument("system")
    sp.add_argument("--format", default="text", choices=("text", "json"))
    common(sp)

    sp = sub.add_parser("stabilize", help="fire a weight until stable")
    sp.add_argument("system")
    sp.add_argument("kind", help="sym or tr")
    sp.add_argument("k", help="k or k_short,k_long")
    sp.add_argument("weight", help="comma-separated coordinates")
    sp.add_argument("--seed", type=int, help="use a seeded-random firing order")
    sp.add_argument("--force", action="store_true", help="allow non-good parameters")
    common(sp)

    sp = sub.add_parser("graph", help="export the firing graph on a box")
    sp.add_argument("system")
    sp.add_argument("kind", help="sym, tr, or central")
    sp.add_argument("k", help="k or k_short,k_long")
    sp.add_argument("--box", type=int, default=3, help="coordinate box bound")
    sp.add_argument("--format", default="dot", choices=("dot", "json", "svg"))
    common(sp)

    sp = sub.add_parser("fiber", help="list weights with a given stabilization label")
    sp.add_argument("system")
    sp.add_argument("kind")
    sp.add_argument("k")
    sp.add_argument("label")
    sp.add_argument("--force", action="store_true")
    sp.add_argument("--format", default="text", choices=("text", "json"))
    common(sp)

    sp = sub.add_parser("ehrhart", help="fit a stabilization-count polynomial")
    sp.add_argument("system")
    sp.add_argument("kind", help="sym or tr")
    sp.add_argument("label")
    sp.add_argument("--degree", type=int, help="degree bound (default: rank)")
    sp.add_argument("--format", default="text", choices=("text", "json"))
    common(sp)

    sp = sub.add_parser("verify", help="run a named verification suite")
    sp.add_argument("suite", choices=SUITES)
    sp.add_argument("system")
    sp.add_argument("--k", dest="k_max", type=int, default=2, help="largest k checked")
    sp.add_argument("--kmax", dest="k_max_alias", type=int, help=argparse.SUPPRESS)
    sp.add_argument("--trials", type=int, default=25)
    sp.add_argument("--seed", type=int, default=2024)
    sp.add_argument("--box", type=int, default=4)
    sp.add_argument("--cmax", type=int, default=3)
    sp.add_argument("--force", action="store_true", help="lift the rank <= 4 default")
    common(sp)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    saved_cap = os.environ.get("ROOTFIRE_MAX_POINTS")
    try:
        args = parser.parse_args(argv)
        if getattr(args, "max_points", None):
            os.environ["ROOTFIRE_MAX_POINTS"] = str(args.max_points)
        if getattr(args, "k_max_alias", None) is not None:
            args.k_max = args.k_max_alias
        handler = {
            "info": cmd_info,
            "stabilize": cmd_stabilize,
            "graph": cmd_graph,
            "fiber": cmd_fiber,
            "ehrhart": cmd_ehrhart,
            "verify": cmd_verify,
        }[args.command]
        return handler(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except (ClassificationError, DomainError, PreconditionError, NonGoodParamsError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except FitInconsistentError as exc:
        print(f"fit failed verification: {exc}", file=sys.stderr)
        return VERIFY_EXIT
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return CAP_EXIT
    finally:
        if saved_cap is None:
            os.environ.pop("ROOTFIRE_MAX_POINTS", None)
        else:
            os.environ["ROOTFIRE_MAX_POINTS"] = saved_cap


if __name__ == "__main__":
    sys.exit(main())
