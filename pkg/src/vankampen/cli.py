"""The ``vk`` command line.

Exit status: 0 on success, 1 on domain errors (invalid diagram, failed
certificate, oracle gaps), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .certify import certify
from .combing import (
    TameFunction,
    build_crossing_dag,
    obstruction_level,
    tameness_profile,
    variation_envelope,
    violating_edges,
)
from .diagram import (
    DiagramError,
    PlanarDiagram,
    bdiam,
    boundary_word,
    coarse_distance_field,
    fmt_q,
    geodesically_bounded,
    idiam,
    simply_bounded,
    unbased_idiam,
    validate_diagram,
)
from .geodesics import TreeError, any_spanning_tree, bfs_geodesic_tree
from .icicle import INSIDE_A, IcicleError, all_icicles, classify_pair, flow_function
from .oracle import Oracle, OracleError, SearchBudget, subdiagram_profile
from .presentation import Presentation, PresentationError, Word, parse_presentation
from .render import RenderError, RenderStyle, render_svg
from .surgery import PadContext, SurgeryError, prop5_pipeline
from .taming import OracleGap, main_f_argument, tame

DOMAIN_ERRORS = (
    DiagramError,
    PresentationError,
    TreeError,
    IcicleError,
    OracleError,
    OracleGap,
    SurgeryError,
    RenderError,
    AssertionError,
    OSError,
    json.JSONDecodeError,
    KeyError,
)


class DomainFailure(Exception):
    """Raised by a subcommand to exit 1 with a message."""


def _presentation(args) -> Presentation | None:
    path = getattr(args, "presentation", None)
    if not path:
        return None
    return parse_presentation(Path(path).read_text(encoding="utf-8"), allow_free=getattr(args, "allow_free", False))


def _require_presentation(args) -> Presentation:
    p = _presentation(args)
    if p is None:
        raise DomainFailure("--presentation is required")
    return p


def _diagram(args, p: Presentation | None) -> PlanarDiagram:
    return validate_diagram(p, json.loads(Path(args.diagram).read_text(encoding="utf-8")))


def _word(p: Presentation, text: str) -> Word:
    return p.parse_word(text) if text.strip() else Word(())


def _oracle(args, p: Presentation) -> Oracle:
    return Oracle(p, SearchBudget(args.max_faces, None, getattr(args, "time_cap", None)))


def _tree(args, d: PlanarDiagram):
    return any_spanning_tree(d) if getattr(args, "any_tree", False) else bfs_geodesic_tree(d)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# -- subcommands ------------------------------------------------------------------


def cmd_validate(args) -> int:
    p = _presentation(args)
    d = _diagram(args, p)
    print(f"valid: {d.vertex_count} vertices, {d.edge_count} edges, {d.face_count} faces")
    print(f"boundary word: {boundary_word(d)}")
    return 0


def cmd_analyze(args) -> int:
    p = _presentation(args)
    d = _diagram(args, p)
    fld = coarse_distance_field(d)
    report = {
        "vertices": list(fld.vertex),
        "edges": [[e, q] for e, q in sorted(fld.edges().items())],
        "faces": fld.faces(),
        "idiam": idiam(d),
        "unbased_idiam": unbased_idiam(d),
        "bdiam": bdiam(d),
        "simply_bounded": simply_bounded(d),
        "geodesically_bounded": geodesically_bounded(d),
        "boundary_word": boundary_word(d).compact(),
    }
    if args.report == "distances":
        report = {k: report[k] for k in ("vertices", "edges", "faces")}
    elif args.report == "idiam":
        report = {k: report[k] for k in ("idiam", "unbased_idiam")}
    elif args.report == "bdiam":
        report = {k: report[k] for k in ("bdiam", "simply_bounded", "geodesically_bounded")}
    if args.json or args.report:
        print(json.dumps(report, sort_keys=True))
    else:
        print(f"boundary word: {report['boundary_word']}")
        print("vertex distances: " + " ".join(fmt_q(q) for q in fld.vertex))
        print(f"IDiam {fmt_q(report['idiam'])}  unbased {fmt_q(report['unbased_idiam'])}  bdiam {fmt_q(report['bdiam'])}")
        print(f"simply bounded: {report['simply_bounded']}  geodesically bounded: {report['geodesically_bounded']}")
    return 0


def cmd_tree(args) -> int:
    d = _diagram(args, _presentation(args))
    t = _tree(args, d)
    print(json.dumps({**t.to_dict(), "tree_edges": sorted(t.tree_edges)}, sort_keys=True))
    return 0


def cmd_icicles(args) -> int:
    d = _diagram(args, _presentation(args))
    t = _tree(args, d)
    ics = all_icicles(d, t)
    theta = flow_function(d, t, ics)
    rows = []
    for e, ic in ics.items():
        rows.append(
            {
                "edge": e,
                "flow_cell": theta[e],
                "body_faces": sorted(ic.body_faces),
                "body_face_count": len(ic.body_faces),
                "tail": len(ic.tail),
            }
        )
    pairs = {}
    keys = sorted(ics)
    for i, a in enumerate(keys):
        for b in keys[i + 1:]:
            c = classify_pair(ics[a], ics[b])
            pairs[c] = pairs.get(c, 0) + 1
    # Hasse diagram of nesting: child -> its smallest strict container
    hasse = []
    for a in keys:
        ups = [b for b in keys if b != a and classify_pair(ics[a], ics[b]) == INSIDE_A]
        ups = [b for b in ups if not any(c != b and classify_pair(ics[c], ics[b]) == INSIDE_A for c in ups)]
        hasse += [[a, b] for b in ups]
    print(json.dumps({"icicles": rows, "pair_classes": pairs, "hasse": hasse}, sort_keys=True))
    return 1 if "partial_overlap" in pairs or "inconsistent" in pairs else 0


def cmd_comb(args) -> int:
    d = _diagram(args, _presentation(args))
    t = _tree(args, d)
    ics = all_icicles(d, t)
    dag = build_crossing_dag(d, t, flow_function(d, t, ics))
    prof = tameness_profile(d, t, dag, ics)
    if args.report == "variation":
        env = variation_envelope(d, t, dag)
        out = {"variation": [[e, lo, hi] for e, (lo, hi) in env.items()]}
    elif args.report == "obstruction":
        if not args.f_table:
            raise DomainFailure("--report obstruction needs --f")
        f = TameFunction.from_dict(json.loads(Path(args.f_table).read_text(encoding="utf-8")))
        n = obstruction_level(prof, f)
        out = {"N": n, "violators": violating_edges(prof, f, n)}
    else:
        out = prof.to_dict()
        if args.f_table:
            f = TameFunction.from_dict(json.loads(Path(args.f_table).read_text(encoding="utf-8")))
            out["N"] = obstruction_level(prof, f)
    print(json.dumps(out, sort_keys=True))
    return 0


def cmd_prop5(args) -> int:
    p = _require_presentation(args)
    w = _word(p, args.word)
    ctx = PadContext(_oracle(args, p))
    d = prop5_pipeline(w, ctx)
    _emit(d.to_json() + "\n", args.out)
    for line in ctx.log:
        print(line, file=sys.stderr)
    return 0


def cmd_oracle(args) -> int:
    p = _require_presentation(args)
    o = _oracle(args, p)
    q, target = args.query, args.target
    if q in ("idiam-word", "sb", "idiam-fn", "subprofile") and target is None:
        raise DomainFailure(f"'{q}' needs an argument")
    if q == "mp":
        r = o.compute_M_P()
        print(f"M_P = {fmt_q(r.value)} ({r.value} quarters), exhaustive={r.exhaustive}")
    elif q == "idiam-word":
        r = o.idiam_of_word(_word(p, target))
        if r.value is None:
            raise DomainFailure("no filling within the budget")
        print(f"IDiam = {fmt_q(r.value)} ({r.value} quarters), exhaustive={r.exhaustive}")
    elif q == "sb":
        r = o.simply_bounded_data(_word(p, target))
        val = "none" if r.value is None else f"{fmt_q(r.value)} ({r.value} quarters)"
        print(f"IDiam_sb = {val}, exhaustive={r.exhaustive}")
        if r.diagram is not None and args.out:
            Path(args.out).write_text(r.diagram.to_json() + "\n", encoding="utf-8")
    elif q == "idiam-fn":
        for n, r in o.idiam_function(int(target)).items():
            print(f"IDiam({n}) = {fmt_q(r.value)} ({r.value} quarters), exhaustive={r.exhaustive}")
    elif q == "fillings":
        r = o.fillings(_word(p, target or ""))
        print(f"{len(r)} fillings, exhaustive={r.exhaustive}")
        if args.out:
            Path(args.out).write_text(json.dumps([dd.to_dict() for dd in r.diagrams], sort_keys=True) + "\n", encoding="utf-8")
    elif q == "subprofile":
        d = validate_diagram(p, json.loads(Path(target).read_text(encoding="utf-8")))
        a = subdiagram_profile(d, "subsets")
        b = subdiagram_profile(d, "growth")
        if a != b:
            raise DomainFailure(f"strategies disagree: {a} vs {b}")
        print(json.dumps({str(k): v for k, v in a.items()}, sort_keys=True))
    return 0


def cmd_tame(args) -> int:
    p = _require_presentation(args)
    w = _word(p, args.word)
    o = _oracle(args, p)
    start = _diagram(args, p) if args.start else None
    if start is not None and not args.assume_tables:
        need = main_f_argument(idiam(start))
        if need > args.table_len:
            raise DomainFailure(
                f"start diagram needs IDiam up to length {need} but --table-len is {args.table_len}; "
                "raise it or pass --assume-tables"
            )
    cert = tame(w, p, o, start, table_len=args.table_len, assume_tables=args.assume_tables)
    _emit(cert.to_json(), args.out)
    print(f"iterations: {cert.iterations}; N trace: {[s.N for s in cert.trace]}", file=sys.stderr)
    return 0


def cmd_certify(args) -> int:
    res = certify(Path(args.certificate).read_text(encoding="utf-8"))
    if res:
        print("certificate accepted")
        return 0
    print(f"certificate rejected: {res.reason} {json.dumps(res.witness, sort_keys=True)}")
    return 1


def cmd_render(args) -> int:
    d = _diagram(args, _presentation(args))
    hl = args.highlight
    if hl and hl.startswith("icicle:"):
        hl = ("icicle", int(hl.split(":", 1)[1]))
    svg = render_svg(d, RenderStyle(iterations=args.iterations, highlight=hl))
    _emit(svg, args.out)
    return 0


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="vk", description="van Kampen diagram toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name: str, fn, help_: str, diagram: bool = False, presentation: bool = True):
        sp = sub.add_parser(name, help=help_)
        if presentation:
            sp.add_argument("--presentation", help="presentation file (gens:/rels: lines)")
            sp.add_argument("--allow-free", action="store_true", help="accept an empty relator list")
        if diagram:
            sp.add_argument("--diagram", required=True, help="diagram JSON file")
        sp.set_defaults(func=fn)
        return sp

    add("validate", cmd_validate, "check every diagram invariant", diagram=True)
    sp = add("analyze", cmd_analyze, "distances, diameters and boundary properties", diagram=True)
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--report", choices=["distances", "idiam", "bdiam"])
    for name, fn, help_ in (
        ("tree", cmd_tree, "breadth-first geodesic spanning tree"),
        ("icicles", cmd_icicles, "icicles, flow function and nesting Hasse diagram"),
        ("comb", cmd_comb, "tameness profile of the tree-respecting combing"),
    ):
        sp = add(name, fn, help_, diagram=True)
        sp.add_argument("--any-tree", action="store_true", help="use a non-geodesic spanning tree (experiments only)")
    sp.add_argument("--f", "--f-table", dest="f_table", help="JSON f table")
    sp.add_argument("--report", choices=["profile", "obstruction", "variation"], default="profile")

    budget = argparse.ArgumentParser(add_help=False)
    budget.add_argument("--max-faces", "--budget", dest="max_faces", type=int, default=4)
    budget.add_argument("--time-cap", type=float, default=None)

    sp = sub.add_parser("prop5", parents=[budget], help="simply and geodesically bounded filling of a word")
    sp.add_argument("--presentation", required=True)
    sp.add_argument("--word", required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_prop5)

    sp = sub.add_parser("oracle", parents=[budget], help="exhaustive filling search")
    sp.add_argument("--presentation", required=True)
    sp.add_argument("query", choices=["idiam-word", "idiam-fn", "mp", "sb", "subprofile", "fillings"])
    sp.add_argument("target", nargs="?", help="word (idiam-word, sb, fillings), length (idiam-fn) or diagram file (subprofile)")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("tame", parents=[budget], help="run the taming loop and write a certificate")
    sp.add_argument("--presentation", required=True)
    sp.add_argument("--word", required=True)
    sp.add_argument("--start", dest="diagram", help="start diagram JSON")
    sp.add_argument("--assume-tables", action="store_true", help="use lower-bound IDiam entries past --table-len")
    sp.add_argument("--table-len", type=int, default=6)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_tame, start=None)

    sp = sub.add_parser("certify", help="independently check a certificate")
    sp.add_argument("certificate")
    sp.set_defaults(func=cmd_certify)

    sp = add("render", cmd_render, "draw a diagram as SVG", diagram=True)
    sp.add_argument("--highlight", help="tree | heatmap | icicle:<edge>")
    sp.add_argument("--iterations", type=int, default=None, help="averaging sweeps instead of an exact solve")
    sp.add_argument("--out")
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "func", None) is cmd_tame:
        args.start = args.diagram
    try:
        return args.func(args)
    except DomainFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DOMAIN_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
