"""Command-line interface: ``greedytree <subcommand> ...``.

Exit codes: 0 yes/valid, 1 no/invalid, 2 uncertain, 64 usage error,
65 unreadable or malformed input.  With ``--json`` the only thing written
to stdout is one JSON document matching :data:`JSON_SCHEMA`.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from typing import IO, Sequence

from .angles import as_fraction, format_degrees
from .decide import decide
from .embed import embed, parse_drawing, verify, write_drawing
from .opening import annotate_subtree
from .tree import RootedSubtree, Tree, TreeError, enumerate_trees, parse_tree, random_tree
from .wheel import Verdict, WheelInstance, decide_membership

EXIT_OK = 0
EXIT_NO = 1
EXIT_UNCERTAIN = 2
EXIT_USAGE = 64
EXIT_PARSE = 65

JSON_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["command", "status", "exit_code"],
    "properties": {
        "command": {"enum": ["decide", "angle", "wheel", "draw", "verify", "enumerate", None]},
        "status": {"enum": ["yes", "no", "uncertain", "valid", "invalid", "ok", "failed", "error"]},
        "exit_code": {"enum": [EXIT_OK, EXIT_NO, EXIT_UNCERTAIN, EXIT_USAGE, EXIT_PARSE]},
        "error": {"type": "string"},
        "result": {"type": ["object", "array"]},
    },
    "allOf": [
        {"if": {"properties": {"status": {"const": "error"}}}, "then": {"required": ["error"]},
         "else": {"required": ["result"]}},
    ],
}


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with status 2
        raise UsageError(f"{self.prog}: {message}")


def _read_text(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load_tree(path: str) -> Tree:
    try:
        return parse_tree(_read_text(path))
    except TreeError as exc:
        raise InputError(f"{path}: {exc}") from None


def _write_text(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from None


def _parse_phis(text: str) -> list:
    try:
        return [as_fraction(p) for p in text.split(",") if p.strip()]
    except (ValueError, ZeroDivisionError):
        raise InputError(f"--phis: cannot parse {text!r} as comma-separated angles") from None


# --------------------------------------------------------------------------
# subcommands; each returns (exit code, status, result dict, text lines)


def _cmd_decide(args) -> tuple[int, str, dict, list[str]]:
    t = _load_tree(args.tree)
    dec = decide(t)
    lines = [f"verdict: {dec.verdict.value}", f"rule: {dec.rule}"]
    if dec.hub is not None:
        lines.append(f"hub: {dec.hub}")
        lines.append("branch bounds: " + ", ".join(f"{u}={b}" for u, b in dec.hub_bounds.items()))
    if dec.verdict is Verdict.NO and dec.certificate:
        lines.append("certificate: " + json.dumps(dec.certificate, default=str, sort_keys=True))
    if args.explain:
        lines.append("trace:")
        lines += [f"  {s['node']}\t{s['case']}\t{s['bound']}" for s in (x.as_dict() for x in dec.trace)]
        if dec.wheel is not None:
            lines += ["wheel:"] + ["  " + line for line in _wheel_lines(dec.wheel.as_dict())]
    result = dec.as_dict()
    if not args.explain:
        result.pop("trace", None)
    return dec.verdict.exit_code, dec.verdict.value, result, lines


def _cmd_angle(args) -> tuple[int, str, dict, list[str]]:
    t = _load_tree(args.tree)
    if args.root not in t:
        raise UsageError(f"--root {args.root!r} is not a node of the tree")
    anchor = args.anchor
    if anchor is None:
        if t.degree(args.root) != 1:
            raise UsageError(f"--root {args.root!r} has degree {t.degree(args.root)}; pass --anchor")
        anchor = t.neighbors(args.root)[0]
    elif anchor not in t.neighbors(args.root):
        raise UsageError(f"--anchor {anchor!r} is not adjacent to {args.root!r}")
    bound, ann = annotate_subtree(RootedSubtree(t, args.root, anchor))
    result = {"root": args.root, "anchor": anchor, "bound": str(bound), "kind": bound.kind.value,
              "value": format_degrees(bound.value), "visits": ann.visits}
    lines = [str(bound)]
    if args.explain:
        result["trace"] = [s.as_dict() for s in ann.trace]
        lines += [f"  {s.node}\t{s.label}\t{s.bound}" for s in ann.trace]
    return EXIT_OK, "ok", result, lines


def _wheel_lines(w: dict) -> list[str]:
    lines = [f"verdict: {w['verdict']}", f"proof: {w['proof']}",
             "instance: {" + ", ".join(w["instance"]) + "}"]
    a = w.get("assignment")
    if a:
        lines.append("order: " + " ".join(str(i) for i in a["order"]))
        for name in ("alpha", "beta", "gamma"):
            lines.append(f"{name}: " + " ".join(f"{x:.12g}" for x in a[name]))
        lines.append(f"eps: {a['eps']:.12g}")
        lines.append(f"omega: {a['omega']:.3e}")
        lines.append(f"source: {a['source']}")
    for note in w.get("attempts", []):
        lines.append(f"attempt: {note}")
    return lines


def _cmd_wheel(args) -> tuple[int, str, dict, list[str]]:
    phis = _parse_phis(args.phis)
    try:
        inst = WheelInstance(phis)
    except ValueError as exc:
        raise InputError(f"--phis: {exc}") from None
    res = decide_membership(inst)
    w = res.as_dict()
    return res.verdict.exit_code, res.verdict.value, w, _wheel_lines(w)


def _cmd_draw(args) -> tuple[int, str, dict, list[str]]:
    t = _load_tree(args.tree)
    dec = decide(t)
    if dec.verdict is not Verdict.YES:
        msg = f"no drawing: verdict {dec.verdict.value} ({dec.rule})"
        return dec.verdict.exit_code, dec.verdict.value, {"verdict": dec.verdict.value, "rule": dec.rule}, [msg]
    d = embed(t, dec, shrink=args.shrink)
    if d is None:
        msg = "construction failed: no verified drawing within the retry budget"
        return EXIT_NO, "failed", {"verdict": "yes", "rule": dec.rule, "drawing": None}, [msg]
    rep = verify(d)
    text = write_drawing(d)
    if args.output not in (None, "-"):
        _write_text(args.output, text)
    if args.svg:
        from .svg import SvgOptions, export_svg

        opts = SvgOptions(bisectors=args.bisectors, cones=args.cones, hub=dec.hub)
        _write_text(args.svg, export_svg(d, opts))
    if args.png:
        from .plotting import plot_drawing

        plot_drawing(d, args.png, bisectors=args.bisectors, cones=args.cones, hub=dec.hub)
    result = {"verdict": "yes", "rule": dec.rule, "hub": dec.hub,
              "coords": {v: list(d.coords[v]) for v in t.nodes}, "verify": rep.as_dict()}
    lines = [text.rstrip("\n")] if args.output in (None, "-") else [
        f"wrote {args.output}: {len(t)} nodes, worst slack {rep.worst_margin:.3g}"]
    return EXIT_OK, "ok", result, lines


def _cmd_verify(args) -> tuple[int, str, dict, list[str]]:
    t = _load_tree(args.tree)
    try:
        d = parse_drawing(_read_text(args.drawing), t)
    except ValueError as exc:
        raise InputError(f"{args.drawing}: {exc}") from None
    rep = verify(d)
    status = "valid" if rep.ok else "invalid"
    lines = [f"greedy: {'yes' if rep.ok else 'no'}",
             f"pairwise: {rep.greedy_pairwise}", f"bisector: {rep.greedy_bisector}",
             f"worst slack: {rep.worst_margin:.6g}"]
    lines += ["violation: " + " ".join(map(str, v)) for v in rep.violations[:20]]
    return (EXIT_OK if rep.ok else EXIT_NO), status, rep.as_dict(), lines


def _cmd_enumerate(args) -> tuple[int, str, dict, list[str]]:
    if args.random:
        rng = random.Random(args.seed)
        trees = [random_tree(args.n, rng, max_degree=args.max_degree) for _ in range(args.random)]
    else:
        try:
            trees = list(enumerate_trees(args.n, args.max_degree))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    rows = []
    for t in trees:
        dec = decide(t)
        edges = ";".join(f"{u}-{v}" for u, v in sorted(t.edges))
        rows.append({"n": len(t), "max_degree": t.max_degree(), "verdict": dec.verdict.value,
                     "rule": dec.rule, "edges": edges})
    if args.png:
        from .plotting import plot_verdict_counts

        plot_verdict_counts([(r["n"], r["verdict"]) for r in rows], args.png)
    lines = ["n\tmax_degree\tverdict\trule\tedges"]
    lines += [f"{r['n']}\t{r['max_degree']}\t{r['verdict']}\t{r['rule']}\t{r['edges']}" for r in rows]
    counts = {v.value: sum(r["verdict"] == v.value for r in rows) for v in Verdict}
    return EXIT_OK, "ok", {"rows": rows, "counts": counts}, lines


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="greedytree", description="Greedy drawings of trees in the plane.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def common(sp):
        sp.add_argument("--json", action="store_true", help="write a single JSON document to stdout")

    sp = sub.add_parser("decide", help="decide whether a tree has a greedy drawing")
    sp.add_argument("tree", help="edge-list file ('u v' per line), '-' for stdin")
    sp.add_argument("--explain", action="store_true", help="include the annotation trace and wheel certificate")
    common(sp)
    sp.set_defaults(func=_cmd_decide)

    sp = sub.add_parser("angle", help="tight opening-angle bound of a rooted subtree")
    sp.add_argument("tree")
    sp.add_argument("--root", required=True, help="the root node (a leaf unless --anchor is given)")
    sp.add_argument("--anchor", help="neighbour of the root where the subtree starts")
    sp.add_argument("--explain", action="store_true")
    common(sp)
    sp.set_defaults(func=_cmd_angle)

    sp = sub.add_parser("wheel", help="decide a wheel-polygon instance")
    sp.add_argument("--phis", required=True, help="comma-separated corner bounds in degrees, e.g. 180,120,105")
    common(sp)
    sp.set_defaults(func=_cmd_wheel)

    sp = sub.add_parser("draw", help="construct and verify a greedy drawing")
    sp.add_argument("tree")
    sp.add_argument("--shrink", type=float, default=1e-2, help="initial child scale, in (0, 0.1]")
    sp.add_argument("-o", "--output", help="drawing file ('-' or omitted: stdout)")
    sp.add_argument("--svg", help="also write an SVG picture")
    sp.add_argument("--png", help="also write a PNG picture (matplotlib)")
    sp.add_argument("--bisectors", action="store_true", help="overlay edge bisectors in pictures")
    sp.add_argument("--cones", action="store_true", help="overlay branch cones at the hub in pictures")
    common(sp)
    sp.set_defaults(func=_cmd_draw)

    sp = sub.add_parser("verify", help="check a drawing for greediness")
    sp.add_argument("drawing", help="'id x y' per line")
    sp.add_argument("--tree", required=True)
    common(sp)
    sp.set_defaults(func=_cmd_verify)

    sp = sub.add_parser("enumerate", help="decide all (or random) trees of a size; TSV output")
    sp.add_argument("n", type=int)
    sp.add_argument("--max-degree", type=int)
    sp.add_argument("--random", type=int, default=0, metavar="K", help="K random trees instead of all")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--png", help="also write a bar chart of verdict counts")
    common(sp)
    sp.set_defaults(func=_cmd_enumerate)
    return p


def _validate(args) -> None:
    if args.command == "draw":
        if args.json and args.output == "-":
            raise UsageError("draw: --json and '-o -' both write to stdout")
        if not 0 < args.shrink <= 0.1:
            raise UsageError("draw: --shrink must lie in (0, 0.1]")
    if args.command == "enumerate":
        if args.n < 1:
            raise UsageError("enumerate: n must be positive")
        if args.random < 0:
            raise UsageError("enumerate: --random must be non-negative")


def run(argv: Sequence[str] | None = None, stdout: IO[str] | None = None, stderr: IO[str] | None = None) -> int:
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    want_json = "--json" in argv
    command = None
    try:
        args = build_parser().parse_args(argv)
        command = args.command
        if args.verbose:
            logging.basicConfig(level=logging.INFO, stream=err, format="%(name)s: %(message)s")
        _validate(args)
        code, status, result, lines = args.func(args)
    except UsageError as exc:
        return _fail(out, err, want_json, command, EXIT_USAGE, str(exc))
    except InputError as exc:
        return _fail(out, err, want_json, command, EXIT_PARSE, str(exc))
    if args.json:
        doc = {"command": command, "status": status, "exit_code": code, "result": result}
        out.write(json.dumps(doc, indent=2, default=str, sort_keys=True) + "\n")
    else:
        out.write("\n".join(lines) + "\n")
    return code


def _fail(out, err, want_json: bool, command, code: int, message: str) -> int:
    if want_json:
        doc = {"command": command, "status": "error", "exit_code": code, "error": message}
        out.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        err.write(f"error: {message}\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
