"""Command-line front end.

    echeck check FILE... [--library DIR] [--trace] [--json] [--jobs N]
    echeck closure STATE_FILE
    echeck decide STATE_FILE
    echeck explain STATE_FILE LITERAL

Exit status: 0 when everything passes, 1 when a proof (or query) fails,
2 on unreadable input or a parse error.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .core import EError
from .library import Loader, search_path

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def _display(path) -> str:
    """Path relative to the working directory when it lies below it."""
    p = Path(path)
    try:
        return str(p.resolve().relative_to(Path.cwd().resolve()))
    except ValueError:
        return str(p)


def _record(v, trace: bool) -> dict:
    rec = {"file": _display(v.filename) if v.filename else "", "theorem": v.name,
           "verdict": "pass" if v.ok else "fail", "status": v.status, "seconds": round(v.seconds, 4)}
    if v.error is not None:
        e = v.error
        rec["error"] = {"line": e.line, "col": e.col, "step": e.step, "message": e.message}
    else:
        rec["error"] = None
    if trace:
        rec["trace"] = list(v.trace)
    return rec


def _check_one(path, dirs, trace) -> tuple[list, list]:
    """Load one file with its imports; returns (records in load order, error records)."""
    loader = Loader(dirs=dirs, trace=trace)
    try:
        loader.load(path)
    except EError as e:
        fn = _display(e.filename) if e.filename else _display(path)
        loc = f"{fn}:{e.line}:{e.col}" if e.line is not None else fn
        done = [[_display(p), [_record(v, trace) for v in vs]] for p, vs in loader.verdicts.items()]
        return done, [{"file": fn, "verdict": "error", "message": e.message, "where": loc}]
    done = [[_display(p), [_record(v, trace) for v in vs]] for p, vs in loader.verdicts.items()]
    return done, []


def _text_lines(rec) -> list[str]:
    name = rec["theorem"]
    if rec["verdict"] == "pass":
        out = [f"  {name}: {rec['status']}"]
    else:
        e = rec["error"] or {}
        where = rec["file"]
        if e.get("line") is not None:
            where += f":{e['line']}:{e['col']}"
        step = f" [{e['step']}]" if e.get("step") else ""
        out = [f"  {name}: FAILED at {where}{step}: {e.get('message', '')}"]
    for t in rec.get("trace", []):
        out.append(f"    {t}")
    return out


def cmd_check(args) -> int:
    dirs = search_path(args.library or [])
    paths = list(args.paths)
    if args.jobs and args.jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            results = list(ex.map(_check_one, paths, [dirs] * len(paths), [args.trace] * len(paths)))
    else:
        results = [_check_one(p, dirs, args.trace) for p in paths]
    status = EXIT_OK
    seen = set()
    for done, errors in results:
        for fn, recs in done:
            if fn in seen:
                continue
            seen.add(fn)
            if not args.json:
                print(fn)
            for rec in recs:
                if rec["verdict"] != "pass":
                    status = max(status, EXIT_FAIL)
                if args.json:
                    print(json.dumps(rec, sort_keys=True))
                else:
                    print("\n".join(_text_lines(rec)))
        for err in errors:
            status = EXIT_ERROR
            if args.json:
                print(json.dumps(err, sort_keys=True))
            print(f"{err['where']}: {err['message']}", file=sys.stderr)
    return status


def _load_state(path):
    """The single `state { ... }` block of a file, as (objects, literals)."""
    from .parser import parse
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise EError(f"cannot read file: {e.strerror}", filename=path) from None
    script = parse(text, path)
    if len(script.states) != 1:
        raise EError(f"expected exactly one state block, found {len(script.states)}", filename=path)
    st = script.states[0]
    return list(st.objects), list(st.literals)


def _diagram(objects, lits):
    from .diagram import DiagramState
    return DiagramState(objects, [l for l in lits if l.is_diagram])


def cmd_closure(args) -> int:
    objects, lits = _load_state(args.state)
    d = _diagram(objects, lits)
    if d.inconsistent:
        print("inconsistent")
        return EXIT_OK
    for line in d.sorted_lines():
        print(line)
    return EXIT_OK


def cmd_decide(args) -> int:
    from .oracle import InstanceTooLarge, full_decide
    _, lits = _load_state(args.state)
    try:
        print(full_decide(lits))
    except InstanceTooLarge as e:
        print(f"{_display(args.state)}: {e.message}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_explain(args) -> int:
    from .diagram import explain
    from .parser import parse_literal
    objects, lits = _load_state(args.state)
    goals = parse_literal(args.literal, objects)
    d = _diagram(objects, lits)
    for g in goals:
        try:
            steps = explain(d, g)
        except EError as e:
            print(f"{_display(args.state)}: {e.message}", file=sys.stderr)
            return EXIT_FAIL
        if not steps:
            print(f"{g}  (given)")
        for s in steps:
            print(s)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="echeck", description="Check proofs written in system E.")
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("check", help="check proof scripts")
    c.add_argument("paths", nargs="+")
    c.add_argument("--library", action="append", metavar="DIR",
                   help="directory searched for imports (repeatable; E_LIBRARY_PATH is also used)")
    c.add_argument("--trace", action="store_true", help="print the steps of each checked proof")
    c.add_argument("--json", action="store_true", help="one JSON object per theorem")
    c.add_argument("--jobs", type=int, default=1, help="check files in parallel")
    c.set_defaults(func=cmd_check)
    s = sub.add_parser("closure", help="list the direct consequences of a state")
    s.add_argument("state")
    s.set_defaults(func=cmd_closure)
    s = sub.add_parser("decide", help="decide consistency of a small state")
    s.add_argument("state")
    s.set_defaults(func=cmd_decide)
    s = sub.add_parser("explain", help="show how a literal follows from a state")
    s.add_argument("state")
    s.add_argument("literal")
    s.set_defaults(func=cmd_explain)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except EError as e:
        from .parser import render_diagnostic
        if e.filename:
            e.filename = _display(e.filename)
        fn = getattr(args, "state", None)
        print(render_diagnostic(e, _display(fn) if fn else None), file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
