"""``hardylab`` command line.

Exit codes: 0 success, 1 a reproduction claim failed, 2 unreadable or
malformed input, 3 domain or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .errors import FormatError, HardyLabError, UnsupportedShape
from .hardy_transforms import commutator_apply, hardy_transform
from .norm_engine import SearchConfig, bmo_norm_1d, cbmo_norm, herz_norm, lp_norm, weak_l1_norm
from .radial_calculus import dumps, from_dict
from . import reproduce

EXIT_FAILED = 1
EXIT_PARSE = 2
EXIT_DOMAIN = 3


class ParseError(Exception):
    pass


class ConfigError(Exception):
    pass


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def _read_function(path: str):
    doc = _read_json(path)
    try:
        return from_dict(doc)
    except FormatError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def _read_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        return _read_json(path)
    except ParseError as exc:
        raise ConfigError(str(exc)) from exc


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_apply(args) -> int:
    f = _read_function(args.input)
    if args.op == "hardy":
        g = hardy_transform(f)
    else:
        if args.symbol is None:
            raise ConfigError("--symbol is required for the commutator")
        g = commutator_apply(_read_function(args.symbol), f)
    _emit(dumps(g) + "\n", args.out)
    return 0


def cmd_norm(args) -> int:
    f = _read_function(args.input)
    try:
        search = SearchConfig.from_dict(_read_config(args.config).get("search", {}))
    except (FormatError, AttributeError) as exc:
        raise ConfigError(str(exc)) from exc
    if args.op == "lp":
        res = lp_norm(f, args.p)
    elif args.op == "weak1":
        res = weak_l1_norm(f)
    elif args.op == "herz":
        res = herz_norm(f, args.p, args.tolerance)
    elif args.op == "bmo":
        if f.dim != 1:
            raise UnsupportedShape("BMO is computed on the line only")
        res = bmo_norm_1d(f, search)
    else:
        res = cbmo_norm(f, args.q, search)
    _emit(json.dumps(res.to_dict(), sort_keys=True) + "\n", args.out)
    return 0


def _claims_csv(rows) -> str:
    buf = io.StringIO()
    cols = ["suite", "claim", "anchor", "value", "expected", "tolerance", "passed"]
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def _trace_csv(rows) -> str:
    buf = io.StringIO()
    cols = []
    for row in rows:
        for k in row:
            if k not in cols:
                cols.append(k)
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: reproduce._out(v) for k, v in row.items()})
    return buf.getvalue()


def cmd_reproduce(args) -> int:
    doc = _read_config(args.config)
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    doc = dict(doc)
    if args.seed is not None:
        doc["seed"] = args.seed
    if args.n is not None:
        doc["n"] = [args.n]
    if args.p is not None:
        doc["p"] = [args.p]
    if args.tolerance is not None:
        doc["tolerance"] = args.tolerance
    try:
        cfg = reproduce.Config.from_dict(doc)
    except FormatError as exc:
        raise ConfigError(str(exc)) from exc
    report, traces = reproduce.run(args.suite, cfg)
    if args.format == "csv":
        text = _claims_csv(report["claims"])
    else:
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    _emit(text, args.out)
    if args.out:
        base = Path(args.out)
        for name, rows in sorted(traces.items()):
            if rows:
                (base.parent / f"{base.stem}_{name}.csv").write_text(_trace_csv(rows))
    return 0 if report["passed"] else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hardylab", description="Exact Hardy-operator calculus and norm experiments.")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("apply", help="apply the Hardy operator or a commutator")
    a.add_argument("--input", required=True, help="function JSON ('-' for stdin)")
    a.add_argument("--op", choices=["hardy", "commutator"], default="hardy")
    a.add_argument("--symbol", help="symbol function JSON for the commutator")
    a.add_argument("--out")
    a.set_defaults(func=cmd_apply)

    nm = sub.add_parser("norm", help="compute a norm")
    nm.add_argument("--input", required=True)
    nm.add_argument("--op", choices=["lp", "weak1", "herz", "bmo", "cbmo"], required=True)
    nm.add_argument("--p", type=float, default=1.0)
    nm.add_argument("--q", type=float, default=2.0)
    nm.add_argument("--tolerance", type=float, default=1e-12)
    nm.add_argument("--config", help="JSON with an optional 'search' object")
    nm.add_argument("--out")
    nm.set_defaults(func=cmd_norm)

    r = sub.add_parser("reproduce", help="run a reproduction suite")
    r.add_argument("suite", choices=["all", *reproduce.SUITES])
    r.add_argument("--config")
    r.add_argument("--seed", type=int)
    r.add_argument("--n", type=int)
    r.add_argument("--p", type=float)
    r.add_argument("--tolerance", type=float)
    r.add_argument("--format", choices=["json", "csv"], default="json")
    r.add_argument("--out")
    r.set_defaults(func=cmd_reproduce)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"ParseError: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ConfigError as exc:
        print(f"ConfigError: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except HardyLabError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
