"""Command-line interface.

JSON results go to stdout, diagnostics to stderr.  Exit codes: 0 success,
1 domain error (not rigid, not a calligraph, invalid graph), 2 numerical
failure, 3 usage error (bad flags, unreadable or unparsable input).
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .cache import CacheStore
from .calligraph import CalligraphError, validate_calligraph
from .fallback.counter import FallbackConfig, FallbackError, run_fallback
from .graph import GraphError, ParseError, detect_format, parse_marked_graph
from .recursion import Engine, EngineConfig, EngineError, NotMinimallyRigidError
from .rigidity import RigidityError, is_minimally_rigid, is_rigid_spanning
from .splits import SplitError, nontrivial_splits

EXIT_OK, EXIT_DOMAIN, EXIT_NUMERIC, EXIT_USAGE = 0, 1, 2, 3

log = logging.getLogger("scount")

ENV = {
    "seed": ("SCOUNT_SEED", int),
    "trials": ("SCOUNT_TRIALS", int),
    "jobs": ("SCOUNT_JOBS", int),
    "tol": ("SCOUNT_TOL", float),
    "multihom": ("SCOUNT_MULTIHOM", lambda s: s.strip().lower() in ("1", "true", "yes", "on")),
}
DEFAULTS = {"seed": 0, "trials": 3, "jobs": 1, "tol": 1e-10, "multihom": False}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="master seed (env SCOUNT_SEED)")
    common.add_argument("--trials", type=int, default=None, help="independent fallback trials (env SCOUNT_TRIALS)")
    common.add_argument("--jobs", type=int, default=None, help="worker threads (env SCOUNT_JOBS)")
    common.add_argument("--tol", type=float, default=None, help="endpoint tolerance (env SCOUNT_TOL)")
    common.add_argument("--multihom", action="store_true", default=None,
                        help="multi-homogeneous start system (env SCOUNT_MULTIHOM)")
    common.add_argument("--cache", default=None, help="JSON-lines cache file (env SCOUNT_CACHE)")
    common.add_argument("--trace", action="store_true", help="include the full recursion tree")
    common.add_argument("--format", choices=("json", "graph6"), default=None, help="input format (auto-detected)")
    common.add_argument("-v", "--verbose", action="count", default=0)

    p = _Parser(prog="scount", description="Count realizations of minimally rigid graphs on the sphere.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, text in (("count", "realization count of a minimally rigid graph"),
                       ("class", "class (a, b, c) of a marked calligraph"),
                       ("rigid", "minimal rigidity check"),
                       ("fallback", "run the numerical counter directly")):
        sp = sub.add_parser(name, parents=[common], help=text)
        sp.add_argument("file", help="graph file (JSON or graph6), '-' for stdin")
    sp = sub.add_parser("split", parents=[common], help="list non-trivial calligraphic splits")
    sp.add_argument("file")
    sp.add_argument("--min-side", type=int, default=5)
    sp = sub.add_parser("cache", parents=[common], help="inspect or clear the cache")
    sp.add_argument("action", choices=("stats", "clear"))
    return p


def _setting(args, name):
    val = getattr(args, name, None)
    if val is not None:
        return val
    var, conv = ENV[name]
    raw = os.environ.get(var)
    if raw not in (None, ""):
        try:
            return conv(raw)
        except ValueError:
            raise UsageError(f"cannot parse ${var}={raw!r}") from None
    return DEFAULTS[name]


def _fallback_config(args) -> FallbackConfig:
    trials, jobs = _setting(args, "trials"), _setting(args, "jobs")
    if trials < 1 or jobs < 1:
        raise UsageError("--trials and --jobs must be positive")
    return FallbackConfig(seed=_setting(args, "seed"), trials=trials, jobs=jobs,
                          tol=_setting(args, "tol"), multihom=_setting(args, "multihom"))


def _read(args):
    try:
        text = sys.stdin.read() if args.file == "-" else open(args.file, encoding="utf-8").read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc.strerror}") from None
    fmt = args.format or detect_format(text)
    try:
        return parse_marked_graph(text, fmt)
    except ParseError as exc:
        raise UsageError(f"{args.file}: parse error at byte {exc.offset}: {exc}") from None


def _emit(doc) -> None:
    json.dump(doc, sys.stdout, sort_keys=True)
    sys.stdout.write("\n")


def cmd_count(args):
    g, _ = _read(args)
    engine = Engine(EngineConfig(fallback=_fallback_config(args), jobs=_setting(args, "jobs")),
                    CacheStore.from_env(args.cache))
    res = engine.count(g)
    doc = {"count": res.count, "method": res.method}
    if args.trace:
        doc["tree"] = res.trace
    _emit(doc)


def cmd_class(args):
    g, marks = _read(args)
    if marks is None:
        raise CalligraphError("input carries no calligraph marks (base edge and apex)")
    h = validate_calligraph(g, marks["edge"], marks["apex"])
    engine = Engine(EngineConfig(fallback=_fallback_config(args), jobs=_setting(args, "jobs")),
                    CacheStore.from_env(args.cache))
    res = engine.s2_class(h)
    doc = res.cls.to_json()
    doc["equations"] = [{k: v for k, v in eq.items() if k != "count" or args.trace} for eq in res.equations]
    doc["method"] = res.trace["method"]
    if args.trace:
        doc["tree"] = res.trace
    _emit(doc)


def cmd_split(args):
    g, _ = _read(args)
    splits = nontrivial_splits(g, min_side=args.min_side)
    _emit({"splits": [s.to_json() for s in splits]})


def cmd_rigid(args):
    g, _ = _read(args)
    doc = {"vertices": g.n, "edges": len(g.edges)}
    if g.n >= 2:
        doc["minimally_rigid"] = is_minimally_rigid(g)
        doc["rigid"] = is_rigid_spanning(g)
    else:
        doc["minimally_rigid"] = doc["rigid"] = False
    _emit(doc)


def cmd_fallback(args):
    g, _ = _read(args)
    if g.n < 2 or not is_minimally_rigid(g):
        raise NotMinimallyRigidError("graph is not minimally rigid")
    cert = run_fallback(g, _fallback_config(args))
    _emit({"count": cert.agreed_count, "certificate": cert.to_json()})


def cmd_cache(args):
    store = CacheStore.from_env(args.cache)
    if args.action == "clear":
        store.clear()
    _emit(store.stats())


COMMANDS = {"count": cmd_count, "class": cmd_class, "split": cmd_split, "rigid": cmd_rigid,
            "fallback": cmd_fallback, "cache": cmd_cache}


def _fail(code: int, kind: str, exc: BaseException, extra: dict | None = None) -> int:
    print(f"scount: {exc}", file=sys.stderr)
    _emit({"error": str(exc), "kind": kind, **(extra or {})})
    return code


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return _fail(EXIT_USAGE, "usage", exc)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        return _fail(EXIT_USAGE, "usage", exc)
    except (NotMinimallyRigidError, CalligraphError, GraphError, RigidityError, SplitError) as exc:
        return _fail(EXIT_DOMAIN, "domain", exc)
    except FallbackError as exc:
        cert = exc.certificate.to_json() if exc.certificate is not None else None
        return _fail(EXIT_NUMERIC, "numerical", exc, {"certificate": cert})
    except EngineError as exc:
        return _fail(EXIT_NUMERIC, "numerical", exc)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
