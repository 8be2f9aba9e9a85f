"""``rencontres`` command line: compute, table, verify, bench, sample.

Exit codes: 0 success, 1 identity failure, 2 usage error, 3 enumeration
horizon refusal, 4 internal-consistency error (including a corrupt cache).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
import time
from pathlib import Path

from . import identities, oracle, sequences
from .exact import digest, format_int, format_ratio
from .sequences import CacheError, ConsistencyError

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_HORIZON = 3
EXIT_INTERNAL = 4

# Cache files grow quadratically in digits; entries beyond this stay in memory only.
PERSIST_LIMIT = 2048

METHODS = {
    "two-term": None,  # served by the cache
    "alternating": sequences.derangement_alternating,
    "subfactorial": sequences.derangement_subfactorial,
    "telescoped": sequences.derangement_telescoped,
    "oracle": None,
}

log = logging.getLogger("rencontres")


class UsageError(Exception):
    pass


def default_cache_path() -> Path:
    env = os.environ.get("RENCONTRES_CACHE")
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or Path.home() / ".cache"
    return Path(base) / "rencontres" / "cache-v1.txt"


class CacheSession:
    """Loads the persistent cache on first use and writes it back if it grew."""

    def __init__(self, path: Path, validate: bool = True):
        self.path = path
        self.validate = validate
        self._cache = None
        self._loaded_len = 0

    @property
    def cache(self) -> sequences.SequenceCache:
        if self._cache is None:
            if self.path.exists():
                self._cache = sequences.cache_load(self.path, validate=self.validate)
            else:
                self._cache = sequences.SequenceCache()
            self._loaded_len = len(self._cache)
        return self._cache

    def flush(self) -> None:
        if self._cache is None:
            return
        if min(len(self._cache), PERSIST_LIMIT) <= self._loaded_len:
            return
        if not self.validate and not identities.cache_is_valid(self._cache):
            return
        sequences.cache_save(self._cache, self.path, limit=PERSIST_LIMIT)


def _horizon(args) -> int:
    if args.horizon is not None:
        return args.horizon
    try:
        return oracle.env_horizon()
    except ValueError:
        raise UsageError("RENCONTRES_HORIZON must be an integer") from None


def _nonneg(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {text}")
    return value


def _positive(text):
    value = _nonneg(text)
    if value == 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return value


def _r_set(text):
    try:
        values = tuple(sorted({_nonneg(tok) for tok in text.split(",") if tok.strip()}))
    except argparse.ArgumentTypeError as exc:
        raise argparse.ArgumentTypeError(f"bad --r-set {text!r}: {exc}") from None
    if not values:
        raise argparse.ArgumentTypeError("--r-set is empty")
    return values


def _pick(positional, flag, name):
    if positional is not None and flag is not None and positional != flag:
        raise UsageError(f"conflicting values for {name}: {positional} and {flag}")
    value = positional if positional is not None else flag
    if value is None:
        raise UsageError(f"missing {name}")
    return value


def _derangement(method: str, n: int, args, session: CacheSession) -> int:
    if method == "two-term":
        return sequences.derangement_two_term(n, session.cache)
    if method == "oracle":
        return oracle.brute_derangement_count(n, horizon=_horizon(args))
    return METHODS[method](n)


def cmd_compute(args, out, session):
    n = _pick(args.n_pos, args.n, "n")
    try:
        value = _derangement(args.method, n, args, session)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "jsonl":
        out.write(json.dumps({"n": n, "method": args.method, "D_n": format_int(value)}) + "\n")
    elif args.format == "csv":
        out.write(f"n,D_n\n{n},{format_int(value)}\n")
    else:
        out.write(format_int(value) + "\n")
    return EXIT_OK


def cmd_table(args, out, session):
    n_max = _pick(args.n_max_pos, args.n_max, "n-max")
    fmt = args.format
    if args.kind == "census":
        census = oracle.enumerate_census(n_max, horizon=_horizon(args))
        if fmt == "csv":
            out.write(census.to_csv())
        for r, count in enumerate(census.counts):
            if fmt == "jsonl":
                out.write(json.dumps({"n": n_max, "r": r, "count": count}) + "\n")
            elif fmt == "plain":
                out.write(f"{r} {count}\n")
        return EXIT_OK
    cache = session.cache
    if args.kind == "derangements":
        if fmt == "csv":
            out.write("n,D_n\n")
        for n in range(n_max + 1):
            d = format_int(cache.derangement(n))
            if fmt == "csv":
                out.write(f"{n},{d}\n")
            elif fmt == "jsonl":
                out.write(json.dumps({"n": n, "D_n": d}) + "\n")
            else:
                out.write(f"{n} {d}\n")
        return EXIT_OK
    if fmt == "csv":
        out.write("n," + ",".join(f"r{r}" for r in range(n_max + 1)) + "\n")
    for n in range(n_max + 1):
        row = [format_int(v) for v in sequences.rencontres_row(n, cache).values]
        if fmt == "csv":
            out.write(f"{n}," + ",".join(row) + "\n")
        elif fmt == "jsonl":
            out.write(json.dumps({"n": n, "row": row}) + "\n")
        else:
            out.write(" ".join(row) + "\n")
    return EXIT_OK


def _plain_report(rep: identities.IdentityReport) -> str:
    r = "-" if rep.r is None else rep.r
    mark = "ok" if rep.holds else "FAIL"
    return f"{rep.identity_id} n={rep.n} r={r} lhs={format_ratio(rep.lhs)} rhs={format_ratio(rep.rhs)} {mark}"


def cmd_verify(args, out, session):
    n_max = identities.DEFAULT_N_MAX if args.n_max is None else args.n_max
    n_min = args.n_min if args.n_min is not None else 0
    try:
        spec = identities.RangeSpec(n_min, n_max, args.r_set or identities.DEFAULT_R_VALUES)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    ids = None
    if args.identity:
        ids = [i.strip() for chunk in args.identity for i in chunk.split(",") if i.strip()]
        unknown = [i for i in ids if i not in identities.CHECKERS]
        if unknown:
            raise UsageError(
                f"unknown identity {', '.join(unknown)}; choose from {', '.join(identities.CHECKERS)}"
            )
    summary = identities.run_all(spec, session.cache, identities=ids)
    for notice in summary.notices:
        print(f"notice: {notice}", file=sys.stderr)
    fmt = args.format or "jsonl"
    if fmt == "csv":
        out.write("identity_id,n,r,lhs,rhs,holds\n")
    for rep in summary.reports:
        if fmt == "plain":
            out.write(_plain_report(rep) + "\n")
        elif fmt == "csv":
            r = "" if rep.r is None else rep.r
            out.write(f"{rep.identity_id},{rep.n},{r},{format_ratio(rep.lhs)},"
                      f"{format_ratio(rep.rhs)},{str(rep.holds).lower()}\n")
        else:
            out.write(rep.to_json() + "\n")
    out.write(summary.line() + "\n")
    if summary.failed:
        print(f"FAILED: {summary.failed} identity report(s) do not hold", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def cmd_bench(args, out, session):
    targets = args.targets
    if targets != sorted(targets):
        raise UsageError("bench targets must be sorted ascending")
    methods = args.method_list or list(METHODS)
    horizon = _horizon(args)
    fmt = args.format
    rows = []
    status = EXIT_OK
    for n in targets:
        digests = {}
        for method in methods:
            if method == "oracle" and n > horizon:
                print(f"notice: oracle skipped at n={n} (horizon {horizon})", file=sys.stderr)
                continue
            if method == "telescoped" and n < 2:
                print(f"notice: telescoped skipped at n={n} (defined for n >= 2)", file=sys.stderr)
                continue
            t0 = time.perf_counter()
            value = _derangement(method, n, args, session)
            elapsed = time.perf_counter() - t0
            digests[method] = digest(value)
            rows.append((method, n, elapsed, digests[method]))
        if len(set(digests.values())) > 1:
            print(f"error: methods disagree at n={n}: {digests}", file=sys.stderr)
            status = EXIT_INTERNAL
    if fmt == "csv":
        out.write("method,n,seconds,digest\n")
    for method, n, elapsed, dig in rows:
        if fmt == "csv":
            out.write(f"{method},{n},{elapsed:.6f},{dig}\n")
        elif fmt == "jsonl":
            out.write(json.dumps({"method": method, "n": n, "seconds": elapsed, "digest": dig}) + "\n")
        else:
            out.write(f"{method:<13}{n:>8}{elapsed:>12.6f}s  {dig}\n")
    return status


def cmd_sample(args, out, session):
    n = _pick(args.n_pos, args.n, "n")
    if n < 2:
        raise UsageError(f"no derangement of [{n}] exists; need n >= 2")
    rng = random.Random(args.seed)
    for _ in range(args.count):
        p = oracle.sample_derangement(n, rng=rng)
        if args.format == "jsonl":
            out.write(json.dumps({"n": n, "mapping": list(p.mapping)}) + "\n")
        elif args.format == "csv":
            out.write(",".join(map(str, p.mapping)) + "\n")
        else:
            out.write(str(p) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["plain", "csv", "jsonl"], default=None,
                        help="output format (default plain; jsonl for verify)")
    common.add_argument("--cache", type=Path, default=None,
                        help="cache file (env RENCONTRES_CACHE)")
    common.add_argument("--horizon", type=_nonneg, default=None,
                        help="largest n the enumeration oracle accepts (env RENCONTRES_HORIZON, default 10)")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="rencontres",
        description="Derangement and rencontres numbers, with exact identity verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", parents=[common], help="print D_n by one method")
    p.add_argument("n_pos", nargs="?", type=_nonneg, metavar="N")
    p.add_argument("--n", type=_nonneg)
    p.add_argument("--method", choices=list(METHODS), default="two-term")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("table", parents=[common], help="print a table up to n-max")
    p.add_argument("n_max_pos", nargs="?", type=_nonneg, metavar="N_MAX")
    p.add_argument("kind", nargs="?", choices=["derangements", "rencontres", "census"],
                   default="derangements")
    p.add_argument("--n-max", type=_nonneg)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", parents=[common], help="check every identity exactly")
    p.add_argument("--n-min", type=_nonneg)
    p.add_argument("--n-max", type=_nonneg)
    p.add_argument("--r-set", type=_r_set, help="comma-separated r values (default 0,1,2,3)")
    p.add_argument("--identity", action="append",
                   help=f"restrict to identities ({', '.join(identities.CHECKERS)}); repeatable")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", parents=[common], help="time every method at each target n")
    p.add_argument("targets", nargs="+", type=_nonneg, metavar="N")
    p.add_argument("--method", dest="method_list", action="append", choices=list(METHODS))
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("sample", parents=[common], help="draw uniform random derangements")
    p.add_argument("n_pos", nargs="?", type=_nonneg, metavar="N")
    p.add_argument("--n", type=_nonneg)
    p.add_argument("--count", type=_positive, default=1)
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv=None, out=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.format is None and args.command != "verify":
        args.format = "plain"
    out = sys.stdout if out is None else out
    # verify must see tampered data so that identity failures get reported.
    session = CacheSession(args.cache or default_cache_path(), validate=args.command != "verify")
    try:
        status = args.func(args, out, session)
        session.flush()
        return status
    except UsageError as exc:
        print(f"rencontres {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except oracle.HorizonExceeded as exc:
        print(f"rencontres {args.command}: {exc}", file=sys.stderr)
        return EXIT_HORIZON
    except (CacheError, ConsistencyError, oracle.SamplerExhausted) as exc:
        print(f"rencontres {args.command}: internal consistency error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def run() -> None:
    sys.exit(main())
