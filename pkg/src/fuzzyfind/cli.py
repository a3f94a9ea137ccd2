"""``fuzzyfind`` command line.

Exit codes: 0 success, 1 verification below threshold, 2 I/O or file-format
error, 3 bad arguments.  Reports are ``key=value`` lines, or one JSON object
with ``--json``.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time


from . import __version__, ffd, golay, lexicon

EXIT_OK, EXIT_VERIFY, EXIT_IO, EXIT_ARGS = 0, 1, 2, 3


class ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_ARGS)


def _emit(report: dict, as_json: bool, lines: list[str] = ()) -> None:
    if as_json:
        print(json.dumps(report, sort_keys=False))
        return
    for key, value in report.items():
        if isinstance(value, (list, dict)):
            continue
        if isinstance(value, bool):
            value = str(value).lower()
        print(f"{key}={value}")
    for line in lines:
        print(line)


def _open_table(path: str | None):
    return ffd.FfdTable(path) if path else None


def _table_default() -> str | None:
    return os.environ.get("FFD_TABLE") or None


# --------------------------------------------------------------------------


def cmd_build(args) -> int:
    if args.threads < 1:
        raise ArgumentError("--threads must be >= 1")
    report = ffd.build_table(args.out, threads=args.threads)
    _emit({"command": "build", **report.as_dict()}, args.json)
    return EXIT_OK


def cmd_stats(args) -> int:
    t0 = time.perf_counter()
    table = _open_table(args.table)
    try:
        census = ffd.case_census(table)
    finally:
        if table is not None:
            table.close()
    report = {
        "command": "stats",
        "table": args.table or "",
        "generator": f"{golay.GENERATOR:#x}",
        **census.as_dict(),
        "wall_seconds": round(time.perf_counter() - t0, 3),
    }
    _emit(report, args.json)
    return EXIT_OK


def _failure_line(f: dict) -> str:
    return (
        f"fail center={f['center']} neighbor={f['neighbor']} hd={f['distance']} "
        f"center_addresses={','.join(map(str, f['center_addresses']))} "
        f"neighbor_addresses={','.join(map(str, f['neighbor_addresses']))}"
    )


def cmd_verify(args) -> int:
    if args.samples is not None and args.samples < 0:
        raise ArgumentError("--samples must be >= 0")
    if not 0.0 <= args.threshold <= 1.0:
        raise ArgumentError("--threshold must lie in [0, 1]")
    t0 = time.perf_counter()
    table = _open_table(args.table)
    source = table or ffd.ON_THE_FLY
    u, v = ffd.FIG5_PAIR
    fig5_ok = ffd.verify_pair(u, v, source)
    report = {"command": "verify", "seed": args.seed, "threshold": args.threshold}
    lines = []
    if args.exhaustive:
        result = ffd.verify_exhaustive(source, threads=args.threads)
        report.update(mode="exhaustive", **result)
        rate = result["pass_rate"]
    else:
        n = 1000 if args.samples is None else args.samples
        centers = ffd.sample_centers(n, args.seed).tolist()
        if n:
            centers = [u] + centers
        summary = ffd.verify_centers(centers, source)
        report.update(
            mode="sampled",
            samples=n,
            centers=summary.centers,
            pairs=summary.pairs,
            passed=summary.passed,
            failed=summary.pairs - summary.passed,
            pass_rate=summary.pass_rate,
        )
        for (ck, nk), (pairs, failed) in sorted(summary.breakdown.items()):
            report[f"pairs_{ck}_{nk}"] = pairs
            report[f"failed_{ck}_{nk}"] = failed
        lines = [_failure_line(f) for f in summary.failures]
        if args.json:
            report["failures"] = summary.failures
        rate = summary.pass_rate
    ok = fig5_ok and rate >= args.threshold
    report.update(
        fig5_pair=f"{u},{v}",
        fig5_shared=fig5_ok,
        wall_seconds=round(time.perf_counter() - t0, 3),
        status="pass" if ok else "fail",
    )
    if table is not None:
        table.close()
    _emit(report, args.json, lines)
    return EXIT_OK if ok else EXIT_VERIFY


def _letter_map(path: str | None):
    return lexicon.LetterMap.from_file(path) if path else None


def cmd_index(args) -> int:
    t0 = time.perf_counter()
    table = _open_table(args.table)
    words = lexicon.read_word_list(args.words)
    store = lexicon.index_words(words, _letter_map(args.mapping), table)
    lexicon.save_store(store, args.out)
    _emit(
        {
            "command": "index",
            "words": len(store),
            "postings": store.posting_count,
            "postings_per_word": round(store.posting_count / max(1, len(store)), 3),
            "out": args.out,
            "wall_seconds": round(time.perf_counter() - t0, 3),
        },
        args.json,
    )
    return EXIT_OK


def cmd_query(args) -> int:
    if not 0 <= args.max_hd <= 2:
        raise ArgumentError("--max-hd must be 0, 1 or 2")
    if args.limit < 1:
        raise ArgumentError("--limit must be >= 1")
    table = _open_table(args.table)
    store = lexicon.load_store(args.index, _letter_map(args.mapping), table)
    hits = lexicon.fuzzy_lookup(args.word, store, args.max_hd, args.limit, table)
    report = {"command": "query", "word": args.word, "max_hd": args.max_hd, "results": len(hits)}
    if args.json:
        report["candidates"] = [{"word": h.word, "distance": h.distance} for h in hits]
    _emit(report, args.json, [f"{i}\t{h.distance}\t{h.word}" for i, h in enumerate(hits, 1)])
    return EXIT_OK


def _rate(fn, queries, repeat: int) -> float:
    t0 = time.perf_counter()
    for _ in range(repeat):
        for q in queries:
            fn(q)
    return repeat * len(queries) / (time.perf_counter() - t0)


def cmd_bench(args) -> int:
    if args.repeat < 1:
        raise ArgumentError("--repeat must be >= 1")
    table = _open_table(args.table)
    store = lexicon.load_store(args.index, _letter_map(args.mapping), table)
    with open(args.queries, encoding="utf-8") as fh:
        queries = [q.strip() for q in fh if q.strip()]
    if not queries:
        raise ArgumentError("query file is empty")
    source = table or ffd.ON_THE_FLY
    lexicon.fuzzy_lookup(queries[0], store, source=source)  # warm the JIT
    ffd_rate = _rate(lambda q: lexicon.fuzzy_lookup(q, store, 2, None, source), queries, args.repeat)
    scan_rate = _rate(lambda q: lexicon.scan_lookup(q, store, 2, None), queries, args.repeat)
    _emit(
        {
            "command": "bench",
            "words": len(store),
            "queries": len(queries),
            "repeat": args.repeat,
            "ffd_queries_per_second": round(ffd_rate, 1),
            "scan_queries_per_second": round(scan_rate, 1),
            "speedup": round(ffd_rate / scan_rate, 3),
        },
        args.json,
    )
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fuzzyfind", description="FuzzyFind Dictionary tools")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--json", action="store_true", help="emit one JSON object")
        sp.set_defaults(func=fn)
        return sp

    sp = add("build", cmd_build, "write the full 2^23-record table")
    sp.add_argument("--out", required=True)
    sp.add_argument("--threads", type=int, default=1)

    sp = add("stats", cmd_stats, "Case A / B / C census")
    sp.add_argument("--table", default=_table_default())

    sp = add("verify", cmd_verify, "277-neighbour shared-address check")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--samples", type=int)
    g.add_argument("--exhaustive", action="store_true")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--threshold", type=float, default=0.999)
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--table", default=_table_default())

    sp = add("index", cmd_index, "index a word list")
    sp.add_argument("--words", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--mapping")
    sp.add_argument("--table", default=_table_default())

    sp = add("query", cmd_query, "fuzzy word lookup")
    sp.add_argument("--index", required=True)
    sp.add_argument("--word", required=True)
    sp.add_argument("--max-hd", type=int, default=2)
    sp.add_argument("--limit", type=int, default=10)
    sp.add_argument("--mapping")
    sp.add_argument("--table", default=_table_default())

    sp = add("bench", cmd_bench, "dictionary vs linear-scan throughput")
    sp.add_argument("--index", required=True)
    sp.add_argument("--queries", required=True)
    sp.add_argument("--repeat", type=int, default=3)
    sp.add_argument("--mapping")
    sp.add_argument("--table", default=_table_default())
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ArgumentError as exc:
        print(f"fuzzyfind: error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except (OSError, ffd.FormatError) as exc:
        print(f"fuzzyfind: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError) as exc:
        # malformed mapping files and the like surface here
        print(f"fuzzyfind: error: {exc}", file=sys.stderr)
        return EXIT_ARGS


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
