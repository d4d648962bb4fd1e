"""Command-line front end.

One verb per pipeline stage: validate, tokenize, digest, normalize, parse,
generate, stats, bench, repl. Exit codes: 0 success, 1 usage error,
2 invalid ruleset, 3 strict mode with unknown words. All I/O is UTF-8.
"""

from __future__ import annotations

import argparse
import json
import os
import statistics
import sys
import time
from typing import Optional, Sequence

from hsf import __version__
from hsf.generator import GeneratorError, enumerate_variants, round_trip_check
from hsf.kernel import DEFAULT_BACKEND, available_backends
from hsf.lexicon import RulesetLoadError, load_ruleset, validate_ruleset
from hsf.pipeline import Engine, EmptyInputError, InvalidRulesetError
from hsf.tokenizer import KIND_UNKNOWN, token_label

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID_RULESET = 2
EXIT_STRICT_UNKNOWN = 3

# Size model used for footprint reporting: counted structures times recorded
# widths, instead of OS probes, so the numbers are portable and testable.
NODE_BYTES = 120            # trie node: object header plus dict table
EDGE_BYTES = 56             # one transition entry (key and value slots)
STRING_BYTES = 56           # str object overhead
PARSE_BYTES_PER_CHAR = 200  # tokens, words, and trace records per input char


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; the exit-code contract reserves 2 for
    # invalid rulesets, so usage problems must become exit 1.
    def error(self, message: str):
        raise _UsageError(message)


def _utf8_stdio() -> None:
    for stream in (sys.stdout, sys.stderr):
        reconfigure = getattr(stream, "reconfigure", None)
        if reconfigure is not None:
            try:
                reconfigure(encoding="utf-8")
            except Exception:
                pass


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="hsf", description=__doc__)
    parser.add_argument("--version", action="version", version=f"hsf {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    def common(p: _ArgumentParser, text_input: bool = True) -> None:
        p.add_argument("-r", "--ruleset", default=os.environ.get("HSF_RULESET"),
                       help="ruleset JSON path (default: $HSF_RULESET)")
        p.add_argument("--format", choices=("plain", "json"), default="plain")
        p.add_argument("--out", help="write output to FILE instead of stdout")
        if text_input:
            p.add_argument("input", nargs="?", help="input text (default: stdin)")
            p.add_argument("-f", "--file", help="read input from FILE")
            p.add_argument("--strict", action="store_true",
                           help="exit 3 when unknown words remain")
            p.add_argument("--layer", type=int, default=1,
                           help="layer to inspect (tokenize/digest)")

    common(sub.add_parser("validate", help="lint a ruleset"), text_input=False)
    common(sub.add_parser("tokenize", help="show tokens at a layer"))
    common(sub.add_parser("digest", help="show digested words at a layer"))
    common(sub.add_parser("normalize", help="print the canonical form"))
    common(sub.add_parser("parse", help="print the full parse trace"))

    gen = sub.add_parser("generate", help="enumerate framework variants")
    common(gen, text_input=False)
    gen.add_argument("framework", help="framework name")
    gen.add_argument("--slot", action="append", default=[], metavar="N=SURFACE",
                     help="fix slot N to SURFACE (repeatable)")
    gen.add_argument("--cap", type=int, default=None,
                     help="variant cap override (default 10000)")
    gen.add_argument("--check", action="store_true",
                     help="round-trip every variant through normalize")

    common(sub.add_parser("stats", help="model size and footprint report"),
           text_input=False)

    bench = sub.add_parser("bench", help="throughput over a corpus")
    common(bench, text_input=False)
    bench.add_argument("corpus", help="corpus file, one input per line")
    bench.add_argument("--reps", type=int, default=1, help="repetitions")
    bench.add_argument("--kernel", choices=("auto",) + available_backends(),
                       default="auto", help="scan kernel to use")

    common(sub.add_parser("repl", help="interactive session"), text_input=False)
    return parser


def _emit(text: str, args) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _fail(args, message: str, code: int, diagnostics=None) -> int:
    if getattr(args, "format", "plain") == "json":
        payload = {"error": message}
        if diagnostics:
            payload["diagnostics"] = [
                {"severity": d.severity, "code": d.code, "message": d.message,
                 "where": d.where} for d in diagnostics]
        print(json.dumps(payload, ensure_ascii=False), file=sys.stderr)
    else:
        print(f"hsf: {message}", file=sys.stderr)
        for d in diagnostics or []:
            print(f"  {d}", file=sys.stderr)
    return code


def _ruleset_path(args) -> str:
    if not args.ruleset:
        raise _UsageError("no ruleset given (use -r or set HSF_RULESET)")
    if not os.path.exists(args.ruleset):
        raise _UsageError(f"ruleset path does not exist: {args.ruleset}")
    return args.ruleset


def _load_engine(args, kernel: str = "auto") -> Engine:
    path = _ruleset_path(args)
    with open(path, "rb") as fh:
        ruleset = load_ruleset(fh.read())
    return Engine(ruleset, kernel=kernel)


def _input_text(args) -> str:
    if args.input is not None and args.file:
        raise _UsageError("give input text or --file, not both")
    if args.input is not None:
        return args.input
    if args.file:
        with open(args.file, "r", encoding="utf-8") as fh:
            return fh.read()
    return sys.stdin.read()


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_validate(args) -> int:
    path = _ruleset_path(args)
    try:
        with open(path, "rb") as fh:
            ruleset = load_ruleset(fh.read())
    except RulesetLoadError as exc:
        return _fail(args, f"ruleset load failed: {exc}", EXIT_INVALID_RULESET)
    diags = validate_ruleset(ruleset)
    errors = sum(1 for d in diags if d.severity == "error")
    if args.format == "json":
        _emit(json.dumps({
            "ok": errors == 0,
            "diagnostics": [{"severity": d.severity, "code": d.code,
                             "message": d.message, "where": d.where}
                            for d in diags],
        }, ensure_ascii=False), args)
    else:
        for d in diags:
            _emit(str(d), args)
        _emit("ok" if errors == 0 else
              f"{errors} error(s), {len(diags) - errors} warning(s)", args)
    return EXIT_OK if errors == 0 else EXIT_INVALID_RULESET


def _layer_records(trace, layer_id: int):
    for sent in trace.sentences:
        for rec in sent.layers:
            if rec.layer_id == layer_id:
                yield rec


def _cmd_tokenize(args) -> int:
    engine = _load_engine(args)
    text = _input_text(args)
    if args.layer == 1:
        tokens = engine.tokenize(text)
        rows = [{"surface": t.surface, "span": list(t.span), "kind": t.kind,
                 "label": token_label(engine.layer1, t)} for t in tokens]
        unknowns = sum(1 for t in tokens if t.kind == KIND_UNKNOWN)
    else:
        trace = engine.parse(text)
        rows = [{"surface": t.surface, "span": list(t.span), "kind": t.kind,
                 "label": t.label}
                for rec in _layer_records(trace, args.layer)
                for t in rec.tokens]
        if not rows:
            raise _UsageError(f"no layer {args.layer} in this ruleset")
        unknowns = sum(1 for r in rows if r["kind"] == KIND_UNKNOWN)
    if args.format == "json":
        _emit(json.dumps({"layer": args.layer, "tokens": rows},
                         ensure_ascii=False), args)
    else:
        _emit("\n".join(
            f"{r['kind']}\t{r['surface']!r}\t{r['span'][0]}:{r['span'][1]}"
            + (f"\t{r['label']}" if r["label"] else "") for r in rows), args)
    return EXIT_STRICT_UNKNOWN if args.strict and unknowns else EXIT_OK


def _cmd_digest(args) -> int:
    engine = _load_engine(args)
    trace = engine.parse(_input_text(args))
    records = list(_layer_records(trace, args.layer))
    if not records:
        raise _UsageError(f"no layer {args.layer} in this ruleset")
    sentences = [[[w.representative, w.label, w.kind] for w in rec.digested]
                 for rec in records]
    if args.format == "json":
        _emit(json.dumps({"layer": args.layer, "sentences": sentences},
                         ensure_ascii=False), args)
    else:
        lines = []
        for words in sentences:
            lines.append("  ".join(f"({w[0]}, {w[1]}, {w[2]})" for w in words))
        _emit("\n".join(lines), args)
    return (EXIT_STRICT_UNKNOWN if args.strict and trace.unknown_count
            else EXIT_OK)


def _cmd_normalize(args) -> int:
    engine = _load_engine(args)
    trace = engine.parse(_input_text(args))
    if args.format == "json":
        _emit(json.dumps({"input": trace.input, "canonical": trace.canonical,
                          "unknown_count": trace.unknown_count},
                         ensure_ascii=False), args)
    else:
        _emit(trace.canonical, args)
    return (EXIT_STRICT_UNKNOWN if args.strict and trace.unknown_count
            else EXIT_OK)


def _cmd_parse(args) -> int:
    engine = _load_engine(args)
    trace = engine.parse(_input_text(args))
    if args.format == "json":
        _emit(trace.to_json(), args)
    else:
        lines = [f"input: {trace.input}", f"canonical: {trace.canonical}",
                 f"unknown words: {trace.unknown_count}"]
        for si, sent in enumerate(trace.sentences, 1):
            lines.append(f"sentence {si}:")
            for rec in sent.layers:
                lines.append(f"  layer {rec.layer_id}:")
                toks = "  ".join(f"[{t.kind} {t.surface!r}"
                                 + (f" {t.label}" if t.label else "") + "]"
                                 for t in rec.tokens)
                lines.append(f"    tokens: {toks}")
                words = "  ".join(f"({w.representative}, {w.label})"
                                  for w in rec.digested)
                lines.append(f"    digested: {words}")
                lines.append(f"    framework: {rec.framework or '-'}")
                lines.append(f"    canonical: {rec.canonical}")
        _emit("\n".join(lines), args)
    return (EXIT_STRICT_UNKNOWN if args.strict and trace.unknown_count
            else EXIT_OK)


def _cmd_generate(args) -> int:
    engine = _load_engine(args)
    slots: dict[int, str] = {}
    for item in args.slot:
        key, sep, value = item.partition("=")
        if not sep or not key.isdigit():
            raise _UsageError(f"--slot expects N=SURFACE, got {item!r}")
        slots[int(key)] = value
    kwargs = {} if args.cap is None else {"cap": args.cap}
    vs = enumerate_variants(engine, args.framework, slots, **kwargs)
    report = round_trip_check(engine, vs) if args.check else None
    if args.format == "json":
        payload = {"framework": vs.framework, "canonical": vs.canonical,
                   "expected_count": vs.expected_count, "variants": vs.variants}
        if report is not None:
            payload["round_trip_ok"] = report.ok
            payload["failures"] = [{"variant": v, "canonical": got}
                                   for v, got in report.failures]
        _emit(json.dumps(payload, ensure_ascii=False), args)
    else:
        out = list(vs.variants)
        if report is not None:
            out.append(f"round trip: {report.total - len(report.failures)}"
                       f"/{report.total} ok")
            out.extend(f"FAIL {v} -> {got}" for v, got in report.failures)
        _emit("\n".join(out), args)
    return EXIT_OK if report is None or report.ok else 1


def estimate_resident_bytes(engine: Engine, input_chars: int = 1000) -> int:
    """Internal size-model estimate of the engine plus one parse working set."""
    nodes = sum(idx.node_count for idx in engine.indexes.values())
    edges = sum(idx.edge_count for idx in engine.indexes.values())
    strings = 0

    def add_str(s: Optional[str]) -> None:
        nonlocal strings
        if s:
            strings += STRING_BYTES + len(s.encode("utf-8"))

    for layer in engine.ruleset.layers:
        for cls in layer.classes:
            add_str(cls.label)
            for member in cls.members:
                if isinstance(member, str):
                    add_str(member)
                else:
                    for el in member:
                        add_str(el)
        for rec in layer.recognizers:
            add_str(rec.label)
            add_str(rec.pattern)
        for fw in layer.frameworks:
            add_str(fw.name)
            for elem in fw.pattern:
                add_str(elem if isinstance(elem, str) else elem.label)
    return (nodes * NODE_BYTES + edges * EDGE_BYTES + strings
            + input_chars * PARSE_BYTES_PER_CHAR)


def _cmd_stats(args) -> int:
    engine = _load_engine(args)
    path = _ruleset_path(args)
    disk = os.path.getsize(path)
    layers = []
    for layer in engine.ruleset.layers:
        idx = engine.indexes[layer.id]
        layers.append({
            "id": layer.id,
            "classes": len(layer.classes),
            "members": sum(len(c.members) for c in layer.classes),
            "recognizers": len(layer.recognizers),
            "frameworks": len(layer.frameworks),
            "index_nodes": idx.node_count,
            "index_edges": idx.edge_count,
        })
    payload = {
        "ruleset": path,
        "disk_bytes": disk,
        "dimension": engine.ruleset.dimension,
        "layers": layers,
        "total_index_nodes": sum(l["index_nodes"] for l in layers),
        "estimated_resident_bytes": estimate_resident_bytes(engine),
    }
    if args.format == "json":
        _emit(json.dumps(payload, ensure_ascii=False), args)
    else:
        lines = [f"ruleset: {path}",
                 f"disk bytes: {disk}",
                 f"dimension: {payload['dimension'] or '-'}"]
        for l in layers:
            lines.append(f"layer {l['id']}: {l['classes']} classes, "
                         f"{l['members']} members, {l['recognizers']} "
                         f"recognizers, {l['frameworks']} frameworks, "
                         f"{l['index_nodes']} index nodes")
        lines.append(f"total index nodes: {payload['total_index_nodes']}")
        lines.append(f"estimated resident bytes: "
                     f"{payload['estimated_resident_bytes']}")
        _emit("\n".join(lines), args)
    return EXIT_OK


def _cmd_bench(args) -> int:
    engine = _load_engine(args, kernel=args.kernel)
    try:
        with open(args.corpus, "r", encoding="utf-8") as fh:
            lines = [line.rstrip("\n") for line in fh]
    except OSError as exc:
        return _fail(args, f"cannot read corpus: {exc}", EXIT_USAGE)
    lines = [line for line in lines if line.strip()]
    if not lines:
        return _fail(args, "empty corpus", EXIT_USAGE)
    if args.reps < 1:
        raise _UsageError("--reps must be >= 1")

    # Determinism pre-pass: later timed runs must reproduce these outputs.
    expected = [engine.normalize(line) for line in lines]
    per_line: list[float] = []
    deterministic = True
    wall = 0.0
    for _ in range(args.reps):
        for i, line in enumerate(lines):
            t0 = time.perf_counter()
            got = engine.normalize(line)
            dt = time.perf_counter() - t0
            wall += dt
            per_line.append(dt)
            if got != expected[i]:
                deterministic = False
    total_chars = sum(len(line) for line in lines) * args.reps
    per_line.sort()
    p50 = statistics.median(per_line)
    p99 = per_line[min(len(per_line) - 1, int(len(per_line) * 0.99))]
    payload = {
        "corpus": args.corpus,
        "lines": len(lines),
        "repetitions": args.reps,
        "total_chars": total_chars,
        "wall_seconds": round(wall, 6),
        "chars_per_second": round(total_chars / wall) if wall else None,
        "p50_ms": round(p50 * 1000, 4),
        "p99_ms": round(p99 * 1000, 4),
        "peak_estimated_bytes": estimate_resident_bytes(
            engine, max(len(line) for line in lines)),
        "deterministic": deterministic,
        "kernel": engine.kernel.BACKEND,
    }
    if args.format == "json":
        _emit(json.dumps(payload, ensure_ascii=False), args)
    else:
        _emit("\n".join(f"{k}: {v}" for k, v in payload.items()), args)
    return EXIT_OK if deterministic else 1


def _cmd_repl(args) -> int:
    engine = _load_engine(args)
    show_trace = False
    interactive = sys.stdin.isatty()
    while True:
        if interactive:
            try:
                line = input("hsf> ")
            except (EOFError, KeyboardInterrupt):
                return EXIT_OK
        else:
            line = sys.stdin.readline()
            if not line:
                return EXIT_OK
            line = line.rstrip("\n")
        if not line.strip():
            continue
        if line.strip() == ":quit":
            return EXIT_OK
        if line.strip() == ":trace":
            show_trace = not show_trace
            print(f"trace {'on' if show_trace else 'off'}")
            continue
        try:
            trace = engine.parse(line)
        except EmptyInputError as exc:
            print(f"error: {exc}")
            continue
        print(trace.canonical)
        if show_trace:
            print(trace.to_json())
        else:
            tokens = engine.tokenize(line)
            summary = " | ".join(f"{t.kind}:{t.surface}" for t in tokens)
            print(f"  {summary}")


_COMMANDS = {
    "validate": _cmd_validate,
    "tokenize": _cmd_tokenize,
    "digest": _cmd_digest,
    "normalize": _cmd_normalize,
    "parse": _cmd_parse,
    "generate": _cmd_generate,
    "stats": _cmd_stats,
    "bench": _cmd_bench,
    "repl": _cmd_repl,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    _utf8_stdio()
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise _UsageError("a subcommand is required")
        try:
            return _COMMANDS[args.command](args)
        except RulesetLoadError as exc:
            return _fail(args, f"ruleset load failed: {exc}", EXIT_INVALID_RULESET)
        except InvalidRulesetError as exc:
            return _fail(args, "ruleset invalid", EXIT_INVALID_RULESET,
                         exc.diagnostics)
        except EmptyInputError as exc:
            return _fail(args, str(exc), EXIT_USAGE)
        except GeneratorError as exc:
            return _fail(args, str(exc), EXIT_USAGE)
        except OSError as exc:
            return _fail(args, str(exc), EXIT_USAGE)
    except _UsageError as exc:
        print(f"hsf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # argparse --help/--version
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
