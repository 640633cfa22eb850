"""Command-line interface: train, encode, decode, syllabify, route, eval, inspect.

All subcommands read and write UTF-8. Exit codes: 0 success, 1 validation
error (bad flags, missing schema, unreadable corpus), 2 runtime error.
Schemas are looked up by name in WWHO_SCHEMA_DIR when set, then among the
bundled schemas; a path to a schema file always works.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import unicodedata
from pathlib import Path

from . import __version__
from .evalkit import evaluate, render_table
from .foundation import FoundationError, byte_fallback, load_rank_file
from .linguistrie import syllabify_text
from .metatok import MetaTokenizer, MetaTokenizerError
from .router import route
from .schema import SchemaError, BUNDLED, load_bundled, load_schema
from .sgpe import (
    CorpusCounts,
    SgpeTrainingError,
    count_corpus,
    train_from_counts,
)

SCHEMA_DIR_ENV = "WWHO_SCHEMA_DIR"


class CliError(Exception):
    """A validation problem the operator can fix; exits with code 1."""


class _ArgumentParser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; the contract here is 1
    # for anything the operator can fix.
    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _resolve_schema(name_or_path: str):
    p = Path(name_or_path)
    if p.suffix == ".json" or p.exists():
        return load_schema(p)
    env_dir = os.environ.get(SCHEMA_DIR_ENV)
    if env_dir:
        candidate = Path(env_dir) / f"{name_or_path}.schema.json"
        if candidate.exists():
            return load_schema(candidate)
    if name_or_path in BUNDLED:
        return load_bundled(name_or_path)
    raise CliError(
        f"unknown schema {name_or_path!r}: not a file, not in "
        f"${SCHEMA_DIR_ENV}, and not bundled {BUNDLED}"
    )


def _resolve_schemas(names: list[str] | None):
    if names:
        return [_resolve_schema(n) for n in names]
    env_dir = os.environ.get(SCHEMA_DIR_ENV)
    if env_dir and Path(env_dir).is_dir():
        found = sorted(Path(env_dir).glob("*.schema.json"))
        if found:
            return [load_schema(p) for p in found]
    return [load_bundled(n) for n in BUNDLED]


def _input_lines(args):
    if getattr(args, "input", None):
        try:
            text = Path(args.input).read_text(encoding="utf-8")
        except OSError as exc:
            raise CliError(f"cannot read input file: {exc}") from exc
        lines = text.splitlines()
    else:
        lines = (line.rstrip("\n") for line in sys.stdin)
    if getattr(args, "nfc", False):
        return (unicodedata.normalize("NFC", line) for line in lines)
    return iter(lines)


def _corpus_lines(paths: list[str], nfc: bool = False):
    for p in paths:
        try:
            handle = open(p, encoding="utf-8")
        except OSError as exc:
            raise CliError(f"cannot read corpus file: {exc}") from exc
        with handle:
            for line in handle:
                line = line.rstrip("\n")
                yield unicodedata.normalize("NFC", line) if nfc else line


def _load_tokenizer(args) -> MetaTokenizer:
    return MetaTokenizer.load(args.tokenizer, rank_file=getattr(args, "rank_file", None))


def _build_foundation(args):
    if args.foundation == "byte":
        return byte_fallback()
    if not args.rank_file:
        raise CliError("--foundation rankfile requires --rank-file PATH")
    return load_rank_file(args.rank_file, pattern=None)


# Per-process schemas for parallel counting (fork inherits the global).
_worker_schemas = None


def _count_chunk(lines: list[str]) -> CorpusCounts:
    return count_corpus(lines, _worker_schemas)


def _parallel_counts(lines_iter, schemas, threads: int, chunk_lines: int = 20000):
    global _worker_schemas
    from multiprocessing import Pool

    _worker_schemas = schemas
    total = CorpusCounts()

    def chunks():
        buf: list[str] = []
        for line in lines_iter:
            buf.append(line)
            if len(buf) >= chunk_lines:
                yield buf
                buf = []
        if buf:
            yield buf

    with Pool(threads) as pool:
        for part in pool.imap(_count_chunk, chunks()):
            total.merge(part)
    return total


def _cmd_train(args) -> int:
    schemas = _resolve_schemas(args.schema)
    foundation = _build_foundation(args)
    lines = _corpus_lines(args.corpus, nfc=args.nfc)
    if args.threads > 1:
        counts = _parallel_counts(lines, schemas, args.threads)
    else:
        counts = count_corpus(lines, schemas)
    model = train_from_counts(
        counts,
        vocab_size=args.vocab_size,
        prune_threshold=args.prune,
        schema_names=tuple(s.name for s in schemas),
        prune_scope=args.prune_scope,
        min_pair_freq=args.min_merge_freq,
    )
    tok = MetaTokenizer(foundation=foundation, sgpe=model, schemas=schemas)
    out = Path(args.out)
    tok.save(out)

    vocab_path = out.parent / "vocab.json"
    vocab_path.write_text(
        json.dumps(model.vocab, ensure_ascii=False, indent=0), encoding="utf-8"
    )
    merges_path = out.parent / "merges.txt"
    with open(merges_path, "w", encoding="utf-8") as f:
        for rule in model.merges:
            # Tab-separated: token strings may begin with a real space.
            f.write(f"{rule.left}\t{rule.right}\n")

    print(
        f"trained: {model.vocab_size} sgpe tokens "
        f"({len(model.merges)} merges, prune>={model.prune_threshold}), "
        f"foundation {foundation.name} ({foundation.vocab_size}), "
        f"total vocab {tok.total_vocab}"
    )
    if model.incomplete:
        print(
            "warning: pair frequencies were exhausted before the vocab "
            "target; the model is smaller than requested",
            file=sys.stderr,
        )
    print(f"wrote {out}, {vocab_path}, {merges_path}")
    return 0


def _cmd_encode(args) -> int:
    tok = _load_tokenizer(args)
    for line in _input_lines(args):
        if args.format == "ids":
            print(" ".join(map(str, tok.encode(line))))
        elif args.format == "strings":
            strings = [t[0] for t in tok.token_strings(line)]
            print(json.dumps(strings, ensure_ascii=False))
        else:
            triples = [[s, i, space] for s, i, space in tok.token_strings(line)]
            print(json.dumps(triples, ensure_ascii=False))
    return 0


def _cmd_decode(args) -> int:
    tok = _load_tokenizer(args)
    for line in _input_lines(args):
        line = line.strip()
        try:
            ids = [int(x) for x in line.split()] if line else []
        except ValueError:
            raise CliError(
                "decode input must be lines of space-separated integer ids"
            ) from None
        print(tok.decode(ids))
    return 0


def _cmd_syllabify(args) -> int:
    schemas = _resolve_schemas(args.schema)
    for line in _input_lines(args):
        items = [s.text for s in syllabify_text(line, schemas)]
        print(json.dumps(items, ensure_ascii=False))
    return 0


def _cmd_route(args) -> int:
    schemas = _resolve_schemas(args.schema)
    for line in _input_lines(args):
        for seg in route(line, schemas):
            flag = "space" if seg.leading_space else "-"
            print(f"{seg.script}\t{flag}\t{json.dumps(seg.text, ensure_ascii=False)}")
    return 0


def _parse_labeled(items: list[str], what: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for item in items:
        if "=" in item:
            label, _, path = item.partition("=")
        else:
            label, path = Path(item).stem, item
        if label in out:
            raise CliError(f"duplicate {what} label {label!r}")
        out[label] = path
    return out


def _cmd_eval(args) -> int:
    tok = _load_tokenizer(args)
    corpora: dict[str, list[str]] = {}
    for label, path in _parse_labeled(args.corpus, "corpus").items():
        corpora[label] = list(_corpus_lines([path], nfc=args.nfc))
    baselines: dict[str, dict[str, int]] = {}
    for name, path in _parse_labeled(args.baseline_counts or [], "baseline").items():
        table: dict[str, int] = {}
        for line in _corpus_lines([path]):
            if not line.strip():
                continue
            bucket, _, count = line.rpartition(" ")
            try:
                table[bucket.strip()] = int(count)
            except ValueError:
                raise CliError(
                    f"baseline counts file {path}: expected '<bucket> <tokens>' "
                    f"lines, got {line!r}"
                ) from None
        baselines[name] = table
    report = evaluate(
        tok,
        corpora,
        baselines or None,
        bucket_by=args.bucket_by,
        danda_splits_words=args.danda_splits_words,
        audits=args.audits,
    )
    if args.format == "json":
        print(report.to_json())
    else:
        print(render_table(report))
    return 0


def _cmd_inspect(args) -> int:
    tok = _load_tokenizer(args)
    f = tok.foundation
    print(f"wwho tokenizer (format 1, core {__version__})")
    print(f"foundation: {f.name} kind={f.kind} vocab={f.vocab_size} "
          f"hash={f.content_hash[:12]}...")
    print(f"sgpe: vocab={tok.sgpe.vocab_size} merges={len(tok.sgpe.merges)} "
          f"prune>={tok.sgpe.prune_threshold} scope={tok.sgpe.prune_scope}"
          + (" (incomplete)" if tok.sgpe.incomplete else ""))
    print(f"id ranges: foundation [0, {f.vocab_size}), "
          f"sgpe [{f.vocab_size}, {tok.total_vocab}); total {tok.total_vocab}")
    for s in tok.schemas:
        print(f"schema {s.name}: {len(s.class_tags)} classes "
              f"{''.join(s.class_tags)}, {len(s.dfa.scan_states)} states, "
              f"grammar {s.grammar}")
    if args.export_vocab:
        tok.export_vocab(args.export_vocab)
        print(f"wrote {args.export_vocab}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="wwho")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, tokenizer=False, schema=False, stdin=False):
        if tokenizer:
            p.add_argument("--tokenizer", required=True, help="tokenizer.json path")
            p.add_argument("--rank-file", help="rank file for a rankfile foundation")
        if schema:
            p.add_argument("--schema", action="append",
                           help="schema name or file (repeatable)")
        if stdin:
            p.add_argument("--input", help="read from file instead of stdin")
            p.add_argument("--nfc", action="store_true",
                           help="NFC-normalize input lines first")

    p = sub.add_parser("train", help="train a tokenizer from a corpus")
    add_common(p, schema=True)
    p.add_argument("--corpus", action="append", required=True,
                   help="training corpus, one sentence per line (repeatable)")
    p.add_argument("--vocab-size", type=int, default=128000)
    p.add_argument("--prune", type=int, default=100,
                   help="drop base units seen fewer times than this")
    p.add_argument("--prune-scope", choices=("all", "syllables"), default="all")
    p.add_argument("--min-merge-freq", type=int, default=2)
    p.add_argument("--foundation", choices=("byte", "rankfile"), default="byte")
    p.add_argument("--rank-file")
    p.add_argument("--out", required=True)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=0,
                   help="accepted for interface stability; training is deterministic")
    p.add_argument("--nfc", action="store_true")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("encode", help="encode lines to meta ids")
    add_common(p, tokenizer=True, stdin=True)
    p.add_argument("--format", choices=("ids", "strings", "json"), default="ids")
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("decode", help="decode lines of space-separated meta ids")
    add_common(p, tokenizer=True, stdin=True)
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("syllabify", help="print syllable lists per input line")
    add_common(p, schema=True, stdin=True)
    p.set_defaults(func=_cmd_syllabify)

    p = sub.add_parser("route", help="print script segments per input line")
    add_common(p, schema=True, stdin=True)
    p.set_defaults(func=_cmd_route)

    p = sub.add_parser("eval", help="efficiency report over labeled corpora")
    add_common(p, tokenizer=True)
    p.add_argument("--corpus", action="append", required=True,
                   help="[label=]path (repeatable)")
    p.add_argument("--baseline-counts", action="append",
                   help="name=path of '<bucket> <tokens>' lines (repeatable)")
    p.add_argument("--bucket-by", choices=("file", "token-script"), default="file")
    p.add_argument("--danda-splits-words", action="store_true")
    p.add_argument("--audits", action="store_true",
                   help="also run glitch, utilization, and round-trip audits")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--nfc", action="store_true")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("inspect", help="print tokenizer stats and ID ranges")
    add_common(p, tokenizer=True)
    p.add_argument("--export-vocab", help="write meta-id -> token JSON here")
    p.set_defaults(func=_cmd_inspect)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, SchemaError, SgpeTrainingError, MetaTokenizerError,
            FoundationError) as exc:
        print(f"wwho: error: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        return 0
    except Exception as exc:  # runtime failure, distinct exit code
        print(f"wwho: runtime error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
