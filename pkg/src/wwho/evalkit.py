"""Metrics and validation harness.

Covers the efficiency metrics (token-to-word ratio, characters per token,
reduction and context-capacity comparisons against baseline token counts),
the vocabulary glitch audit, the round-trip audit with [UNK] accounting,
the pure-ASCII identity check, and vocabulary utilization.

Word counting is whitespace-run based (``str.split`` semantics). The
Devanagari danda is not a word separator unless asked for; the choice is
recorded here so ratios are comparable across runs of this artifact.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .metatok import MetaTokenizer
from .router import OTHER, route
from .schema import OTHER_TAG, LanguageSchema
from .sgpe import SPACE_TOKEN, UNK_TOKEN, SgpeModel

# -- scalar metrics ------------------------------------------------------


def twr(tokens: int, words: int) -> float:
    """Token-to-word ratio: how many tokens an average word costs."""
    if words <= 0:
        raise ValueError("word count must be positive")
    return tokens / words


def cpt(chars: int, tokens: int) -> float:
    """Characters per token."""
    if tokens <= 0:
        raise ValueError("token count must be positive")
    return chars / tokens


def word_count(text: str, danda_splits_words: bool = False) -> int:
    """Whitespace-delimited non-empty runs."""
    if danda_splits_words:
        text = text.replace("।", " ").replace("॥", " ")
    return len(text.split())


def capacity_multiplier(tokens_baseline: int, tokens_sgpe: int) -> float:
    """Context-window capacity gained over a baseline tokenizer."""
    if tokens_sgpe <= 0:
        raise ValueError("token count must be positive")
    return tokens_baseline / tokens_sgpe


def reduction_pct(tokens_baseline: int, tokens_sgpe: int) -> float:
    """Percent fewer tokens than the baseline emits for the same text."""
    if tokens_baseline <= 0:
        raise ValueError("baseline token count must be positive")
    return 100.0 * (1.0 - tokens_sgpe / tokens_baseline)


# -- vocabulary glitch audit ----------------------------------------------


def _splits_into_syllables(body: str, schema: LanguageSchema) -> bool:
    """True iff ``body`` partitions into one or more grammar syllables."""
    tags = schema.class_string(body)
    if OTHER_TAG in tags:
        return False
    n = len(tags)
    reachable = [False] * (n + 1)
    reachable[0] = True
    for i in range(n):
        if not reachable[i]:
            continue
        for length in schema.pattern.accepting_prefixes(tags, i):
            if length > 0:
                reachable[i + length] = True
    return reachable[n]


def glitch_audit(model: SgpeModel, schemas: list[LanguageSchema]) -> list[str]:
    """Tokens that break the whole-syllable vocabulary property.

    A multi-codepoint token (after stripping its optional single leading
    space) must partition exactly into grammar-accepted syllables under
    some schema; single-codepoint tokens are orphan or passthrough
    emissions and are always fine. This catches bare-joiner and split
    virama artifacts in any vocabulary, trained or hand-built.
    """
    offenders: list[str] = []
    for token in model.id_to_token:
        if token in (UNK_TOKEN, SPACE_TOKEN) or len(token) <= 1:
            continue
        body = token[1:] if token.startswith(" ") else token
        if len(body) == 0:
            offenders.append(token)
            continue
        if not any(_splits_into_syllables(body, s) for s in schemas):
            offenders.append(token)
    return offenders


# -- round-trip audit -----------------------------------------------------


def _align_unk(original: str, decoded: str) -> tuple[bool, int]:
    """Check that ``decoded`` equals ``original`` with [UNK] spans standing
    in for non-empty gaps; returns (aligned, characters the gaps covered)."""
    parts = decoded.split(UNK_TOKEN)
    if len(parts) == 1:
        return False, 0
    if not original.startswith(parts[0]):
        return False, 0
    pos = len(parts[0])
    for part in parts[1:-1]:
        idx = original.find(part, pos + 1)
        if idx < 0:
            return False, 0
        pos = idx + len(part)
    last = parts[-1]
    if len(original) - len(last) < pos + 1:
        return False, 0
    if last and not original.endswith(last):
        return False, 0
    return True, len(original) - sum(len(p) for p in parts)


def roundtrip_audit(
    tokenizer: MetaTokenizer, corpus: Iterable[str]
) -> tuple[int, float]:
    """Decode(encode(line)) over a corpus.

    Returns (mismatch count, unk loss rate %). A line mismatches when the
    round trip differs from the input even after excising aligned [UNK]
    spans; the loss rate is the share of input characters those spans
    replaced. Lines containing a literal "[UNK]" cannot be audited
    faithfully and are counted as mismatches if they fail exact equality.
    """
    mismatches = 0
    lost = 0
    total_chars = 0
    for line in corpus:
        total_chars += len(line)
        decoded = tokenizer.decode(tokenizer.encode(line))
        if decoded == line:
            continue
        ok, gap_chars = _align_unk(line, decoded)
        if ok:
            lost += gap_chars
        else:
            mismatches += 1
    rate = 100.0 * lost / total_chars if total_chars else 0.0
    return mismatches, rate


# -- ASCII identity ---------------------------------------------------------


def ascii_stress_test(tokenizer: MetaTokenizer, corpus: Iterable[str]) -> float:
    """Percent of pure-ASCII lines whose meta encoding differs from the
    foundation's own encoding (must be 0.0: routing may not disturb them)."""
    lines = list(corpus)
    for lineno, line in enumerate(lines, start=1):
        if any(ord(ch) > 0x7F for ch in line):
            raise ValueError(
                f"line {lineno} contains a non-ASCII codepoint; "
                "the stress corpus must be pure ASCII"
            )
    if not lines:
        return 0.0
    differing = sum(
        1
        for line in lines
        if tokenizer.encode(line) != tokenizer.foundation.encode(line)
    )
    return 100.0 * differing / len(lines)


# -- vocabulary utilization -------------------------------------------------


def vocab_utilization(
    tokenizer: MetaTokenizer, corpus: Iterable[str]
) -> tuple[int, int]:
    """(used, unused) syllable-space vocabulary entries over a corpus.

    The two specials count like any other entry: [UNK] and the standalone
    space are used only if the corpus actually emits them.
    """
    offset = tokenizer.offset
    seen: set[int] = set()
    for line in corpus:
        for i in tokenizer.encode(line):
            if i >= offset:
                seen.add(i - offset)
    used = len(seen)
    return used, tokenizer.sgpe.vocab_size - used


# -- corpus-level report ------------------------------------------------------


@dataclass
class BucketStats:
    tokens: int = 0
    words: int = 0
    chars: int = 0

    @property
    def twr(self) -> float:
        return self.tokens / self.words if self.words else 0.0

    @property
    def cpt(self) -> float:
        return self.chars / self.tokens if self.tokens else 0.0

    def to_dict(self) -> dict:
        return {
            "tokens": self.tokens,
            "words": self.words,
            "chars": self.chars,
            "twr": round(self.twr, 4),
            "cpt": round(self.cpt, 4),
        }


@dataclass
class EvalReport:
    buckets: dict[str, BucketStats] = field(default_factory=dict)
    overall: BucketStats = field(default_factory=BucketStats)
    reduction_vs: dict[str, dict[str, float]] = field(default_factory=dict)
    capacity_vs: dict[str, dict[str, float]] = field(default_factory=dict)
    glitch_count: int | None = None
    unused_vocab_count: int | None = None
    roundtrip_mismatches: int | None = None
    unk_loss_rate: float | None = None

    def to_dict(self) -> dict:
        out = {
            "buckets": {k: v.to_dict() for k, v in self.buckets.items()},
            "overall": self.overall.to_dict(),
            "reduction_vs": self.reduction_vs,
            "capacity_vs": self.capacity_vs,
        }
        for key in ("glitch_count", "unused_vocab_count", "roundtrip_mismatches",
                    "unk_loss_rate"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2)


def evaluate(
    tokenizer: MetaTokenizer,
    corpora: dict[str, Sequence[str]],
    baseline_counts: dict[str, dict[str, int]] | None = None,
    *,
    bucket_by: str = "file",
    danda_splits_words: bool = False,
    audits: bool = False,
) -> EvalReport:
    """Tokenize labeled corpora and build the efficiency report.

    ``corpora`` maps bucket label -> sequence of lines (sequences, not
    one-shot iterators: the optional audits take a second pass).
    ``baseline_counts`` maps baseline name -> {bucket -> token count} for
    the reduction and capacity columns. ``bucket_by`` is "file" (tokens
    count toward their corpus label) or "token-script" (tokens count
    toward the script of the segment that produced them).
    """
    if bucket_by not in ("file", "token-script"):
        raise ValueError("bucket_by must be 'file' or 'token-script'")

    report = EvalReport()

    def bucket(name: str) -> BucketStats:
        return report.buckets.setdefault(name, BucketStats())

    for label, lines in corpora.items():
        for line in lines:
            if bucket_by == "file":
                stats = bucket(label)
                stats.tokens += len(tokenizer.encode(line))
                stats.words += word_count(line, danda_splits_words)
                stats.chars += len(line)
            else:
                for seg in route(line, tokenizer.schemas):
                    stats = bucket(seg.script if seg.script != OTHER else OTHER)
                    seg_ids = tokenizer.encode(seg.text)
                    stats.tokens += len(seg_ids)
                    stats.words += word_count(seg.text, danda_splits_words)
                    stats.chars += len(seg.text)

    for stats in report.buckets.values():
        report.overall.tokens += stats.tokens
        report.overall.words += stats.words
        report.overall.chars += stats.chars

    if baseline_counts:
        for name, per_bucket in baseline_counts.items():
            red: dict[str, float] = {}
            cap: dict[str, float] = {}
            for bname, base_tokens in per_bucket.items():
                ours = (
                    report.overall.tokens
                    if bname == "overall"
                    else report.buckets.get(bname, BucketStats()).tokens
                )
                if ours > 0 and base_tokens > 0:
                    red[bname] = round(reduction_pct(base_tokens, ours), 1)
                    cap[bname] = round(capacity_multiplier(base_tokens, ours), 2)
            report.reduction_vs[name] = red
            report.capacity_vs[name] = cap

    if audits:
        report.glitch_count = len(glitch_audit(tokenizer.sgpe, tokenizer.schemas))
        all_lines = [line for lines in corpora.values() for line in lines]
        _, unused = vocab_utilization(tokenizer, all_lines)
        report.unused_vocab_count = unused
        report.roundtrip_mismatches, report.unk_loss_rate = roundtrip_audit(
            tokenizer, all_lines
        )

    return report


def render_table(report: EvalReport, sgpe_label: str = "sgpe (wwho)") -> str:
    """Plain-text table: one block per bucket, a row per tokenizer."""
    headers = ["Bucket", "Tokenizer", "Total Tokens", "TWR", "CPT", "% Reduction"]
    rows: list[list[str]] = []
    names = [*report.buckets, "overall"]
    for bname in names:
        stats = report.overall if bname == "overall" else report.buckets[bname]
        rows.append(
            [bname, sgpe_label, f"{stats.tokens:,}", f"{stats.twr:.3f}",
             f"{stats.cpt:.2f}", "-"]
        )
        for baseline, red in report.reduction_vs.items():
            if bname in red:
                base_tokens = ""
                rows.append([bname, f"vs {baseline}", base_tokens, "", "",
                             f"{red[bname]:.1f}%"])
    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(headers)]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    lines = [fmt.format(*headers), fmt.format(*("-" * w for w in widths))]
    lines.extend(fmt.format(*r) for r in rows)
    extras = []
    if report.glitch_count is not None:
        extras.append(f"glitch tokens: {report.glitch_count}")
    if report.unused_vocab_count is not None:
        extras.append(f"unused vocab entries: {report.unused_vocab_count}")
    if report.roundtrip_mismatches is not None:
        extras.append(
            f"round-trip mismatches: {report.roundtrip_mismatches}, "
            f"unk loss: {report.unk_loss_rate:.2f}%"
        )
    if extras:
        lines.append("")
        lines.extend(extras)
    return "\n".join(lines)
