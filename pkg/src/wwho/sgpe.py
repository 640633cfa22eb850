"""Syllable-aware pair encoding: training and the segment codec.

Training counts syllable words (maximal runs of syllable emissions not
interrupted by whitespace, orphans, passthroughs, or a segment boundary;
a space-prefixed syllable starts a new word), prunes base units rarer
than the threshold, then iteratively merges the most frequent adjacent
pair within words until the vocabulary target is reached. Pair counts are
maintained incrementally so large corpora stay tractable; the test suite
checks the result against a naive full-recount reference.

Vocabulary layout: id 0 is [UNK], id 1 is the injected standalone space,
then surviving base units in first-occurrence order, then merged tokens
in merge order. Ties between equally frequent pairs go to the lowest
(left id, right id), which makes training deterministic.
"""

from __future__ import annotations

import heapq
from collections import Counter
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field

from .linguistrie import SYLLABLE, Syllable, syllabify
from .router import OTHER, route
from .schema import LanguageSchema

UNK_TOKEN = "[UNK]"
SPACE_TOKEN = " "
UNK_ID = 0
SPACE_ID = 1

PRUNE_SCOPES = ("all", "syllables")


class SgpeTrainingError(ValueError):
    """Raised when training cannot proceed (empty corpus, bad sizes)."""


@dataclass(frozen=True)
class MergeRule:
    left: str
    right: str
    rank: int

    @property
    def merged(self) -> str:
        return self.left + self.right


@dataclass
class SgpeModel:
    """A trained syllable-pair vocabulary with its ordered merge rules."""

    vocab: dict[str, int]
    merges: list[MergeRule]
    prune_threshold: int
    schema_names: tuple[str, ...]
    prune_scope: str = "all"
    incomplete: bool = False

    id_to_token: list[str] = field(default_factory=list, repr=False)
    _merge_lookup: dict[tuple[int, int], tuple[int, int]] = field(
        default_factory=dict, repr=False
    )

    def __post_init__(self) -> None:
        if not self.id_to_token:
            self.id_to_token = [""] * len(self.vocab)
            for tok, i in self.vocab.items():
                self.id_to_token[i] = tok
        if not self._merge_lookup:
            for rule in self.merges:
                key = (self.vocab[rule.left], self.vocab[rule.right])
                self._merge_lookup[key] = (rule.rank, self.vocab[rule.merged])

    @property
    def vocab_size(self) -> int:
        return len(self.vocab)

    def apply_merges(self, ids: list[int]) -> list[int]:
        """Standard pair-merge application: repeatedly take the lowest-rank
        applicable rule and merge all its occurrences, left to right."""
        lookup = self._merge_lookup
        while len(ids) >= 2:
            best_rank = -1
            best_pair = None
            for i in range(len(ids) - 1):
                hit = lookup.get((ids[i], ids[i + 1]))
                if hit is not None and (best_rank < 0 or hit[0] < best_rank):
                    best_rank, best_pair = hit[0], (ids[i], ids[i + 1])
            if best_pair is None:
                break
            merged_id = lookup[best_pair][1]
            a, b = best_pair
            out: list[int] = []
            i = 0
            while i < len(ids):
                if i + 1 < len(ids) and ids[i] == a and ids[i + 1] == b:
                    out.append(merged_id)
                    i += 2
                else:
                    out.append(ids[i])
                    i += 1
            ids = out
        return ids


@dataclass
class CorpusCounts:
    """Streaming accumulator for one pass over a routed, syllabified corpus."""

    word_counts: Counter = field(default_factory=Counter)
    unit_counts: Counter = field(default_factory=Counter)
    unit_order: dict[str, int] = field(default_factory=dict)
    unit_kinds: dict[str, str] = field(default_factory=dict)
    syllable_emissions: int = 0

    def _see(self, unit: str, kind: str) -> None:
        if unit == SPACE_TOKEN:
            return  # the standalone space is a reserved special, never counted
        self.unit_counts[unit] += 1
        if unit not in self.unit_order:
            self.unit_order[unit] = len(self.unit_order)
            self.unit_kinds[unit] = kind

    def add_syllables(self, syllables: list[Syllable]) -> None:
        for chunk in iter_chunks(syllables):
            if isinstance(chunk, list):
                for unit in chunk:
                    self._see(unit, SYLLABLE)
                self.word_counts[tuple(chunk)] += 1
                self.syllable_emissions += len(chunk)
            else:
                text, kind = chunk
                self._see(text, kind)

    def merge(self, other: "CorpusCounts") -> None:
        """Fold another accumulator in (order follows self, then other)."""
        self.word_counts.update(other.word_counts)
        self.unit_counts.update(other.unit_counts)
        for unit, _ in sorted(other.unit_order.items(), key=lambda kv: kv[1]):
            if unit not in self.unit_order:
                self.unit_order[unit] = len(self.unit_order)
                self.unit_kinds[unit] = other.unit_kinds[unit]
        self.syllable_emissions += other.syllable_emissions


def iter_chunks(
    syllables: list[Syllable],
) -> Iterator[list[str] | tuple[str, str]]:
    """Split a syllable stream into word chunks and singleton units.

    Yields lists of unit strings for words and ``(text, kind)`` tuples for
    whitespace / orphan / passthrough singletons. A space-prefixed syllable
    opens a new word; anything that is not a syllable closes the current one.
    """
    word: list[str] = []
    for s in syllables:
        if s.kind == SYLLABLE:
            if s.space_prefixed and word:
                yield word
                word = []
            word.append(s.text)
        else:
            if word:
                yield word
                word = []
            yield (s.text, s.kind)
    if word:
        yield word


def count_corpus(
    corpus: Iterable[str], schemas: list[LanguageSchema]
) -> CorpusCounts:
    """Route and syllabify every line, accumulating word and unit counts."""
    by_name = {s.name: s for s in schemas}
    counts = CorpusCounts()
    for line in corpus:
        for seg in route(line, schemas):
            if seg.script == OTHER:
                continue
            counts.add_syllables(syllabify(seg, by_name[seg.script]))
    return counts


def train(
    corpus: Iterable[str],
    schemas: list[LanguageSchema],
    vocab_size: int,
    prune_threshold: int,
    *,
    prune_scope: str = "all",
    min_pair_freq: int = 2,
) -> SgpeModel:
    """Train a model from a line iterator. See ``train_from_counts``."""
    counts = count_corpus(corpus, schemas)
    return train_from_counts(
        counts,
        vocab_size=vocab_size,
        prune_threshold=prune_threshold,
        schema_names=tuple(s.name for s in schemas),
        prune_scope=prune_scope,
        min_pair_freq=min_pair_freq,
    )


def train_from_counts(
    counts: CorpusCounts,
    *,
    vocab_size: int,
    prune_threshold: int,
    schema_names: tuple[str, ...],
    prune_scope: str = "all",
    min_pair_freq: int = 2,
) -> SgpeModel:
    if prune_scope not in PRUNE_SCOPES:
        raise ValueError(f"prune_scope must be one of {PRUNE_SCOPES}")
    if prune_threshold < 1:
        raise ValueError("prune_threshold must be >= 1")
    if counts.syllable_emissions == 0:
        raise SgpeTrainingError(
            "corpus produced no scripted syllables; nothing to train on"
        )

    pruned = {
        unit
        for unit, c in counts.unit_counts.items()
        if c < prune_threshold
        and (prune_scope == "all" or counts.unit_kinds[unit] == SYLLABLE)
    }
    survivors = [
        u for u, _ in sorted(counts.unit_order.items(), key=lambda kv: kv[1])
        if u not in pruned
    ]

    vocab: dict[str, int] = {UNK_TOKEN: UNK_ID, SPACE_TOKEN: SPACE_ID}
    for u in survivors:
        vocab[u] = len(vocab)
    if vocab_size <= len(vocab):
        raise SgpeTrainingError(
            f"vocab_size {vocab_size} leaves no room for merges: "
            f"{len(survivors)} base units survive pruning plus 2 specials"
        )

    id_to_token = [""] * len(vocab)
    for tok, i in vocab.items():
        id_to_token[i] = tok

    words: list[list[int]] = []
    freqs: list[int] = []
    for word, f in counts.word_counts.items():
        words.append([vocab.get(u, UNK_ID) for u in word])
        freqs.append(f)

    merges, incomplete = _merge_loop(
        words, freqs, vocab, id_to_token, vocab_size, min_pair_freq
    )

    return SgpeModel(
        vocab=vocab,
        merges=merges,
        prune_threshold=prune_threshold,
        schema_names=tuple(schema_names),
        prune_scope=prune_scope,
        incomplete=incomplete,
    )


def _word_pairs(word: list[int]) -> Iterator[tuple[int, int]]:
    for i in range(len(word) - 1):
        a, b = word[i], word[i + 1]
        # Specials never participate: [UNK] blocks merges across a pruned
        # unit and the standalone space cannot occur inside a word.
        if a >= 2 and b >= 2:
            yield a, b


def _merge_loop(
    words: list[list[int]],
    freqs: list[int],
    vocab: dict[str, int],
    id_to_token: list[str],
    vocab_size: int,
    min_pair_freq: int,
) -> tuple[list[MergeRule], bool]:
    pair_counts: Counter = Counter()
    pair_words: dict[tuple[int, int], set[int]] = {}
    for wi, w in enumerate(words):
        f = freqs[wi]
        for p in _word_pairs(w):
            pair_counts[p] += f
            pair_words.setdefault(p, set()).add(wi)

    heap = [(-c, a, b) for (a, b), c in pair_counts.items() if c >= min_pair_freq]
    heapq.heapify(heap)
    merges: list[MergeRule] = []

    while len(vocab) < vocab_size:
        # Pop until an entry matches the live count (lazy invalidation).
        best = None
        while heap:
            negc, a, b = heapq.heappop(heap)
            live = pair_counts.get((a, b), 0)
            if live < min_pair_freq:
                continue
            if live != -negc:
                heapq.heappush(heap, (-live, a, b))
                continue
            best = (a, b, live)
            break
        if best is None:
            return merges, True

        a, b, _count = best
        merged_str = id_to_token[a] + id_to_token[b]
        merged_id = vocab.get(merged_str)
        if merged_id is None:
            merged_id = len(vocab)
            vocab[merged_str] = merged_id
            id_to_token.append(merged_str)
        merges.append(MergeRule(id_to_token[a], id_to_token[b], len(merges)))

        touched: set[tuple[int, int]] = set()
        candidates = sorted(pair_words.pop((a, b), ()))
        pair_counts.pop((a, b), None)
        for wi in candidates:
            w = words[wi]
            f = freqs[wi]
            old_pairs = Counter(_word_pairs(w))
            if (a, b) not in old_pairs:
                continue  # stale index entry
            new_w: list[int] = []
            i = 0
            while i < len(w):
                if i + 1 < len(w) and w[i] == a and w[i + 1] == b:
                    new_w.append(merged_id)
                    i += 2
                else:
                    new_w.append(w[i])
                    i += 1
            words[wi] = new_w
            new_pairs = Counter(_word_pairs(new_w))
            for p in old_pairs | new_pairs:
                delta = new_pairs[p] - old_pairs[p]
                if p == (a, b):
                    continue
                if delta:
                    pair_counts[p] += delta * f
                    touched.add(p)
                if new_pairs[p]:
                    pair_words.setdefault(p, set()).add(wi)

        for p in touched:
            c = pair_counts.get(p, 0)
            if c <= 0:
                pair_counts.pop(p, None)
                pair_words.pop(p, None)
            elif c >= min_pair_freq:
                heapq.heappush(heap, (-c, p[0], p[1]))

    return merges, False


def encode_segment(syllables: list[Syllable], model: SgpeModel) -> list[int]:
    """Encode one segment's syllable stream to local ids."""
    out: list[int] = []
    for chunk in iter_chunks(syllables):
        if isinstance(chunk, list):
            ids = [model.vocab.get(u, UNK_ID) for u in chunk]
            out.extend(model.apply_merges(ids))
        else:
            text, _kind = chunk
            if text == SPACE_TOKEN:
                out.append(SPACE_ID)
            else:
                out.append(model.vocab.get(text, UNK_ID))
    return out


def decode_segment(ids: Iterable[int], model: SgpeModel) -> str:
    """Concatenate token strings; [UNK] renders literally."""
    table = model.id_to_token
    parts = []
    for i in ids:
        if not 0 <= i < len(table):
            raise ValueError(f"token id {i} out of range [0, {len(table)})")
        parts.append(table[i])
    return "".join(parts)
