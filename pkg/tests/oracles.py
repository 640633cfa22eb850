"""Independent reference implementations and corpus generators.

Everything here deliberately avoids the production code paths it checks:
the syllabifier oracle is driven by the schema's grammar pattern alone
(never the DFA tables or the scanner), and the trainer reference recounts
every pair from scratch each iteration.
"""

from __future__ import annotations

import random
from collections import Counter

from wwho.linguistrie import ORPHAN, PASSTHROUGH, SYLLABLE, WHITESPACE, Syllable
from wwho.schema import OTHER_TAG, LanguageSchema
from wwho.sgpe import SPACE_ID, SPACE_TOKEN, UNK_ID, UNK_TOKEN, CorpusCounts, MergeRule

# Must match the scanner's notion of standalone whitespace.
WS_CHARS = "\t\n\x0b\x0c\r "


def oracle_syllabify(text: str, schema: LanguageSchema) -> list[Syllable]:
    """Greedy longest-prefix syllabifier driven only by the grammar regex.

    At each position: whitespace follows the single-space-prefix rule;
    otherwise take the longest prefix of class tags the grammar accepts;
    otherwise emit one codepoint (passthrough for class O, orphan for any
    script class).
    """
    tags = schema.class_string(text)
    pattern = schema.pattern
    out: list[Syllable] = []
    pending_space = False

    def flush_pending() -> None:
        nonlocal pending_space
        if pending_space:
            out.append(Syllable(" ", WHITESPACE))
            pending_space = False

    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in WS_CHARS:
            flush_pending()
            if ch == " ":
                pending_space = True
            else:
                out.append(Syllable(ch, WHITESPACE))
            i += 1
            continue
        length = pattern.longest_match(tags, i)
        if length >= 1:
            if pending_space:
                out.append(Syllable(" " + text[i : i + length], SYLLABLE, True))
                pending_space = False
            else:
                out.append(Syllable(text[i : i + length], SYLLABLE))
            i += length
        else:
            flush_pending()
            kind = PASSTHROUGH if tags[i] == OTHER_TAG else ORPHAN
            out.append(Syllable(ch, kind))
            i += 1
    flush_pending()
    return out


# -- naive trainer reference -------------------------------------------------


def reference_train_from_counts(
    counts: CorpusCounts,
    vocab_size: int,
    prune_threshold: int,
    prune_scope: str = "all",
    min_pair_freq: int = 2,
) -> tuple[dict[str, int], list[MergeRule], bool]:
    """Full-recount merge loop; must agree with the incremental trainer."""
    pruned = {
        u
        for u, c in counts.unit_counts.items()
        if c < prune_threshold
        and (prune_scope == "all" or counts.unit_kinds[u] == SYLLABLE)
    }
    vocab: dict[str, int] = {UNK_TOKEN: UNK_ID, SPACE_TOKEN: SPACE_ID}
    for u, _ in sorted(counts.unit_order.items(), key=lambda kv: kv[1]):
        if u not in pruned:
            vocab[u] = len(vocab)
    id_to_token = [""] * len(vocab)
    for t, i in vocab.items():
        id_to_token[i] = t

    words = [
        [vocab.get(u, UNK_ID) for u in word] for word in counts.word_counts
    ]
    freqs = list(counts.word_counts.values())

    merges: list[MergeRule] = []
    incomplete = False
    while len(vocab) < vocab_size:
        pairs: Counter = Counter()
        for w, f in zip(words, freqs):
            for i in range(len(w) - 1):
                a, b = w[i], w[i + 1]
                if a >= 2 and b >= 2:
                    pairs[(a, b)] += f
        best = None
        for (a, b), c in pairs.items():
            if c < min_pair_freq:
                continue
            key = (-c, a, b)
            if best is None or key < best:
                best = key
        if best is None:
            incomplete = True
            break
        _, a, b = best
        merged_str = id_to_token[a] + id_to_token[b]
        merged_id = vocab.get(merged_str)
        if merged_id is None:
            merged_id = len(vocab)
            vocab[merged_str] = merged_id
            id_to_token.append(merged_str)
        merges.append(MergeRule(id_to_token[a], id_to_token[b], len(merges)))
        for wi, w in enumerate(words):
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
    return vocab, merges, incomplete


# -- codepoint pools and generators ------------------------------------------

SINHALA = {
    "C": list(range(0x0D9A, 0x0DC7)),
    "V": list(range(0x0D85, 0x0D97)),
    "P": list(range(0x0DCF, 0x0DE0)) + [0x0DF2, 0x0DF3],
    "H": [0x0DCA],
    "Z": [0x200D],
    "M": [0x0D82, 0x0D83],
    "block_other": [0x0D81, 0x0D97, 0x0DE6, 0x0DEF, 0x0DF4],
}

DEVANAGARI = {
    "C": list(range(0x0915, 0x093A)) + list(range(0x0958, 0x0960)),
    "V": list(range(0x0904, 0x0915)),
    "P": list(range(0x093E, 0x094D)) + [0x094E, 0x094F],
    "H": [0x094D],
    "Z": [0x200D, 0x200C],
    "N": [0x093C],
    "M": [0x0900, 0x0901, 0x0902, 0x0903, 0x093D, 0x0950, 0x1CD0, 0xA8E0],
    "block_other": [0x0964, 0x0965, 0x0966, 0x096F, 0x0970],
}

ASCII_NOISE = list("abcXYZ019 .,!/-\t")
LATIN1_NOISE = [0x00E9, 0x00FC, 0x4E2D, 0x1F600]  # other scripts stay OTHER


def fuzz_segment(rng: random.Random, pools: dict, max_len: int = 24) -> str:
    """Random codepoints from the script block, joiners, space, and noise."""
    charset: list[int] = []
    for key in ("C", "V", "P", "H", "Z", "M", "N", "block_other"):
        charset.extend(pools.get(key, ()))
    n = rng.randint(0, max_len)
    out = []
    for _ in range(n):
        r = rng.random()
        if r < 0.82:
            out.append(chr(rng.choice(charset)))
        elif r < 0.90:
            out.append(" ")
        elif r < 0.96:
            out.append(rng.choice(ASCII_NOISE))
        else:
            out.append(chr(rng.choice(LATIN1_NOISE)))
    return "".join(out)


def valid_syllable(rng: random.Random, pools: dict, nukta: bool = False) -> str:
    """One grammar-valid syllable built from the class pools."""
    if rng.random() < 0.15:
        s = chr(rng.choice(pools["V"]))
        if rng.random() < 0.2:
            s += chr(rng.choice(pools["M"]))
        return s
    s = chr(rng.choice(pools["C"]))
    if nukta and rng.random() < 0.15:
        s += chr(rng.choice(pools["N"]))
    for _ in range(rng.choice((0, 0, 0, 1, 1, 2))):
        s += chr(pools["H"][0])
        if rng.random() < 0.3:
            s += chr(rng.choice(pools["Z"]))
        s += chr(rng.choice(pools["C"]))
        if nukta and rng.random() < 0.1:
            s += chr(rng.choice(pools["N"]))
    tail = rng.random()
    if tail < 0.5:
        s += chr(rng.choice(pools["P"]))
    elif tail < 0.6:
        s += chr(pools["H"][0])
    if rng.random() < 0.15:
        s += chr(rng.choice(pools["M"]))
    return s


def word_lexicon(
    rng: random.Random, pools: dict, size: int, nukta: bool = False
) -> list[str]:
    words = set()
    while len(words) < size:
        n_syll = rng.choice((1, 2, 2, 3, 3, 4))
        words.add("".join(valid_syllable(rng, pools, nukta) for _ in range(n_syll)))
    return sorted(words)


def pooled_word_lexicon(
    rng: random.Random, pools: dict, n_syllables: int, n_words: int,
    nukta: bool = False,
) -> list[str]:
    """Words drawn from a bounded syllable pool, keeping the base unit
    inventory small enough for tight vocabulary targets."""
    syls: set[str] = set()
    while len(syls) < n_syllables:
        syls.add(valid_syllable(rng, pools, nukta))
    pool = sorted(syls)
    words: set[str] = set()
    while len(words) < n_words:
        k = rng.choice((1, 2, 2, 3, 3, 4))
        words.add("".join(rng.choices(pool, k=k)))
    return sorted(words)


def zipf_sentences(
    rng: random.Random, lexicon: list[str], n_sentences: int,
    words_per_sentence: tuple[int, int] = (3, 9),
) -> list[str]:
    """Sentences drawn from a lexicon with a heavy-tailed word distribution."""
    weights = [1.0 / (i + 1) for i in range(len(lexicon))]
    out = []
    for _ in range(n_sentences):
        k = rng.randint(*words_per_sentence)
        out.append(" ".join(rng.choices(lexicon, weights=weights, k=k)))
    return out


def ascii_sentences(rng: random.Random, n: int) -> list[str]:
    vocab = (
        "the quick brown fox jumps over lazy dog a an is was were to of and "
        "in on for with by 0 1 42 100 3.14 hello world code token".split()
    )
    punck = ["", ".", ",", "!", "?", ";", ":", " -- ", "...", "'s"]
    out = []
    for _ in range(n):
        k = rng.randint(1, 12)
        s = " ".join(rng.choices(vocab, k=k)) + rng.choice(punck)
        out.append(s)
    return out


def mixed_fuzz_corpus(rng: random.Random, total_chars: int) -> list[str]:
    """Lines mixing both scripts, joiners, ASCII, and noise; for round-trips."""
    sin_lex = word_lexicon(rng, SINHALA, 120)
    dev_lex = word_lexicon(rng, DEVANAGARI, 120, nukta=True)
    ascii_lex = "apple tree 42 xyz! query".split()
    lines = []
    chars = 0
    while chars < total_chars:
        parts = []
        for _ in range(rng.randint(2, 9)):
            r = rng.random()
            if r < 0.35:
                parts.append(rng.choice(sin_lex))
            elif r < 0.7:
                parts.append(rng.choice(dev_lex))
            elif r < 0.85:
                parts.append(rng.choice(ascii_lex))
            else:
                parts.append(fuzz_segment(rng, rng.choice((SINHALA, DEVANAGARI)), 8))
        line = " ".join(parts).replace("\n", " ").replace("\r", " ")
        lines.append(line)
        chars += len(line)
    return lines
