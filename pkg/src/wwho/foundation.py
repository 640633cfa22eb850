"""Foundation tokenizers for non-scripted text.

Two interchangeable backends sit behind the same contract: encode to ids
in ``[0, vocab_size)``, decode back, round-trip any valid Unicode.

* ``byte_fallback()`` is the self-contained testing backend: ids are the
  UTF-8 bytes themselves (vocab size 256).
* ``load_rank_file()`` loads a published byte-level BPE vocabulary: lines
  of ``base64(token bytes) <space> rank``. Text is split by the
  pre-tokenization pattern (from a sidecar config, or the documented
  default below), then each piece's bytes are merged greedily by rank.
"""

from __future__ import annotations

import base64
import hashlib
import json
from pathlib import Path
from typing import Protocol

import regex

# Default pre-tokenization split for rank-file vocabularies. Override with
# a sidecar ``<rank file>.config.json`` carrying {"pattern": "..."} when a
# vocabulary was published with a different split.
DEFAULT_PRETOKENIZE_PATTERN = "|".join(
    [
        r"""[^\r\n\p{L}\p{N}]?[\p{Lu}\p{Lt}\p{Lm}\p{Lo}\p{M}]*[\p{Ll}\p{Lm}\p{Lo}\p{M}]+(?i:'s|'t|'re|'ve|'m|'ll|'d)?""",
        r"""[^\r\n\p{L}\p{N}]?[\p{Lu}\p{Lt}\p{Lm}\p{Lo}\p{M}]+[\p{Ll}\p{Lm}\p{Lo}\p{M}]*(?i:'s|'t|'re|'ve|'m|'ll|'d)?""",
        r"""\p{N}{1,3}""",
        r""" ?[^\s\p{L}\p{N}]+[\r\n/]*""",
        r"""\s*[\r\n]+""",
        r"""\s+(?!\S)""",
        r"""\s+""",
    ]
)


class FoundationError(ValueError):
    """Raised for malformed rank files or invalid foundation ids."""


class FoundationTokenizer(Protocol):
    """Behavior contract both backends satisfy."""

    name: str
    kind: str
    vocab_size: int
    content_hash: str

    def encode(self, text: str) -> list[int]: ...
    def decode(self, ids: list[int]) -> str: ...
    def token_string(self, token_id: int) -> str: ...


class ByteFoundation:
    """UTF-8 bytes as token ids; the offline testing backend."""

    kind = "byte"
    name = "byte-fallback"
    vocab_size = 256

    def __init__(self) -> None:
        self.content_hash = hashlib.sha256(b"wwho-byte-fallback:v1:256").hexdigest()

    def encode(self, text: str) -> list[int]:
        return list(text.encode("utf-8"))

    def decode(self, ids: list[int]) -> str:
        self._check(ids)
        return bytes(ids).decode("utf-8", errors="replace")

    def token_string(self, token_id: int) -> str:
        self._check((token_id,))
        return bytes([token_id]).decode("utf-8", errors="replace")

    def _check(self, ids) -> None:
        for i in ids:
            if not 0 <= i < 256:
                raise FoundationError(f"byte id {i} out of range [0, 256)")


class RankFileFoundation:
    """Byte-level BPE over a rank file, reference merge semantics."""

    kind = "rankfile"

    def __init__(
        self,
        ranks: dict[bytes, int],
        pattern: str,
        name: str,
        content_hash: str,
        source_path: str | None = None,
    ) -> None:
        self.ranks = ranks
        self.pattern = pattern
        self.name = name
        self.content_hash = content_hash
        self.source_path = source_path
        self.vocab_size = max(ranks.values()) + 1
        self._tokens_by_id: dict[int, bytes] = {r: t for t, r in ranks.items()}
        self._splitter = regex.compile(pattern)

    def _pieces(self, text: str):
        # The split pattern covers normal text entirely; any uncovered
        # codepoints (pattern gaps) fall through as single-char pieces so
        # encode stays total.
        pos = 0
        for m in self._splitter.finditer(text):
            if m.start() > pos:
                for ch in text[pos : m.start()]:
                    yield ch
            yield m.group()
            pos = m.end()
        for ch in text[pos:]:
            yield ch

    def _merge_piece(self, piece: bytes) -> list[int]:
        ranks = self.ranks
        whole = ranks.get(piece)
        if whole is not None:
            return [whole]
        parts = [piece[i : i + 1] for i in range(len(piece))]
        while len(parts) > 1:
            best_rank = -1
            best_i = -1
            for i in range(len(parts) - 1):
                r = ranks.get(parts[i] + parts[i + 1])
                if r is not None and (best_rank < 0 or r < best_rank):
                    best_rank = r
                    best_i = i
            if best_i < 0:
                break
            parts[best_i : best_i + 2] = [parts[best_i] + parts[best_i + 1]]
        return [ranks[p] for p in parts]

    def encode(self, text: str) -> list[int]:
        out: list[int] = []
        for piece in self._pieces(text):
            out.extend(self._merge_piece(piece.encode("utf-8")))
        return out

    def decode(self, ids: list[int]) -> str:
        chunks = []
        for i in ids:
            tok = self._tokens_by_id.get(i)
            if tok is None:
                raise FoundationError(f"token id {i} not in rank vocabulary")
            chunks.append(tok)
        return b"".join(chunks).decode("utf-8", errors="replace")

    def token_string(self, token_id: int) -> str:
        tok = self._tokens_by_id.get(token_id)
        if tok is None:
            raise FoundationError(f"token id {token_id} not in rank vocabulary")
        return tok.decode("utf-8", errors="replace")


def byte_fallback() -> ByteFoundation:
    return ByteFoundation()


def load_rank_file(path: str | Path, pattern: str | None = None) -> RankFileFoundation:
    """Load a ``base64-token rank`` file into a byte-level BPE backend.

    The vocabulary must be byte-complete (all 256 single bytes present) so
    encode is total. Raises FoundationError on malformed lines, duplicate
    tokens, or duplicate ranks.
    """
    path = Path(path)
    raw = path.read_bytes()
    ranks: dict[bytes, int] = {}
    seen_ranks: set[int] = set()
    for lineno, line in enumerate(raw.splitlines(), start=1):
        if not line.strip():
            continue
        fields = line.split()
        if len(fields) != 2:
            raise FoundationError(f"{path}:{lineno}: expected 'base64 rank'")
        try:
            token = base64.b64decode(fields[0], validate=True)
        except Exception:
            raise FoundationError(f"{path}:{lineno}: invalid base64 token") from None
        try:
            rank = int(fields[1])
        except ValueError:
            raise FoundationError(f"{path}:{lineno}: invalid rank {fields[1]!r}") from None
        if token in ranks:
            raise FoundationError(f"{path}:{lineno}: duplicate token")
        if rank in seen_ranks:
            raise FoundationError(f"{path}:{lineno}: duplicate rank {rank}")
        ranks[token] = rank
        seen_ranks.add(rank)
    if not ranks:
        raise FoundationError(f"{path}: empty rank file")
    missing = [b for b in range(256) if bytes([b]) not in ranks]
    if missing:
        raise FoundationError(
            f"{path}: vocabulary is not byte-complete "
            f"({len(missing)} single bytes missing, first U+{missing[0]:02X})"
        )

    if pattern is None:
        sidecar = Path(str(path) + ".config.json")
        if sidecar.exists():
            pattern = json.loads(sidecar.read_text(encoding="utf-8"))["pattern"]
        else:
            pattern = DEFAULT_PRETOKENIZE_PATTERN

    return RankFileFoundation(
        ranks=ranks,
        pattern=pattern,
        name=path.stem,
        content_hash=hashlib.sha256(raw).hexdigest(),
        source_path=str(path),
    )
