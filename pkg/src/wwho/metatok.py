"""Unified meta-vocabulary tokenizer.

Composes the router, syllabifier, syllable-pair model, and a foundation
backend into whole-string encode/decode over one contiguous ID space:
ids ``[0, V_bpe)`` belong to the foundation, ids ``[V_bpe, V_bpe+V_sgpe)``
are syllable-pair ids shifted by the foundation size, so the two spaces
can never collide. Decoding groups contiguous same-space runs and hands
each run to its owning backend.

The tokenizer is immutable after construction or load; encode and decode
are safe for any number of concurrent callers.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .foundation import (
    ByteFoundation,
    FoundationError,
    FoundationTokenizer,
    RankFileFoundation,
    byte_fallback,
    load_rank_file,
)
from .linguistrie import syllabify
from .router import OTHER, route
from .schema import LanguageSchema, parse_schema_dict, schema_to_dict, validate_schema
from .sgpe import MergeRule, SgpeModel, decode_segment, encode_segment

FORMAT_VERSION = 1

BPE_SPACE = "BPE"
SGPE_SPACE = "SGPE"


class MetaTokenizerError(ValueError):
    """Raised for malformed or inconsistent tokenizer files."""


def _merges_checksum(merges: list[list[str]]) -> str:
    canonical = json.dumps(merges, ensure_ascii=False, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass
class MetaTokenizer:
    foundation: FoundationTokenizer
    sgpe: SgpeModel
    schemas: list[LanguageSchema]
    _by_name: dict[str, LanguageSchema] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self._by_name = {s.name: s for s in self.schemas}
        missing = set(self.sgpe.schema_names) - set(self._by_name)
        if missing:
            raise MetaTokenizerError(
                f"model was trained with schemas {sorted(missing)} that are not loaded"
            )

    @property
    def offset(self) -> int:
        return self.foundation.vocab_size

    @property
    def total_vocab(self) -> int:
        return self.foundation.vocab_size + self.sgpe.vocab_size

    # -- encode / decode -------------------------------------------------

    def encode(self, text: str) -> list[int]:
        out: list[int] = []
        offset = self.offset
        for seg in route(text, self.schemas):
            if seg.script == OTHER:
                out.extend(self.foundation.encode(seg.text))
            else:
                sylls = syllabify(seg, self._by_name[seg.script])
                out.extend(i + offset for i in encode_segment(sylls, self.sgpe))
        return out

    def decode(self, ids: list[int]) -> str:
        offset = self.offset
        total = self.total_vocab
        for i in ids:
            if not 0 <= i < total:
                raise MetaTokenizerError(f"meta id {i} out of range [0, {total})")
        parts: list[str] = []
        i = 0
        n = len(ids)
        while i < n:
            in_sgpe = ids[i] >= offset
            j = i
            while j < n and (ids[j] >= offset) == in_sgpe:
                j += 1
            if in_sgpe:
                parts.append(decode_segment([x - offset for x in ids[i:j]], self.sgpe))
            else:
                parts.append(self.foundation.decode(ids[i:j]))
            i = j
        return "".join(parts)

    def token_strings(self, text: str) -> list[tuple[str, int, str]]:
        """Debug and evaluation surface: display string, meta id, ID space."""
        out: list[tuple[str, int, str]] = []
        offset = self.offset
        for seg in route(text, self.schemas):
            if seg.script == OTHER:
                for i in self.foundation.encode(seg.text):
                    out.append((self.foundation.token_string(i), i, BPE_SPACE))
            else:
                sylls = syllabify(seg, self._by_name[seg.script])
                for local in encode_segment(sylls, self.sgpe):
                    out.append(
                        (self.sgpe.id_to_token[local], local + offset, SGPE_SPACE)
                    )
        return out

    # -- persistence -----------------------------------------------------

    def save(self, path: str | Path) -> None:
        path = Path(path)
        merges = [[r.left, r.right] for r in self.sgpe.merges]
        foundation: dict = {
            "kind": self.foundation.kind,
            "name": self.foundation.name,
            "vocab_size": self.foundation.vocab_size,
            "content_hash": self.foundation.content_hash,
        }
        if isinstance(self.foundation, RankFileFoundation):
            foundation["rank_file"] = self.foundation.source_path
            foundation["pattern"] = self.foundation.pattern
        payload = {
            "format_version": FORMAT_VERSION,
            "wwho_version": __version__,
            "foundation": foundation,
            "schemas": [schema_to_dict(s) for s in self.schemas],
            "sgpe": {
                "vocab": list(self.sgpe.id_to_token),
                "merges": merges,
                "prune_threshold": self.sgpe.prune_threshold,
                "prune_scope": self.sgpe.prune_scope,
                "schema_names": list(self.sgpe.schema_names),
                "incomplete": self.sgpe.incomplete,
            },
            "total_vocab": self.total_vocab,
            "merges_checksum": _merges_checksum(merges),
        }
        path.write_text(
            json.dumps(payload, ensure_ascii=False, indent=1), encoding="utf-8"
        )

    @classmethod
    def load(cls, path: str | Path, rank_file: str | Path | None = None) -> "MetaTokenizer":
        path = Path(path)
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise MetaTokenizerError(f"cannot read tokenizer file {path}: {exc}") from exc

        version = payload.get("format_version")
        if version != FORMAT_VERSION:
            raise MetaTokenizerError(
                f"unsupported tokenizer format version {version!r} "
                f"(this build reads version {FORMAT_VERSION})"
            )

        sg = payload["sgpe"]
        merges_raw = [list(m) for m in sg["merges"]]
        stored_sum = payload.get("merges_checksum")
        if stored_sum != _merges_checksum(merges_raw):
            raise MetaTokenizerError("merges checksum mismatch: tokenizer file is corrupt")

        id_to_token = list(sg["vocab"])
        vocab = {tok: i for i, tok in enumerate(id_to_token)}
        if len(vocab) != len(id_to_token):
            raise MetaTokenizerError("sgpe vocab contains duplicate token strings")
        model = SgpeModel(
            vocab=vocab,
            merges=[MergeRule(l, r, k) for k, (l, r) in enumerate(merges_raw)],
            prune_threshold=sg["prune_threshold"],
            schema_names=tuple(sg["schema_names"]),
            prune_scope=sg.get("prune_scope", "all"),
            incomplete=sg.get("incomplete", False),
            id_to_token=id_to_token,
        )

        fdn = payload["foundation"]
        if fdn["kind"] == "byte":
            foundation: FoundationTokenizer = byte_fallback()
        elif fdn["kind"] == "rankfile":
            source = rank_file or fdn.get("rank_file")
            if source is None:
                raise MetaTokenizerError(
                    "tokenizer references a rank-file foundation; pass rank_file="
                )
            source = Path(source)
            if not source.is_absolute() and not source.exists():
                source = path.parent / source
            try:
                foundation = load_rank_file(source, pattern=fdn.get("pattern"))
            except (OSError, FoundationError) as exc:
                raise MetaTokenizerError(
                    f"cannot load referenced rank file {source}: {exc}"
                ) from exc
        else:
            raise MetaTokenizerError(f"unknown foundation kind {fdn['kind']!r}")
        if foundation.content_hash != fdn["content_hash"]:
            raise MetaTokenizerError(
                "foundation content hash mismatch: the referenced vocabulary "
                "is not the one this tokenizer was built with"
            )
        if foundation.vocab_size != fdn["vocab_size"]:
            raise MetaTokenizerError("foundation vocab size mismatch")

        schemas = []
        for sdata in payload["schemas"]:
            schema = parse_schema_dict(sdata, source=f"{path}#schemas")
            # Structural validation on every load; the exhaustive grammar
            # alignment ran when the schema file was first loaded, so a
            # small bound here just guards against a tampered embedding.
            violations = validate_schema(schema, alignment_bound=3)
            if violations:
                raise MetaTokenizerError(
                    f"embedded schema {schema.name!r} invalid: " + "; ".join(violations)
                )
            schemas.append(schema)

        tok = cls(foundation=foundation, sgpe=model, schemas=schemas)
        if payload["total_vocab"] != tok.total_vocab:
            raise MetaTokenizerError(
                f"total vocab mismatch: file says {payload['total_vocab']}, "
                f"contents give {tok.total_vocab}"
            )
        return tok

    def export_vocab(self, path: str | Path) -> None:
        """Write the meta-id -> token-string map (JSON, string keys)."""
        table: dict[str, str] = {}
        for i in range(self.foundation.vocab_size):
            table[str(i)] = self.foundation.token_string(i)
        for local, tok in enumerate(self.sgpe.id_to_token):
            table[str(local + self.offset)] = tok
        Path(path).write_text(
            json.dumps(table, ensure_ascii=False, indent=0), encoding="utf-8"
        )
