"""Script routing: partition text into script-tagged segments.

A single forward pass over the codepoints resolves each one to a script,
with two context rules layered on top of the plain block lookup:

* a joiner (ZWJ/ZWNJ) adopts the script of the codepoint before it when
  that script declares the joiner; otherwise the script of the next
  non-joiner codepoint; otherwise OTHER, so conjuncts are never split;
* a single space immediately before a scripted codepoint moves into that
  script's segment (earlier spaces in a run stay OTHER), which is how
  space-prefixed words survive into the syllabifier.

Segments concatenate back to the input exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .schema import LanguageSchema

OTHER = "OTHER"

_SPACE = 0x20


@dataclass(frozen=True)
class Segment:
    """A routed span: script name (or OTHER), its text, and whether the
    first codepoint is a space absorbed from the left."""

    script: str
    text: str
    leading_space: bool = False


class ScriptIndex:
    """O(1) codepoint -> script lookup built from a set of schemas."""

    def __init__(self, schemas: list[LanguageSchema]):
        self.schemas = list(schemas)
        self.by_name = {s.name: s for s in schemas}
        if len(self.by_name) != len(schemas):
            raise ValueError("schemas must have distinct names")
        ranges = sorted(
            (lo, hi, s.name) for s in schemas for lo, hi in s.blocks
        )
        for (lo1, hi1, n1), (lo2, hi2, n2) in zip(ranges, ranges[1:]):
            if lo2 <= hi1 and n1 != n2:
                raise ValueError(
                    f"schema blocks overlap near U+{lo2:04X} ({n1} vs {n2}); "
                    "block ranges must be pairwise disjoint across schemas"
                )
        max_cp = ranges[-1][1] if ranges else 0
        self._table: list[str | None] = [None] * (max_cp + 1)
        for s in schemas:
            for lo, hi in s.blocks:
                for cp in range(lo, hi + 1):
                    self._table[cp] = s.name
        # joiner -> names of schemas that declare it
        self._joiner_owners: dict[int, set[str]] = {}
        for s in schemas:
            for j in s.joiners:
                self._joiner_owners.setdefault(j, set()).add(s.name)

    def owner(self, cp: int) -> str | None:
        if cp < len(self._table):
            return self._table[cp]
        return None

    def is_joiner(self, cp: int) -> bool:
        return cp in self._joiner_owners

    def joiner_belongs(self, cp: int, script: str) -> bool:
        return script in self._joiner_owners.get(cp, ())


# route() is called per line during training and evaluation; the index is
# cached per schema set (keyed and verified by object identity; the cache
# holds the schemas alive, so ids cannot be reused while the entry lives).
_index_cache: dict[tuple[int, ...], ScriptIndex] = {}


def get_index(schemas: list[LanguageSchema]) -> ScriptIndex:
    key = tuple(id(s) for s in schemas)
    idx = _index_cache.get(key)
    if idx is not None and len(idx.schemas) == len(schemas) and all(
        a is b for a, b in zip(idx.schemas, schemas)
    ):
        return idx
    idx = ScriptIndex(schemas)
    _index_cache[key] = idx
    return idx


def script_of(cp: int | str, schemas: list[LanguageSchema]) -> str:
    """Block-based script of one codepoint (context-free; joiners are OTHER)."""
    if isinstance(cp, str):
        cp = ord(cp)
    for s in schemas:
        if s.in_blocks(cp):
            return s.name
    return OTHER


def route(
    text: str,
    schemas: list[LanguageSchema],
    *,
    ops: list[int] | None = None,
) -> list[Segment]:
    """Partition ``text`` into maximal script runs with joiner and space
    absorption. Total over any input; unassignable codepoints are OTHER.

    ``ops`` is a test hook: when given, the number of elementary codepoint
    visits is appended so linear-time behavior can be asserted.
    """
    index = get_index(schemas)
    n = len(text)
    if n == 0:
        if ops is not None:
            ops.append(0)
        return []

    cps = [ord(ch) for ch in text]
    visits = n

    # Right-to-left: script of the next non-joiner codepoint, for joiners
    # with no scripted predecessor.
    next_owner: list[str | None] = [None] * n
    following: str | None = None
    for i in range(n - 1, -1, -1):
        if index.is_joiner(cps[i]):
            next_owner[i] = following
        else:
            following = index.owner(cps[i])
            next_owner[i] = following
    visits += n

    # Left-to-right: resolve every codepoint to a script.
    resolved: list[str] = [OTHER] * n
    for i, cp in enumerate(cps):
        if index.is_joiner(cp):
            prev = resolved[i - 1] if i > 0 else OTHER
            if prev != OTHER and index.joiner_belongs(cp, prev):
                resolved[i] = prev
            else:
                nxt = next_owner[i]
                if nxt is not None and index.joiner_belongs(cp, nxt):
                    resolved[i] = nxt
        else:
            owner = index.owner(cp)
            resolved[i] = owner if owner is not None else OTHER
    visits += n

    # Space absorption: a space directly before a scripted codepoint joins
    # that script. Only the last space of a run is adjacent, so exactly one
    # space is ever absorbed.
    absorbed = [False] * n
    for i, cp in enumerate(cps):
        if cp == _SPACE and i + 1 < n and resolved[i + 1] != OTHER:
            resolved[i] = resolved[i + 1]
            absorbed[i] = True
    visits += n

    segments: list[Segment] = []
    start = 0
    for i in range(1, n + 1):
        if i == n or resolved[i] != resolved[start]:
            segments.append(
                Segment(
                    script=resolved[start],
                    text=text[start:i],
                    leading_space=resolved[start] != OTHER and absorbed[start],
                )
            )
            start = i
    if ops is not None:
        ops.append(visits)
    return segments
