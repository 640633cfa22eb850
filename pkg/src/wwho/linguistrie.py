"""Maximal-munch syllabification of routed segments.

The scanner walks the schema's DFA from each start position, remembers the
last position where it stood in an accept state, and on a boundary signal
(missing transition, whitespace, or end of input) emits the text up to
that position and resumes there. Codepoints whose first step lands in an
emit state come out as single-codepoint orphan or passthrough tokens, and
ASCII whitespace is emitted standalone, except that a single space becomes
a prefix on the next syllable. Every codepoint is emitted exactly once, so
concatenating the emissions reproduces the segment.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import _accel
from ._scan_py import KIND_ORPHAN, KIND_PASSTHROUGH, KIND_SYLLABLE, KIND_WHITESPACE
from .router import OTHER, Segment, route
from .schema import LanguageSchema

SYLLABLE = "SYLLABLE"
ORPHAN = "ORPHAN"
PASSTHROUGH = "PASSTHROUGH"
WHITESPACE = "WHITESPACE"

_KIND_NAMES = {
    KIND_SYLLABLE: SYLLABLE,
    KIND_ORPHAN: ORPHAN,
    KIND_PASSTHROUGH: PASSTHROUGH,
    KIND_WHITESPACE: WHITESPACE,
}


@dataclass(frozen=True)
class Syllable:
    """One scanner emission. For SYLLABLE kind, ``text`` minus the optional
    space prefix is accepted by the schema grammar; orphan and passthrough
    emissions from the scanner are exactly one codepoint."""

    text: str
    kind: str
    space_prefixed: bool = False


def syllabify(
    segment: Segment | str,
    schema: LanguageSchema,
    *,
    steps: list[int] | None = None,
) -> list[Syllable]:
    """Decompose one segment (or raw string) into syllable emissions.

    A pending single space attaches as a prefix to the next SYLLABLE; if
    the next emission is not a syllable (or the segment ends), the space
    is emitted as a standalone whitespace token instead. ``steps`` is a
    test hook receiving the number of codepoints the kernel examined.
    """
    if isinstance(segment, Segment):
        if segment.script == OTHER:
            raise ValueError("cannot syllabify an OTHER segment; route it to the foundation")
        if segment.script != schema.name:
            raise ValueError(
                f"segment script {segment.script!r} does not match schema {schema.name!r}"
            )
        text = segment.text
    else:
        text = segment

    spans, nsteps = _accel.scan_spans(text, schema)
    if steps is not None:
        steps.append(nsteps)

    out: list[Syllable] = []
    pending_space = False
    for start, end, kind in spans:
        if kind == KIND_WHITESPACE:
            if pending_space:
                out.append(Syllable(" ", WHITESPACE))
                pending_space = False
            if text[start] == " ":
                pending_space = True
            else:
                out.append(Syllable(text[start:end], WHITESPACE))
        elif kind == KIND_SYLLABLE:
            if pending_space:
                out.append(Syllable(" " + text[start:end], SYLLABLE, space_prefixed=True))
                pending_space = False
            else:
                out.append(Syllable(text[start:end], SYLLABLE))
        else:
            if pending_space:
                out.append(Syllable(" ", WHITESPACE))
                pending_space = False
            out.append(Syllable(text[start:end], _KIND_NAMES[kind]))
    if pending_space:
        out.append(Syllable(" ", WHITESPACE))
    return out


def syllabify_text(text: str, schemas: list[LanguageSchema]) -> list[Syllable]:
    """Route, then syllabify every scripted segment.

    OTHER segments come back unchanged as single passthrough-run items
    (they may span many codepoints; the single-codepoint rule applies to
    scanner emissions, not to routed foundation text).
    """
    by_name = {s.name: s for s in schemas}
    out: list[Syllable] = []
    for seg in route(text, schemas):
        if seg.script == OTHER:
            out.append(Syllable(seg.text, PASSTHROUGH))
        else:
            out.extend(syllabify(seg, by_name[seg.script]))
    return out
