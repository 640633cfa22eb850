"""Pure-Python scanner kernel.

The compiled twin in ``_kernels.pyx`` implements exactly the same loop;
``wwho._accel`` picks whichever is available at import time. Keep the two
in lockstep: the parity test suite compares them on fuzzed input.

Span kinds are small ints so the kernel stays object-free:
0 = syllable, 1 = orphan, 2 = passthrough, 3 = whitespace.
"""

from __future__ import annotations

KIND_SYLLABLE = 0
KIND_ORPHAN = 1
KIND_PASSTHROUGH = 2
KIND_WHITESPACE = 3

# ASCII whitespace is emitted as standalone whitespace spans; anything else
# (including typographic Unicode spaces) classifies like a normal codepoint.
_WS_CODES = frozenset((9, 10, 11, 12, 13, 32))


def scan_spans(
    text: str,
    class_list: list[int],
    trans_rows: list[list[int]],
    accept_flags: list[bool],
) -> tuple[list[tuple[int, int, int]], int]:
    """Maximal-munch scan; returns (spans, codepoints examined).

    ``class_list`` maps codepoint -> class index (0 = other, out-of-table
    codepoints are other). ``trans_rows`` is the transition matrix with
    START at row 0; targets < 0 are boundary (-1), orphan (-2), or
    passthrough (-3). On a boundary the last accepted position is emitted
    and scanning resumes there, so each codepoint is examined at most
    twice (once munching forward, once after a backtrack).
    """
    n = len(text)
    table_len = len(class_list)
    spans: list[tuple[int, int, int]] = []
    steps = 0
    start_row = trans_rows[0]
    i = 0
    while i < n:
        cp = ord(text[i])
        steps += 1
        if cp in _WS_CODES:
            spans.append((i, i + 1, KIND_WHITESPACE))
            i += 1
            continue
        cls = class_list[cp] if cp < table_len else 0
        tgt = start_row[cls]
        if tgt < 0:
            if tgt == -3 or (tgt == -1 and cls == 0):
                spans.append((i, i + 1, KIND_PASSTHROUGH))
            else:
                spans.append((i, i + 1, KIND_ORPHAN))
            i += 1
            continue
        state = tgt
        last = i + 1 if accept_flags[state] else -1
        j = i + 1
        while j < n:
            steps += 1
            cp = ord(text[j])
            if cp in _WS_CODES:
                break
            cls = class_list[cp] if cp < table_len else 0
            nxt = trans_rows[state][cls]
            if nxt < 0:
                break
            state = nxt
            j += 1
            if accept_flags[state]:
                last = j
        if last >= i + 1:
            spans.append((i, last, KIND_SYLLABLE))
            i = last
        else:
            # Munch began but never hit an accept state (possible only for
            # hand-built schemas whose START row targets a non-accepting
            # state): emit one codepoint so the scan always progresses.
            spans.append((i, i + 1, KIND_ORPHAN))
            i += 1
    return spans, steps
