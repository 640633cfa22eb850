# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled scanner kernel: the hot DFA loop from ``_scan_py``, verbatim.

Operates on the schema's numpy tables via typed memoryviews and reads the
text with Py_UCS4 indexing, so the inner loop never touches Python objects.
"""


def scan_spans(unicode text,
               const unsigned char[:] class_table,
               const short[:, :] trans,
               const unsigned char[:] accept):
    cdef Py_ssize_t n = len(text)
    cdef Py_ssize_t table_len = class_table.shape[0]
    cdef Py_ssize_t i = 0, j, last
    cdef long steps = 0
    cdef int cp, cls, tgt, state
    cdef Py_UCS4 ch
    spans = []
    while i < n:
        ch = text[i]
        cp = <int> ch
        steps += 1
        if cp == 32 or (9 <= cp <= 13):
            spans.append((i, i + 1, 3))
            i += 1
            continue
        cls = class_table[cp] if cp < table_len else 0
        tgt = trans[0, cls]
        if tgt < 0:
            if tgt == -3 or (tgt == -1 and cls == 0):
                spans.append((i, i + 1, 2))
            else:
                spans.append((i, i + 1, 1))
            i += 1
            continue
        state = tgt
        last = i + 1 if accept[state] else -1
        j = i + 1
        while j < n:
            steps += 1
            ch = text[j]
            cp = <int> ch
            if cp == 32 or (9 <= cp <= 13):
                break
            cls = class_table[cp] if cp < table_len else 0
            tgt = trans[state, cls]
            if tgt < 0:
                break
            state = tgt
            j += 1
            if accept[state]:
                last = j
        if last >= i + 1:
            spans.append((i, last, 0))
            i = last
        else:
            spans.append((i, i + 1, 1))
            i += 1
    return spans, steps
