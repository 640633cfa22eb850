"""The compiled scanner kernel and the pure-Python twin must be identical."""

import random

import pytest

from wwho import _scan_py
from wwho._accel import implementation

try:
    from wwho import _kernels
except ImportError:
    _kernels = None

from oracles import DEVANAGARI, SINHALA, fuzz_segment

needs_ext = pytest.mark.skipif(
    _kernels is None, reason="compiled kernel not built in this environment"
)


def _run_py(text, schema):
    return _scan_py.scan_spans(
        text, schema._class_list, schema._trans_rows, schema._accept_flags
    )


def _run_c(text, schema):
    return _kernels.scan_spans(
        text, schema._class_table, schema._trans, schema._accept
    )


@needs_ext
def test_kernels_agree_on_fuzz(schemas):
    rng = random.Random(0xC0DE)
    pools = {"sinhala": SINHALA, "devanagari": DEVANAGARI}
    for schema in schemas:
        for _ in range(3000):
            text = fuzz_segment(rng, pools[schema.name], max_len=40)
            assert _run_c(text, schema) == _run_py(text, schema)


@needs_ext
def test_kernels_agree_on_edge_inputs(schemas):
    cases = [
        "",
        " ",
        "\t\n\r",
        "‍‍",
        "ක" * 200,
        "ක්" * 100,
        "\U0001F600ක",  # astral codepoint before a consonant
        "￿",
        " क़्" + "‌" + "क",
    ]
    for schema in schemas:
        for text in cases:
            assert _run_c(text, schema) == _run_py(text, schema)


def test_selected_implementation_reports():
    assert implementation() in ("compiled", "python")
