"""Scanner kernel selection.

Prefers the compiled extension when it has been built; falls back to the
pure-Python twin otherwise. ``WWHO_PURE_PYTHON=1`` forces the fallback,
which the benchmark and the kernel parity tests use to pin one side.
"""

from __future__ import annotations

import os

from . import _scan_py

_kernels = None
if os.environ.get("WWHO_PURE_PYTHON") != "1":
    try:
        from . import _kernels  # type: ignore[no-redef]
    except ImportError:
        _kernels = None


def implementation() -> str:
    return "compiled" if _kernels is not None else "python"


def scan_spans(text: str, schema) -> tuple[list[tuple[int, int, int]], int]:
    """Run the maximal-munch scan with the selected kernel."""
    if _kernels is not None:
        return _kernels.scan_spans(
            text, schema._class_table, schema._trans, schema._accept
        )
    return _scan_py.scan_spans(
        text, schema._class_list, schema._trans_rows, schema._accept_flags
    )
