#!/usr/bin/env python3
"""Benchmark the scanner kernels: compiled extension vs pure Python.

Generates a deterministic mixed corpus per script, runs the maximal-munch
scan through both kernels, and reports codepoints/second plus the speedup.
The pure-Python kernel always runs; the compiled row appears when the
extension has been built (``pip install -e .`` or
``python setup.py build_ext --inplace``).

Usage: python benchmarks/bench_scan.py [--chars N] [--repeat K]
"""

from __future__ import annotations

import argparse
import random
import sys
import time

from wwho import default_schemas
from wwho import _scan_py

try:
    from wwho import _kernels
except ImportError:
    _kernels = None

SINHALA_POOL = (
    [chr(c) for c in range(0x0D9A, 0x0DC7)]
    + [chr(c) for c in range(0x0D85, 0x0D97)]
    + [chr(c) for c in range(0x0DCF, 0x0DE0)]
    + ["්", "‍", "ං", " ", "a", "1"]
)
DEVANAGARI_POOL = (
    [chr(c) for c in range(0x0915, 0x093A)]
    + [chr(c) for c in range(0x0904, 0x0915)]
    + [chr(c) for c in range(0x093E, 0x094D)]
    + ["्", "‍", "‌", "़", "ं", " ", "x"]
)


def make_text(pool: list[str], n_chars: int, seed: int) -> str:
    rng = random.Random(seed)
    return "".join(rng.choice(pool) for _ in range(n_chars))


def run_python(text: str, schema) -> float:
    t0 = time.perf_counter()
    _scan_py.scan_spans(
        text, schema._class_list, schema._trans_rows, schema._accept_flags
    )
    return time.perf_counter() - t0


def run_compiled(text: str, schema) -> float:
    t0 = time.perf_counter()
    _kernels.scan_spans(text, schema._class_table, schema._trans, schema._accept)
    return time.perf_counter() - t0


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--chars", type=int, default=2_000_000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    schemas = {s.name: s for s in default_schemas()}
    corpora = {
        "sinhala": make_text(SINHALA_POOL, args.chars, 1),
        "devanagari": make_text(DEVANAGARI_POOL, args.chars, 2),
    }

    print(f"{'script':<12} {'kernel':<10} {'chars/s':>14} {'best of':>8}")
    for name, text in corpora.items():
        schema = schemas[name]
        py_best = min(run_python(text, schema) for _ in range(args.repeat))
        py_rate = len(text) / py_best
        print(f"{name:<12} {'python':<10} {py_rate:>14,.0f} {args.repeat:>8}")
        if _kernels is not None:
            c_best = min(run_compiled(text, schema) for _ in range(args.repeat))
            c_rate = len(text) / c_best
            print(f"{name:<12} {'compiled':<10} {c_rate:>14,.0f} {args.repeat:>8}"
                  f"   ({c_rate / py_rate:.1f}x)")
        else:
            print(f"{name:<12} {'compiled':<10} {'not built':>14}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
