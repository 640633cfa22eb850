"""Language schema loading, validation, and compilation.

A schema file describes one script: its Unicode blocks, joiner codepoints,
character classes, an explicit DFA transition table, and the syllable
grammar as a tag pattern. Loading compiles the schema into flat lookup
tables so classification is O(1) and the scanner can run off integer
arrays. Compiled schemas are immutable and safe to share across threads.

Schema file format (JSON, one object per script):

    name           script identifier, e.g. "sinhala"
    blocks         list of inclusive hex ranges, e.g. ["0D80-0DFF"]
    joiners        codepoints treated as in-script connectors (hex strings)
    classes        map class tag -> list of hex ranges/points; the tag "O"
                   is implicit and covers unassigned in-block codepoints
    states         DFA table rows, START first; ORPHAN and PASSTHROUGH are
                   implicit emit states and appear only as targets
    accept_states  subset of states
    transitions    map state -> {class tag -> state | ORPHAN | PASSTHROUGH};
                   a missing entry is a boundary signal
    grammar        syllable grammar as a tag pattern (see wwho.grammar)
    notes          optional list of free-form strings
"""

from __future__ import annotations

import functools
import itertools
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .grammar import TagPattern, TagPatternError

START = "START"
ACCEPT = "ACCEPT"
ORPHAN = "ORPHAN"
PASSTHROUGH = "PASSTHROUGH"
EMIT_STATES = (ORPHAN, PASSTHROUGH)

OTHER_TAG = "O"

# Sentinel codes used in the compiled transition matrix.
BOUNDARY_CODE = -1
ORPHAN_CODE = -2
PASSTHROUGH_CODE = -3

DEFAULT_ALIGNMENT_BOUND = 6


class SchemaError(ValueError):
    """Raised when a schema file cannot be parsed or fails validation."""


@dataclass(frozen=True)
class CharClass:
    """One named character class: a tag and its codepoint ranges."""

    tag: str
    ranges: tuple[tuple[int, int], ...]

    def __contains__(self, cp: int) -> bool:
        return any(lo <= cp <= hi for lo, hi in self.ranges)

    def codepoints(self):
        for lo, hi in self.ranges:
            yield from range(lo, hi + 1)


@dataclass(frozen=True)
class DfaTable:
    """Explicit transition table with named states.

    ``scan_states`` are the table rows; the two emit states ORPHAN and
    PASSTHROUGH are implicit, appear only as transition targets, and are
    included in ``states`` for completeness.
    """

    scan_states: tuple[str, ...]
    accept_states: frozenset[str]
    transitions: dict[str, dict[str, str]]

    @property
    def states(self) -> frozenset[str]:
        return frozenset(self.scan_states) | frozenset(EMIT_STATES)


@dataclass
class LanguageSchema:
    """A compiled script schema: classifier, DFA, and grammar."""

    name: str
    blocks: tuple[tuple[int, int], ...]
    joiners: tuple[int, ...]
    classes: tuple[CharClass, ...]
    dfa: DfaTable
    grammar: str
    notes: tuple[str, ...] = ()
    source: str | None = None

    # Compiled artifacts, filled in by _compile().
    class_tags: tuple[str, ...] = field(default=(), repr=False)
    pattern: TagPattern | None = field(default=None, repr=False)
    _class_table: np.ndarray | None = field(default=None, repr=False)
    _trans: np.ndarray | None = field(default=None, repr=False)
    _accept: np.ndarray | None = field(default=None, repr=False)
    _state_index: dict[str, int] = field(default_factory=dict, repr=False)
    _tag_index: dict[str, int] = field(default_factory=dict, repr=False)
    _trans_rows: list[list[int]] = field(default_factory=list, repr=False)
    _accept_flags: list[bool] = field(default_factory=list, repr=False)
    _class_list: list[int] = field(default_factory=list, repr=False)

    def __post_init__(self) -> None:
        self._compile()

    def _compile(self) -> None:
        # Tag order: O first so the table default (0) means "other".
        self.class_tags = (OTHER_TAG, *(c.tag for c in self.classes))
        tag_index = {t: i for i, t in enumerate(self.class_tags)}
        self._tag_index = tag_index

        max_cp = 0
        for lo, hi in self.blocks:
            max_cp = max(max_cp, hi)
        for cls in self.classes:
            for lo, hi in cls.ranges:
                max_cp = max(max_cp, hi)
        max_cp = max(max_cp, *self.joiners) if self.joiners else max_cp

        table = np.zeros(max_cp + 2, dtype=np.uint8)
        for cls in self.classes:
            for lo, hi in cls.ranges:
                table[lo : hi + 1] = tag_index[cls.tag]
        self._class_table = table

        states = self.dfa.scan_states
        self._state_index = {s: i for i, s in enumerate(states)}
        trans = np.full((len(states), len(self.class_tags)), BOUNDARY_CODE, dtype=np.int16)
        for state, row in self.dfa.transitions.items():
            if state in EMIT_STATES:
                continue  # isolation violation; validate_schema reports it
            si = self._state_index[state]
            for tag, target in row.items():
                if target == ORPHAN:
                    code = ORPHAN_CODE
                elif target == PASSTHROUGH:
                    code = PASSTHROUGH_CODE
                else:
                    code = self._state_index[target]
                trans[si, tag_index[tag]] = code
        self._trans = trans

        accept = np.zeros(len(states), dtype=np.uint8)
        for s in self.dfa.accept_states:
            accept[self._state_index[s]] = 1
        self._accept = accept

        self._trans_rows = trans.tolist()
        self._accept_flags = [bool(a) for a in accept]
        self._class_list = table.tolist()
        self.pattern = TagPattern(self.grammar)

    # -- classification ------------------------------------------------

    def classify(self, cp: int) -> str:
        """Class tag for a codepoint; O when outside every class."""
        table = self._class_table
        if 0 <= cp < len(table):
            return self.class_tags[table[cp]]
        return OTHER_TAG

    def in_blocks(self, cp: int) -> bool:
        return any(lo <= cp <= hi for lo, hi in self.blocks)

    def class_string(self, text: str) -> str:
        """Map every codepoint of ``text`` to its class tag."""
        return "".join(self.classify(ord(ch)) for ch in text)

    # -- DFA simulation (used for validation; the scanner has its own loop)

    def dfa_accepts(self, tags: str) -> bool:
        """Run the transition table over a tag string, START to finish."""
        trans = self._trans_rows
        tag_index = self._tag_index
        state = self._state_index[START]
        for tag in tags:
            ti = tag_index.get(tag)
            if ti is None:
                return False
            nxt = trans[state][ti]
            if nxt < 0:
                # Boundary or an emit state: emit states are not accepting.
                return False
            state = nxt
        return bool(self._accept_flags[state])


def _parse_hex_point(text: str, where: str) -> int:
    cleaned = text.strip().upper().removeprefix("U+")
    try:
        return int(cleaned, 16)
    except ValueError:
        raise SchemaError(f"{where}: {text!r} is not a hex codepoint") from None


def _parse_ranges(items, where: str) -> tuple[tuple[int, int], ...]:
    if not isinstance(items, list):
        raise SchemaError(f"{where}: expected a list of hex ranges")
    out = []
    for item in items:
        if not isinstance(item, str):
            raise SchemaError(f"{where}: expected hex strings, got {item!r}")
        if "-" in item:
            lo_s, _, hi_s = item.partition("-")
            lo = _parse_hex_point(lo_s, where)
            hi = _parse_hex_point(hi_s, where)
        else:
            lo = hi = _parse_hex_point(item, where)
        if hi < lo:
            raise SchemaError(f"{where}: empty range {item!r}")
        out.append((lo, hi))
    return tuple(out)


def _reject_duplicate_keys(pairs):
    seen = {}
    for key, value in pairs:
        if key in seen:
            raise SchemaError(f"duplicate key {key!r} in schema file")
        seen[key] = value
    return seen


def parse_schema_dict(data: dict, source: str | None = None) -> LanguageSchema:
    """Build a LanguageSchema from parsed JSON, without validating it."""
    for field_name in ("name", "blocks", "classes", "states", "accept_states",
                       "transitions", "grammar"):
        if field_name not in data:
            raise SchemaError(f"missing required field {field_name!r}")

    name = data["name"]
    if not isinstance(name, str) or not name:
        raise SchemaError("field 'name': expected a non-empty string")

    blocks = _parse_ranges(data["blocks"], "field 'blocks'")
    joiners = tuple(
        _parse_hex_point(j, "field 'joiners'") for j in data.get("joiners", [])
    )

    classes_raw = data["classes"]
    if not isinstance(classes_raw, dict):
        raise SchemaError("field 'classes': expected a map of tag -> ranges")
    classes = []
    for tag, ranges in classes_raw.items():
        if not isinstance(tag, str) or len(tag) != 1:
            raise SchemaError(f"field 'classes': tag {tag!r} must be one character")
        if tag == OTHER_TAG:
            raise SchemaError("field 'classes': tag 'O' is implicit, do not declare it")
        classes.append(CharClass(tag, _parse_ranges(ranges, f"class {tag!r}")))

    states = data["states"]
    if not isinstance(states, list) or START not in states:
        raise SchemaError("field 'states': expected a list containing START")
    if states[0] != START:
        raise SchemaError("field 'states': START must be listed first")
    for emit in EMIT_STATES:
        if emit in states:
            raise SchemaError(
                f"field 'states': {emit} is an implicit emit state, do not declare it"
            )

    accept_states = frozenset(data["accept_states"])
    unknown = accept_states - set(states)
    if unknown:
        raise SchemaError(f"field 'accept_states': unknown states {sorted(unknown)}")

    transitions_raw = data["transitions"]
    known_tags = {c.tag for c in classes} | {OTHER_TAG}
    transitions: dict[str, dict[str, str]] = {}
    for state, row in transitions_raw.items():
        # Emit-state rows are structurally representable so that validation
        # can report them as isolation violations rather than parse errors.
        if state not in states and state not in EMIT_STATES:
            raise SchemaError(f"field 'transitions': unknown state {state!r}")
        clean_row = {}
        for tag, target in row.items():
            if tag not in known_tags:
                raise SchemaError(
                    f"field 'transitions': state {state!r} uses unknown class {tag!r}"
                )
            if target not in states and target not in EMIT_STATES:
                raise SchemaError(
                    f"field 'transitions': state {state!r} targets unknown state {target!r}"
                )
            clean_row[tag] = target
        transitions[state] = clean_row
    for state in states:
        transitions.setdefault(state, {})

    grammar_str = data["grammar"]
    try:
        TagPattern(grammar_str)
    except TagPatternError as exc:
        raise SchemaError(f"field 'grammar': {exc}") from exc

    notes = tuple(data.get("notes", []))

    return LanguageSchema(
        name=name,
        blocks=blocks,
        joiners=joiners,
        classes=tuple(classes),
        dfa=DfaTable(tuple(states), accept_states, transitions),
        grammar=grammar_str,
        notes=notes,
        source=source,
    )


def load_schema(path: str | Path, alignment_bound: int = DEFAULT_ALIGNMENT_BOUND) -> LanguageSchema:
    """Load, parse, and validate a schema file.

    Raises SchemaError identifying the offending field on parse failure, or
    listing the violations when validation fails.
    """
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot read schema file {path}: {exc}") from exc
    try:
        data = json.loads(raw, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"schema file {path} is not valid JSON: {exc}") from exc

    schema = parse_schema_dict(data, source=str(path))
    violations = validate_schema(schema, alignment_bound=alignment_bound)
    if violations:
        raise SchemaError(
            f"schema {schema.name!r} failed validation: " + "; ".join(violations)
        )
    return schema


def validate_schema(
    schema: LanguageSchema, alignment_bound: int = DEFAULT_ALIGNMENT_BOUND
) -> list[str]:
    """Check the schema validity conditions; returns violations (empty = valid).

    Checks, in order: disjoint classes, completeness of class assignments
    against the declared blocks, transition determinism and totality of
    targets, emit-state isolation, and grammar alignment by exhaustive
    enumeration of tag strings up to ``alignment_bound``. Maximal-munch
    behavior is a property of the scanner algorithm itself and is covered
    by the scanner's tests rather than a table condition.
    """
    violations: list[str] = []

    # 1. Disjoint character classes.
    claimed: dict[int, str] = {}
    for cls in schema.classes:
        for cp in cls.codepoints():
            prior = claimed.get(cp)
            if prior is not None and prior != cls.tag:
                violations.append(
                    f"disjoint classes violated: U+{cp:04X} in {prior} and {cls.tag}"
                )
            claimed[cp] = cls.tag

    # 2. Completeness: a block exists; classed codepoints sit inside the
    # declared blocks or are declared joiners.
    if not schema.blocks:
        violations.append("completeness violated: no block ranges declared")
    joiner_set = set(schema.joiners)
    for cls in schema.classes:
        for cp in cls.codepoints():
            if not schema.in_blocks(cp) and cp not in joiner_set:
                violations.append(
                    f"completeness violated: U+{cp:04X} ({cls.tag}) outside blocks "
                    "and not a joiner"
                )
                break

    # 3. Determinism is structural (one target per state/class pair); the
    # parser enforces it, so only emit-state rows can break it here.

    # 4. Emit-state isolation: no outgoing transitions, reachable only from START.
    for emit in EMIT_STATES:
        if schema.dfa.transitions.get(emit):
            violations.append(f"emit-state isolation violated: {emit} has outgoing transitions")
    for state, row in schema.dfa.transitions.items():
        if state == START:
            continue
        for tag, target in row.items():
            if target in EMIT_STATES:
                violations.append(
                    f"emit-state isolation violated: {state} --{tag}--> {target}"
                )

    if violations:
        return violations

    # 5. Grammar alignment by bounded enumeration.
    pattern = schema.pattern
    tags = schema.class_tags  # includes O
    for length in range(alignment_bound + 1):
        for combo in itertools.product(tags, repeat=length):
            s = "".join(combo)
            if schema.dfa_accepts(s) != pattern.fullmatch(s):
                violations.append(
                    f"grammar alignment violated at class string {s!r}"
                )
                return violations

    return violations


def classify(schema: LanguageSchema, cp: int | str) -> str:
    """Class tag of a codepoint under a schema (O when unassigned)."""
    if isinstance(cp, str):
        cp = ord(cp)
    return schema.classify(cp)


def _format_range(lo: int, hi: int) -> str:
    return f"{lo:04X}" if lo == hi else f"{lo:04X}-{hi:04X}"


def schema_to_dict(schema: LanguageSchema) -> dict:
    """Serialize a schema back to the file format (round-trips via
    parse_schema_dict)."""
    return {
        "name": schema.name,
        "blocks": [_format_range(lo, hi) for lo, hi in schema.blocks],
        "joiners": [f"{j:04X}" for j in schema.joiners],
        "classes": {
            c.tag: [_format_range(lo, hi) for lo, hi in c.ranges]
            for c in schema.classes
        },
        "states": list(schema.dfa.scan_states),
        "accept_states": sorted(schema.dfa.accept_states),
        "transitions": {
            state: dict(row) for state, row in schema.dfa.transitions.items()
        },
        "grammar": schema.grammar,
        "notes": list(schema.notes),
    }


# -- bundled schemas ----------------------------------------------------

BUNDLED = ("sinhala", "devanagari")


def bundled_schema_path(name: str) -> Path:
    ref = resources.files("wwho") / "schemas" / f"{name}.schema.json"
    with resources.as_file(ref) as p:
        return Path(p)


@functools.cache
def load_bundled(name: str) -> LanguageSchema:
    """A bundled schema, validated once and cached (schemas are immutable)."""
    if name not in BUNDLED:
        raise SchemaError(f"no bundled schema named {name!r} (have {BUNDLED})")
    return load_schema(bundled_schema_path(name))


def default_schemas() -> list[LanguageSchema]:
    """The two bundled schemas, in bundled order."""
    return [load_bundled(n) for n in BUNDLED]
