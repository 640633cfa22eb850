"""Minimal regular-expression engine over single-character class tags.

Syllable grammars are written as strings of class tags (``C``, ``V``, ``P``,
...) with the metacharacters ``( ) | ? *`` only. The engine compiles a
pattern to a Thompson NFA and determinizes it lazily, so matching does not
depend on the host regex library: the grammar is the reference point that
both schema validation and the vocabulary audit check against, and it has
to stand on its own.
"""

from __future__ import annotations

METACHARS = frozenset("()|?*")


class TagPatternError(ValueError):
    """Raised for a malformed tag pattern."""


class _Nfa:
    """Thompson NFA under construction: epsilon edges plus tag edges."""

    def __init__(self) -> None:
        self.eps: list[list[int]] = []
        self.edges: list[tuple[str, int] | None] = []

    def new_state(self) -> int:
        self.eps.append([])
        self.edges.append(None)
        return len(self.eps) - 1

    def add_eps(self, src: int, dst: int) -> None:
        self.eps[src].append(dst)

    def add_edge(self, src: int, tag: str, dst: int) -> None:
        # Thompson construction gives each state at most one tag edge.
        assert self.edges[src] is None
        self.edges[src] = (tag, dst)


class _Parser:
    """Recursive-descent parser building NFA fragments (start, end)."""

    def __init__(self, pattern: str, nfa: _Nfa) -> None:
        self.pattern = pattern
        self.pos = 0
        self.nfa = nfa

    def peek(self) -> str | None:
        if self.pos < len(self.pattern):
            return self.pattern[self.pos]
        return None

    def parse(self) -> tuple[int, int]:
        frag = self.parse_alt()
        if self.pos != len(self.pattern):
            raise TagPatternError(
                f"unexpected {self.pattern[self.pos]!r} at position {self.pos}"
            )
        return frag

    def parse_alt(self) -> tuple[int, int]:
        frags = [self.parse_seq()]
        while self.peek() == "|":
            self.pos += 1
            frags.append(self.parse_seq())
        if len(frags) == 1:
            return frags[0]
        start = self.nfa.new_state()
        end = self.nfa.new_state()
        for fs, fe in frags:
            self.nfa.add_eps(start, fs)
            self.nfa.add_eps(fe, end)
        return start, end

    def parse_seq(self) -> tuple[int, int]:
        parts: list[tuple[int, int]] = []
        while self.peek() is not None and self.peek() not in "|)":
            parts.append(self.parse_rep())
        if not parts:
            s = self.nfa.new_state()
            return s, s
        start, end = parts[0]
        for fs, fe in parts[1:]:
            self.nfa.add_eps(end, fs)
            end = fe
        return start, end

    def parse_rep(self) -> tuple[int, int]:
        frag = self.parse_atom()
        while self.peek() in ("?", "*"):
            op = self.pattern[self.pos]
            self.pos += 1
            fs, fe = frag
            start = self.nfa.new_state()
            end = self.nfa.new_state()
            self.nfa.add_eps(start, fs)
            self.nfa.add_eps(start, end)
            self.nfa.add_eps(fe, end)
            if op == "*":
                self.nfa.add_eps(fe, fs)
            frag = (start, end)
        return frag

    def parse_atom(self) -> tuple[int, int]:
        ch = self.peek()
        if ch is None:
            raise TagPatternError("pattern ended where an atom was expected")
        if ch == "(":
            self.pos += 1
            frag = self.parse_alt()
            if self.peek() != ")":
                raise TagPatternError(f"unbalanced '(' at position {self.pos}")
            self.pos += 1
            return frag
        if ch in METACHARS:
            raise TagPatternError(f"unexpected {ch!r} at position {self.pos}")
        self.pos += 1
        start = self.nfa.new_state()
        end = self.nfa.new_state()
        self.nfa.add_edge(start, ch, end)
        return start, end


class TagPattern:
    """A compiled tag pattern with full-match and longest-prefix queries."""

    def __init__(self, pattern: str) -> None:
        self.pattern = pattern
        self._nfa = _Nfa()
        self._start, self._end = _Parser(pattern, self._nfa).parse()
        self.alphabet = frozenset(c for c in pattern if c not in METACHARS)
        # Lazy subset construction: dstate 0 is the closure of the NFA start.
        self._dstates: dict[frozenset[int], int] = {}
        self._dtrans: list[dict[str, int]] = []
        self._daccept: list[bool] = []
        self._dead: list[frozenset[int]] = []
        self._intern(self._closure({self._start}))

    def _closure(self, states: set[int]) -> frozenset[int]:
        stack = list(states)
        seen = set(states)
        while stack:
            s = stack.pop()
            for t in self._nfa.eps[s]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return frozenset(seen)

    def _intern(self, closed: frozenset[int]) -> int:
        idx = self._dstates.get(closed)
        if idx is None:
            idx = len(self._dead)
            self._dstates[closed] = idx
            self._dead.append(closed)
            self._dtrans.append({})
            self._daccept.append(self._end in closed)
        return idx

    def _step(self, didx: int, tag: str) -> int:
        """Returns the successor dstate index, or -1 for the dead state."""
        cached = self._dtrans[didx].get(tag)
        if cached is not None:
            return cached
        if tag not in self.alphabet:
            self._dtrans[didx][tag] = -1
            return -1
        nxt: set[int] = set()
        for s in self._dead[didx]:
            edge = self._nfa.edges[s]
            if edge is not None and edge[0] == tag:
                nxt.add(edge[1])
        result = self._intern(self._closure(nxt)) if nxt else -1
        self._dtrans[didx][tag] = result
        return result

    def fullmatch(self, s: str) -> bool:
        """True iff the whole string is in the pattern's language."""
        state = 0
        for ch in s:
            state = self._step(state, ch)
            if state < 0:
                return False
        return self._daccept[state]

    def longest_match(self, s: str, start: int = 0) -> int:
        """Length of the longest prefix of ``s[start:]`` the pattern accepts.

        Returns -1 when no prefix (not even the empty one) is accepted.
        """
        state = 0
        best = 0 if self._daccept[0] else -1
        i = start
        while i < len(s):
            state = self._step(state, s[i])
            if state < 0:
                break
            i += 1
            if self._daccept[state]:
                best = i - start
        return best

    def accepting_prefixes(self, s: str, start: int = 0) -> list[int]:
        """All prefix lengths of ``s[start:]`` the pattern accepts, ascending."""
        out: list[int] = []
        state = 0
        if self._daccept[0]:
            out.append(0)
        i = start
        while i < len(s):
            state = self._step(state, s[i])
            if state < 0:
                break
            i += 1
            if self._daccept[state]:
                out.append(i - start)
        return out
