import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wwho.grammar import TagPattern, TagPatternError

SINHALA_GRAMMAR = "C(HZ?C)*(P|H)?M?|VM?"


@pytest.mark.parametrize(
    "s,expected",
    [
        ("C", True),
        ("V", True),
        ("VM", True),
        ("CP", True),
        ("CPM", True),
        ("CH", True),
        ("CHM", True),
        ("CHC", True),
        ("CHZC", True),
        ("CHZCP", True),
        ("CHCHCP", True),
        ("", False),
        ("CHZ", False),
        ("CC", False),
        ("CV", False),
        ("VMM", False),
        ("CPP", False),
        ("M", False),
        ("Z", False),
        ("CHZM", False),
    ],
)
def test_sinhala_grammar_membership(s, expected):
    assert TagPattern(SINHALA_GRAMMAR).fullmatch(s) is expected


def test_longest_match_prefix():
    p = TagPattern(SINHALA_GRAMMAR)
    assert p.longest_match("CHCX") == 3
    assert p.longest_match("CHZCPMV") == 6
    assert p.longest_match("XC") == -1
    assert p.longest_match("XC", start=1) == 1
    assert p.longest_match("") == -1


def test_accepting_prefixes_ascending():
    p = TagPattern(SINHALA_GRAMMAR)
    assert p.accepting_prefixes("CHZCP") == [1, 2, 4, 5]
    assert p.accepting_prefixes("XYZ") == []


def test_empty_alternative_accepts_empty():
    p = TagPattern("C|")
    assert p.fullmatch("")
    assert p.fullmatch("C")
    assert not p.fullmatch("CC")


@pytest.mark.parametrize("bad", ["(C", "C)", "*C", "?", "C(|*)", "(", ")"])
def test_malformed_patterns_raise(bad):
    with pytest.raises(TagPatternError):
        TagPattern(bad)


# The dialect is a strict subset of the stdlib regex syntax, so re serves
# as an independent oracle for the NFA/DFA engine.
_pattern_strategy = st.sampled_from(
    [
        SINHALA_GRAMMAR,
        "CN?(HZ?CN?)*(PM*|HM?|M*)|VM*",
        "A*B*",
        "(AB|BA)*",
        "A(B|C)?D*",
        "((A|B)(C|D))*E?",
        "A?A?A?AAA",
    ]
)


@settings(max_examples=300, deadline=None)
@given(
    pattern=_pattern_strategy,
    s=st.text(alphabet="ABCDEVPHZMNX", max_size=12),
)
def test_engine_agrees_with_stdlib_re(pattern, s):
    ours = TagPattern(pattern).fullmatch(s)
    theirs = re.fullmatch(pattern, s) is not None
    assert ours is theirs
