from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from taglab.system import (COLLATZ, FIG1_RIGHT, POST, PRESETS, TagSystem, TagSystemError, format_word,
                           load_system, parse_system, parse_word)


def test_presets():
    assert POST.v == 3 and POST.appendants == ((0, 0), (1, 1, 0, 1))
    assert FIG1_RIGHT.v == 5 and FIG1_RIGHT.appendants == ((1, 0, 1, 1), (0, 1, 0, 1, 0, 0))
    assert COLLATZ.v == 2 and COLLATZ.appendants == ((1, 2), (0,), (0, 0, 0))
    assert set(PRESETS) == {"post-00-1101", "fig1-right", "collatz"}
    assert (POST.l_min, POST.l_max) == (2, 4)


def test_text_round_trip():
    for system in PRESETS.values():
        assert parse_system(system.to_text()) == system


def test_empty_appendant_round_trip():
    system = TagSystem(2, 2, ((), (1, 1, 0)))
    text = system.to_text()
    assert "0 ->\n" in text
    assert parse_system(text) == system


def test_wide_alphabet_uses_commas():
    system = TagSystem(12, 2, tuple(((i + 1) % 12, 11) for i in range(12)))
    assert parse_system(system.to_text()) == system
    assert format_word((10, 0, 11), 12) == "10,0,11"
    assert parse_word("10,0,11", 12) == (10, 0, 11)


def test_word_parsing():
    assert parse_word("001101", 2) == (0, 0, 1, 1, 0, 1)
    assert parse_word("", 2) == parse_word("ε", 2) == parse_word("eps", 2) == ()
    assert parse_word("(100)^3", 2) == (1, 0, 0) * 3
    assert parse_word("1(01)^2", 2) == (1, 0, 1, 0, 1)
    with pytest.raises(TagSystemError):
        parse_word("012", 2)
    with pytest.raises(TagSystemError):
        parse_word("0a", 2)


@given(st.lists(st.integers(0, 1), max_size=40))
def test_word_format_round_trip(word):
    assert parse_word(format_word(word, 2) or "ε", 2) == tuple(word)


@pytest.mark.parametrize("text", ["0 -> 00\n1 -> 1101\n", "v=x\n0 -> 1\n", "v=2\n", "v=2\n1 -> 0\n0 -> 1\n",
                                  "v=2\n0 1\n"])
def test_bad_system_text(text):
    with pytest.raises(TagSystemError):
        parse_system(text)


def test_invalid_systems_rejected():
    with pytest.raises(TagSystemError):
        TagSystem(2, 0, ((0,), (1,)))
    with pytest.raises(TagSystemError):
        TagSystem(2, 2, ((0,),))
    with pytest.raises(TagSystemError):
        TagSystem(2, 2, ((0,), (2,)))


def test_load_system(tmp_path):
    path = tmp_path / "s.tag"
    path.write_text("# comment\nv=3\n0 -> 00\n1 -> 1101\n", encoding="utf-8")
    assert load_system(path=str(path)) == POST
    assert load_system("collatz") is COLLATZ
    with pytest.raises(TagSystemError):
        load_system("unknown")
    with pytest.raises(TagSystemError):
        load_system()
