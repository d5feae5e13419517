import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import quadratic_strategy, quadratic_words
from wicks.quadratic import is_orientable
from wicks.surface import build_graph
from wicks.wicks_enum import (canonicalize, enumerate_wicks, fine_canonicalize, is_wicks_form, max_length,
                              variable_symbol)
from wicks.words import Letter, Word


def test_canonical_examples():
    assert canonicalize("bABa") == canonicalize("abAB")
    assert canonicalize("cdCD") == canonicalize("abAB")
    assert canonicalize("aa") == canonicalize("AA")
    assert canonicalize("abAB") != canonicalize("abAb")


def test_fine_canonical_keeps_signs():
    assert fine_canonicalize("bABa") == fine_canonicalize("abAB")
    assert str(fine_canonicalize("AA")) != str(fine_canonicalize("aa"))


def _random_symmetry(W: Word, rng: random.Random) -> Word:
    ls = list(W.letters)
    k = rng.randrange(len(ls))
    ls = ls[k:] + ls[:k]
    if rng.random() < 0.5:
        ls = [l.inverse() for l in reversed(ls)]
    syms = sorted({l.symbol for l in ls})
    target = rng.sample([f"x{i}" for i in range(10)], len(syms))
    rename = dict(zip(syms, target))
    flip = {s: rng.choice((1, -1)) for s in syms}
    return Word(tuple(Letter(rename[l.symbol], l.exp * flip[l.symbol]) for l in ls))


def test_orbit_minimality_random_symmetries():
    rng = random.Random(7)
    words = ["abcABC", "aabccB", "abacBc", "abAb", "abcdABCD"]
    for i in range(1000):
        W = Word.parse(words[i % len(words)])
        g = _random_symmetry(W, rng)
        assert canonicalize(g) == canonicalize(W)


@given(quadratic_strategy(4), st.randoms(use_true_random=False))
def test_canonicalize_is_an_orbit_invariant(W, rng):
    assert canonicalize(_random_symmetry(W, rng)) == canonicalize(W)
    assert canonicalize(canonicalize(W)) == canonicalize(W)


@pytest.mark.parametrize("w, n, ok", [("abcABC", 1, True), ("abab", 1, False), ("aAbB", None, False),
                                      ("aa", Fraction(1, 2), True), ("abAB", 2, False)])
def test_is_wicks_form(w, n, ok):
    assert is_wicks_form(w, n) is ok


def test_length_bound():
    assert [max_length(n) for n in (0, Fraction(1, 2), 1, Fraction(3, 2), 2)] == [0, 2, 6, 12, 18]


def test_variable_alphabet():
    assert [variable_symbol(i) for i in (0, 25, 26, 27)] == ["a", "z", "a1", "a2"]


def test_bad_genus_rejected():
    with pytest.raises(ValueError):
        enumerate_wicks(Fraction(1, 2), True)
    with pytest.raises(ValueError):
        enumerate_wicks(Fraction(1, 3), False)


def _brute_force(n, orientable, max_letters):
    """Independent reference: filter every quadratic word with the word-level predicates."""
    out = set()
    for W in quadratic_words(max_letters):
        if is_orientable(W) == orientable and is_wicks_form(W, n):
            out.add(canonicalize(W))
    return out


@pytest.mark.parametrize("n, orientable, letters", [(Fraction(1, 2), False, 1), (1, True, 3), (1, False, 3)])
def test_enumeration_matches_brute_force(n, orientable, letters):
    assert {f.word for f in enumerate_wicks(n, orientable)} == _brute_force(n, orientable, letters)


def test_genus_three_halves_prefix_matches_brute_force():
    got = {f.word for f in enumerate_wicks(Fraction(3, 2), False, max_len=8)}
    assert got == _brute_force(Fraction(3, 2), False, 4)


def test_enumerated_forms_are_wicks_forms():
    for n, o in [(Fraction(1, 2), False), (1, True), (1, False)]:
        for f in enumerate_wicks(n, o):
            assert is_wicks_form(f.word, n) and is_orientable(f.word) == o
            assert len(f.word) <= max_length(n)
            if n != Fraction(1, 2):
                g = build_graph(f.word)
                assert min(g.degree(v) for v in g.vertices) >= 3


def test_max_len_truncates():
    assert [str(f) for f in enumerate_wicks(1, True, max_len=4)] == ["abAB"]
