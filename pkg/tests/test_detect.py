import json
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from conftest import DATA, word_strategy
from wicks.detect import (ABSENT, INDETERMINATE, PRESENT, Budget, CancellationFreeLabelling, GenusCertificate,
                          brute_force_genus, check_commutator_verdict, check_square_verdict, core_rotations,
                          genus_minus_free, genus_plus_free, genus_tuple, is_commutator_free,
                          is_commutator_oracle, is_square_free, is_square_oracle, is_two_squares_free,
                          match_genus, match_wicks, search_genus, symbolic_witness,
                          trivial_extension_certificate, verify_certificate)
from wicks.detect import _NAMED
from wicks.oracle import FiniteGroupOracle, FreeGroupOracle
from wicks.wicks_enum import enumerate_wicks
from wicks.words import Word, commutator, free_reduce, product

F2 = FreeGroupOracle("ab")
S3 = FiniteGroupOracle.from_permutations({"a": "(1 2)", "b": "(2 3)"}, "S3")


def _exp_sums(w):
    return list(free_reduce(w).exponent_sums().values())


# matching ------------------------------------------------------------------

def test_match_examples():
    lab = match_wicks("abAB", "abAB")
    assert lab.images == {"a": Word.parse("a"), "b": Word.parse("b")}
    assert match_wicks("abcABC", "abAB") is None


def test_matched_labelling_reproduces_the_word():
    w = free_reduce("aabAAB")
    lab = match_wicks(w, "abAB")
    assert lab is not None and lab.is_cancellation_free()
    assert product(lab.conjugator, lab.substitute(), lab.conjugator.inverse()) == w


def test_core_rotations_cover_conjugates():
    rots = list(core_rotations("abcA"))
    assert len(rots) == 2


@st.composite
def labelled_form(draw, forms):
    W = draw(st.sampled_from(forms))
    images = {s: draw(word_strategy("xy", 3).map(free_reduce).filter(len)) for s in sorted(W.support())}
    lab = CancellationFreeLabelling(W, images)
    assume(lab.is_cancellation_free())
    g = draw(word_strategy("xy", 3))
    return W, lab, product(g, lab.substitute(), g.inverse())


GENUS1 = [f.word for f in enumerate_wicks(1, True)]
CROSS1 = [f.word for f in enumerate_wicks(1, False)] + [Word.parse("aa")]


@given(labelled_form(GENUS1))
@settings(max_examples=60, deadline=None)
def test_labelled_genus_one_forms_are_found(data):
    W, lab, w = data
    assert genus_plus_free(w, 1) == 1
    a, b = is_commutator_free(w)
    assert commutator(a, b) == free_reduce(w)


@given(labelled_form(CROSS1))
@settings(max_examples=60, deadline=None)
def test_labelled_crosscap_forms_are_found(data):
    W, lab, w = data
    g = genus_minus_free(w, 1)
    assert g is not None and g <= 1


# genus values ----------------------------------------------------------------

@pytest.mark.parametrize("w, n, g", [("abAB", 2, 1), ("aa", 2, None), ("", 1, 0), ("abABcdCD", 2, 2),
                                     ("abABcdCD", 1, None), ("aabb", 2, None)])
def test_genus_plus(w, n, g):
    assert genus_plus_free(w, n) == g


@pytest.mark.parametrize("w, g", [("aa", Fraction(1, 2)), ("aabb", 1), ("abAB", Fraction(3, 2)), ("", 0),
                                  ("a", None), ("aaab", None)])
def test_genus_minus(w, g):
    assert genus_minus_free(w, 2) == g


@given(word_strategy("ab", 8))
@settings(max_examples=80, deadline=None)
def test_genus_monotone_in_cap(w):
    g1 = genus_plus_free(w, 1)
    if g1 is not None:
        assert genus_plus_free(w, 2) == g1
    h1 = genus_minus_free(w, 1)
    if h1 is not None:
        assert genus_minus_free(w, 2) == h1


@given(word_strategy("ab", 8), word_strategy("ab", 4))
@settings(max_examples=80, deadline=None)
def test_conjugation_invariance(w, g):
    c = product(g, w, g.inverse())
    assert genus_plus_free(c, 2) == genus_plus_free(w, 2)
    assert genus_minus_free(c, 1) == genus_minus_free(w, 1)
    assert (is_commutator_free(c) is None) == (is_commutator_free(w) is None)
    assert (is_two_squares_free(c) is None) == (is_two_squares_free(w) is None)


def test_square_filter_exactness():
    # two-generator words up to length 8: a crosscap genus <= 2 exists iff every exponent sum is even
    for w in F2.ball(8):
        even = all(s % 2 == 0 for s in _exp_sums(w))
        assert (genus_minus_free(w, 2) is not None) == even, w


# witnesses ---------------------------------------------------------------------

@pytest.mark.parametrize("key", sorted(_NAMED))
def test_named_identities_hold_symbolically(key):
    kind, form = key
    x, y = symbolic_witness(kind, Word.parse(form))
    got = commutator(x, y) if kind == "commutator" else product(x, x, y, y)
    assert got == Word.parse(form)


def test_witnesses_for_every_genus_one_form():
    for f in enumerate_wicks(1, True):
        for T in (f.word, f.word.inverse()):
            x, y = symbolic_witness("commutator", T)
            assert commutator(x, y) == T
    for f in enumerate_wicks(1, False):
        for T in (f.word, f.word.inverse()):
            x, y = symbolic_witness("squares", T)
            assert product(x, x, y, y) == T


def test_single_square():
    assert str(is_square_free("aa")) == "a"
    assert str(is_square_free("abab")) == "ab"
    assert is_square_free("ab") is None and is_square_free("aabb") is None


@given(word_strategy("ab", 4), word_strategy("ab", 4))
@settings(max_examples=80, deadline=None)
def test_commutator_soundness(u, v):
    w = commutator(u, v)
    res = is_commutator_free(w)
    assert res is not None and commutator(*res) == w
    res = is_two_squares_free(product(u, u, v, v))
    assert res is not None and product(res[0], res[0], res[1], res[1]) == product(u, u, v, v)


def test_commutator_absent_examples():
    assert is_commutator_free("aa") is None
    assert is_commutator_free("aabAAB") is not None
    assert is_two_squares_free("ab") is None


# oracle searches -------------------------------------------------------------

def test_oracle_agrees_with_exact_search_short_words():
    for w in F2.ball(6):
        v = is_commutator_oracle(w, F2)
        assert v.status != INDETERMINATE
        assert bool(v) == (is_commutator_free(w) is not None)
        if v:
            assert check_commutator_verdict(w, v, F2)
        s = is_square_oracle(w, F2)
        assert bool(s) == (is_square_free(w) is not None)
        if s:
            assert check_square_verdict(w, s, F2)


def test_long_pieces_use_the_bounded_forms():
    w = commutator("aaaaaa", "bbbbbb")
    v = is_commutator_oracle(w, F2)
    assert v.status == PRESENT and v.form != 1 and check_commutator_verdict(w, v, F2)


def test_budget_exhaustion_is_indeterminate():
    w = commutator("aaaaaa", "bbbbbb")
    assert is_commutator_oracle(w, F2, Budget(max_work=1)).status == INDETERMINATE
    S4 = FiniteGroupOracle.from_permutations({"a": "(1 2)", "b": "(1 2 3 4)"})
    assert is_commutator_oracle("ab", S4, Budget(max_table=10)).status == INDETERMINATE
    assert is_square_oracle("ab", S4, Budget(max_table=1)).status == INDETERMINATE


def test_verdict_serialises():
    d = is_commutator_oracle("ab", S3).to_dict()
    assert d["status"] == PRESENT and json.loads(json.dumps(d)) == d


# certificates ------------------------------------------------------------------

@pytest.mark.parametrize("h, n, o, status", [("abAB", 1, True, PRESENT), ("aa", Fraction(1, 2), False, PRESENT),
                                             ("aa", 1, True, ABSENT), ("aaaaaabbbbbb", 1, False, PRESENT)])
def test_search_genus(h, n, o, status):
    got, cert = search_genus(h, n, o, F2)
    assert got == status
    if cert is not None:
        assert verify_certificate(h, cert, F2)
        again = GenusCertificate.from_dict(json.loads(cert.dumps()))
        assert verify_certificate(h, again, F2)


def test_long_labels_go_through_an_extension():
    h = commutator("aaaaaa", "bbbbbb")
    status, cert = search_genus(h, 1, True, F2)
    assert status == PRESENT and cert.variant == 2
    assert verify_certificate(h, cert, F2)


def test_search_on_finite_group():
    status, cert = search_genus("ab", 1, True, S3)
    assert status == PRESENT and verify_certificate("ab", cert, S3)


def test_certificate_rejects_a_different_element():
    _, cert = search_genus("abAB", 1, True, F2)
    assert not verify_certificate("abAb", cert, F2)


def test_trivial_extension_certificate():
    lab = match_wicks("aabAAB", "abAB")
    cert = trivial_extension_certificate(lab, 1, True)
    assert cert.variant == 2 and verify_certificate("aabAAB", cert, F2)


def test_genus_three_certificate():
    cert = GenusCertificate.load(str(DATA / "genus3_certificate.json"))
    report = verify_certificate("xYXXyyXYxx", cert, FreeGroupOracle("xy"))
    assert report and not report.indeterminate
    assert all(line.startswith("ok") for line in report.lines())


def test_malformed_certificate():
    with pytest.raises(ValueError):
        GenusCertificate.from_dict({"genus": "1"})


# reference searches -------------------------------------------------------------

def test_brute_force_examples():
    assert brute_force_genus("abAB", 1, True, 1, F2)
    assert not brute_force_genus("aa", 1, True, 3, F2)
    assert not brute_force_genus("aa", 1, True, 2, F2, prefilter=False)
    assert brute_force_genus("aa", Fraction(1, 2), False, 1, F2)
    with pytest.raises(ValueError):
        brute_force_genus("aa", Fraction(1, 2), True, 1, F2)


def test_brute_force_agrees_with_exact_on_short_words():
    for w in F2.ball(4):
        if not w.is_cyclically_reduced():
            continue
        gp, gm = genus_plus_free(w, 1), genus_minus_free(w, Fraction(1, 2))
        assert brute_force_genus(w, 1, True, 3, F2) == (gp is not None)
        assert brute_force_genus(w, Fraction(1, 2), False, 3, F2) == (gm is not None)


def test_brute_force_on_finite_group():
    for x in range(S3.order):
        w = S3.representative(x)
        assert brute_force_genus(w, 1, True, S3.diameter, S3) == bool(is_commutator_oracle(w, S3))


def test_genus_tuple_examples():
    assert genus_tuple(["abAB"], 1, True, F2)
    assert genus_tuple(["a", "A"], 0, True, F2)
    assert not genus_tuple(["a", "b"], 0, True, F2)
    # a (b) (a AB A) = 1 after conjugating the third word by a
    assert genus_tuple(["a", "b", "AB"], 0, True, F2)
