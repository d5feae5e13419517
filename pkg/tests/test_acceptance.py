"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run on its own with ``pytest tests/test_acceptance.py -v -s`` or
``python3 tests/test_acceptance.py``; the terminal summary repeats the lines.
"""
import copy
import json
import sys
from fractions import Fraction

import numpy as np
import pytest

from conftest import DATA, quadratic_words
from wicks.cli import main
from wicks.detect import (GenusCertificate, brute_force_genus, genus_tuple, check_commutator_verdict, check_square_verdict,
                          genus_minus_free, genus_plus_free, is_commutator_free, is_commutator_oracle,
                          is_square_oracle, is_two_squares_free, symbolic_witness, verify_certificate)
from wicks.extension import (Extension, check_joint_extension, double_edges, hamiltonian_label,
                             validate_labelling, vind_violations)
from wicks.oracle import FiniteGroupOracle, FreeGroupOracle
from wicks.surface import build_graph, graph_genus
from wicks.wicks_enum import canonicalize, enumerate_wicks, max_length
from wicks.words import Word, commutator, free_reduce, product


def test_c01_worked_table(criterion, capsys):
    c = criterion(1, "info abAb link table", 1)
    assert main(["info", "abAb", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    (rows,) = doc["links"].values()
    col = lambda k: [r[k] for r in rows]
    ok = (col("e") == ["a", "b", "a", "b"] and col("eps") == [-1, -1, 1, 1] and col("o") == [1, -1, 1, -1]
          and col("O") == [1, -1, -1, 1] and col("mu") == [2, 2, 1, 2] and col("nu") == [1, 1, 2, 1]
          and col("l") == [1, 2, 1, 1] and col("r") == [2, 1, 2, 2])
    with capsys.disabled():
        assert c.finish(ok), rows


def test_c02_doubling(criterion):
    c = criterion(2, "doubling and exhaustive subword property", 60)
    ok = str(double_edges("abAb").hamiltonian) == "a1b1A2b2"
    checked = bad = 0
    for U in quadratic_words(4):
        for orientation in (1, -1):
            d = double_edges(U, {v: (None, orientation) for v in build_graph(U).vertices})
            checked += len(d.links)
            bad += len(vind_violations(d))
    ok = ok and bad == 0 and checked > 100_000
    assert c.finish(ok), (checked, bad)


def test_c03_genus_table(criterion):
    c = criterion(3, "graph genus table", 1)
    table = {"abcABC": 1, "abAB": 1, "abAb": 1, "aa": Fraction(1, 2), "aA": 0}
    got = {w: graph_genus(w) for w in table}
    assert c.finish(got == table), got


def _small_degree(W) -> bool:
    g = build_graph(W)
    return any(g.degree(v) <= 2 for v in g.vertices)


def test_c04_enumeration(criterion):
    c = criterion(4, "Wicks form enumeration", 60)
    half = {str(f) for f in enumerate_wicks(Fraction(1, 2), False)}
    one_or = {str(f) for f in enumerate_wicks(1, True)}
    one_non = {f.word for f in enumerate_wicks(1, False)}
    ok = half == {"aa"}
    ok = ok and one_or == {str(canonicalize("abAB")), str(canonicalize("abcABC"))}
    ok = ok and canonicalize("aabccB") in one_non and canonicalize("abacBc") in one_non
    for n, o in [(1, True), (1, False), (Fraction(3, 2), False)]:
        for f in enumerate_wicks(n, o):
            ok = ok and len(f.word) <= max_length(n) == 12 * n - 6 and not _small_degree(f.word)
    assert c.finish(ok)


def test_c05_commutators(criterion):
    c = criterion(5, "commutator detection for [u,v], |u|,|v| <= 3", 300)
    F = FreeGroupOracle("xy")
    ball = F.ball(3)
    ok, count = True, 0
    for u in ball:
        for v in ball:
            w = commutator(u, v)
            if len(w) == 0:
                continue
            count += 1
            res = is_commutator_free(w)
            if res is None or commutator(*res) != w or genus_plus_free(w, 1) != 1:
                ok = False
                break
    assert c.finish(ok and count > 0), count


def test_c06_squares(criterion):
    c = criterion(6, "two-squares detection and extraction identities", 300)
    F = FreeGroupOracle("xy")
    ball = F.ball(3)
    ok = True
    for u in ball:
        for v in ball:
            w = product(u, u, v, v)
            res = is_two_squares_free(w)
            if res is None or product(res[0], res[0], res[1], res[1]) != w:
                ok = False
    # A^2 (B C B^-1)^2 = A^2 B C^2 B^-1 and (AB)^2 (B^-1 C)^2 = A B A C B^-1 C
    A, B, C = Word.parse("a"), Word.parse("b"), Word.parse("c")
    bcb = product(B, C, B.inverse())
    ok = ok and product(A, A, bcb, bcb) == free_reduce("aabccB")
    ab, bc = product(A, B), product(B.inverse(), C)
    ok = ok and product(ab, ab, bc, bc) == free_reduce("abacBc")
    for form in ("aabccB", "abacBc"):
        x, y = symbolic_witness("squares", Word.parse(form))
        ok = ok and product(x, x, y, y) == Word.parse(form)
    assert c.finish(ok)


def test_c07_constants_and_oracle(criterion):
    c = criterion(7, "free constants and oracle/exact commutator agreement", 600)
    F = FreeGroupOracle("ab")
    ok = True
    for n in (Fraction(1, 2), 1, 2, 3, 10):
        k = F.constants(n)
        ok = ok and (k.delta, k.M, k.l) == (0, 1, 0) and k.piece_bound == 5
        ok = ok and k.conjugator_bound_short(8) == 8 / 2 + 5
    words = [w for w in F.ball(8) if w.is_cyclically_reduced() and len(w) > 0]
    disagree = 0
    for w in words:
        v = is_commutator_oracle(w, F)
        exact = is_commutator_free(w) is not None
        if v.status == "indeterminate" or bool(v) != exact:
            disagree += 1
        elif v and not check_commutator_verdict(w, v, F):
            disagree += 1
    assert c.finish(ok and disagree == 0 and len(words) > 9000), (len(words), disagree)


def test_c08_brute_force(criterion):
    c = criterion(8, "brute force vs exact genus on |w| <= 6", 600)
    F = FreeGroupOracle("ab")
    words = [w for w in F.ball(6) if w.is_cyclically_reduced()]
    bad = []
    for w in words:
        gp, gm = genus_plus_free(w, 2), genus_minus_free(w, 1)
        for n in (1, 2):
            if brute_force_genus(w, n, True, 4, F) != (gp is not None and gp <= n):
                bad.append(("+", str(w), n))
        for n in (Fraction(1, 2), 1):
            if brute_force_genus(w, n, False, 4, F) != (gm is not None and gm <= n):
                bad.append(("-", str(w), n))
    # the abelianisation shortcut must not change answers: rerun a slice without it
    for w in words[::25]:
        gp, gm = genus_plus_free(w, 1), genus_minus_free(w, Fraction(1, 2))
        if brute_force_genus(w, 1, True, 2, F, prefilter=False) and gp is None:
            bad.append(("+raw", str(w)))
        if brute_force_genus(w, Fraction(1, 2), False, 3, F, prefilter=False) != (gm is not None):
            bad.append(("-raw", str(w)))
    assert c.finish(not bad and len(words) > 1000), bad[:5]


def _perturbed(data: dict, path: tuple, value):
    d = copy.deepcopy(data)
    node = d
    for k in path[:-1]:
        node = node[k]
    node[path[-1]] = value
    return d


def test_c09_extension_round_trip(criterion):
    c = criterion(9, "genus-3 extension round trip and perturbations", 60)
    F = FreeGroupOracle("xy")
    ext_data = json.loads((DATA / "genus3_extension.json").read_text())
    cert_data = json.loads((DATA / "genus3_certificate.json").read_text())
    ext = Extension.from_dict(ext_data)
    h = hamiltonian_label(ext)
    ok = validate_labelling(ext.graph, ext.labelling, F)
    ok = ok and [check_joint_extension(ext, cls, F) for cls in ext.partition] == [True, True]
    ok = ok and [cls.genus for cls in ext.partition] == [2, 1]
    # w1 w2 is a commutator up to conjugating w2; z1 and z2 cancel up to conjugation
    w1, w2, z1, z2 = (ext.cycle_label(v) for v in range(4))
    ok = ok and genus_tuple([w1, w2], 1, True, F) and not genus_tuple([w1, w2], 0, True, F)
    ok = ok and genus_tuple([z1, z2], 0, True, F)
    cert = GenusCertificate.from_dict(cert_data)
    ok = ok and bool(verify_certificate(h, cert, F)) and cert.genus == 3
    # every single perturbation must flip the verdict
    lab = ("extension", "labelling")
    flips = {
        "edge label": _perturbed(cert_data, lab + ("a1",), "xY"),
        "cycle label in genus-2 class": _perturbed(cert_data, lab + ("q",), "xyX"),
        "cycle label in genus-1 class": _perturbed(cert_data, lab + ("u",), "YX"),
        "claimed genus": _perturbed(cert_data, ("genus",), "2"),
        "class genus": _perturbed(cert_data, ("extension", "partition", 1, "genus"), "2"),
        "conjugator": _perturbed(cert_data, ("R",), "x"),
        "form": _perturbed(cert_data, ("form",), "abcABC"),
    }
    for name, d in flips.items():
        if verify_certificate(h, GenusCertificate.from_dict(d), F):
            ok = False
            print("perturbation did not flip:", name)
    assert c.finish(ok)


GROUPS = {
    "S3": {"a": "(1 2)", "b": "(1 2 3)"},
    "S4": {"a": "(1 2)", "b": "(1 2 3 4)"},
    "A4": {"a": "(1 2 3)", "b": "(2 3 4)"},
    "D8": {"a": "(1 2 3 4 5 6 7 8)", "b": "(1 8)(2 7)(3 6)(4 5)"},
}


def test_c10_finite_backend(criterion):
    c = criterion(10, "finite groups: oracle vs exhaustive element checks", 300)
    ok = True
    for name, gens in GROUPS.items():
        G = FiniteGroupOracle.from_permutations(gens, name)
        N, T, inv = G.order, G.table, G.inverse
        a, b = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
        comms = set(T[T[T[a, b], inv[a]], inv[b]].ravel().tolist())
        squares = set(T[np.arange(N), np.arange(N)].tolist())
        ok = ok and N <= 24
        for x in range(N):
            h = G.representative(x)
            v, s = is_commutator_oracle(h, G), is_square_oracle(h, G)
            if "indeterminate" in (v.status, s.status) or bool(v) != (x in comms) or bool(s) != (x in squares):
                ok = False
            if v and not check_commutator_verdict(h, v, G):
                ok = False
            if s and not check_square_verdict(h, s, G):
                ok = False
    assert c.finish(ok)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
