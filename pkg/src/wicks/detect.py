"""Genus computation and commutator / square detection.

Free-group answers come from matching Wicks forms against the cyclic core of
the input.  Over a general :class:`~wicks.oracle.GroupOracle` the commutator
and square tests search the bounded normal forms (four for commutators, two
for squares) and :func:`verify_certificate` checks a genus certificate
condition by condition.  :func:`brute_force_genus` is the slow, independent
reference used to cross-check everything else.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct

import numpy as np

from .extension import (CheckResult, Extension, check_joint_extension, double_edges, extension_length,
                        hamiltonian_label, insert_cycles, labelling_report, VertexClass)
from .oracle import BudgetExceeded, FreeGroupOracle, GroupOracle, K
from .quadratic import delete_letters, is_orientable
from .surface import build_graph
from .words import Letter, Word, as_word, commutator, cyclic_reduce, free_reduce, product
from .wicks_enum import canonical_code, enumerate_wicks, is_wicks_form

HALF = Fraction(1, 2)


def _floor(x) -> int:
    return int(math.floor(float(x) + 1e-9))


def _substitute(W: Word, images: dict) -> Word:
    out = []
    for l in W.letters:
        img = images[l.symbol]
        out.extend(img.letters if l.exp == 1 else img.inverse().letters)
    return Word(tuple(out))


# ----------------------------------------------------------------------------
# matching Wicks forms in a free group

@dataclass
class CancellationFreeLabelling:
    form: Word
    images: dict  # symbol of the form -> Word
    conjugator: Word = field(default_factory=Word)

    def substitute(self) -> Word:
        return _substitute(self.form, self.images)

    def is_cancellation_free(self) -> bool:
        F = self.substitute()
        total = sum(len(w) for w in self.images.values())
        return F.is_cyclically_reduced() and len(F) == 2 * total

    def element(self) -> Word:
        """R theta(W) R^-1, freely reduced."""
        return product(self.conjugator, self.substitute(), self.conjugator.inverse())

    def max_label(self) -> int:
        return max((len(w) for w in self.images.values()), default=0)


def core_rotations(w):
    """Distinct rotations t of the cyclic core of w, each with a shortest R
    such that w = R t R^-1 in the free group."""
    g, core = cyclic_reduce(w)
    ls = core.letters
    m = len(ls)
    seen = set()
    for k in range(m or 1):
        t = ls[k:] + ls[:k]
        if t in seen:
            continue
        seen.add(t)
        options = (Word(ls[:k]), Word(ls[k:]).inverse())
        R = min((free_reduce(g * p) for p in options), key=len)
        yield R, Word(t)


def _match_literal(t: tuple, W: tuple, min_len: int):
    """Assign segments of t to the letters of W so that substituting gives t."""
    m, n = len(t), len(W)
    assign: dict = {}

    def inv(seg):
        return tuple(Letter(l.symbol, -l.exp) for l in reversed(seg))

    def rec(i, pos):
        if i == n:
            return pos == m
        l = W[i]
        if l.symbol in assign:
            seg = assign[l.symbol]
            if l.exp == -1:
                seg = inv(seg)
            L = len(seg)
            if t[pos:pos + L] != seg:
                return False
            return rec(i + 1, pos + L)
        # letters still to be placed after this one, counting this symbol's partner
        rest = n - i - 1
        for L in range(min_len, m - pos + 1):
            if pos + 2 * L + min_len * (rest - 1) > m and rest > 0:
                break
            seg = t[pos:pos + L]
            assign[l.symbol] = seg if l.exp == 1 else inv(seg)
            if rec(i + 1, pos + L):
                return True
            del assign[l.symbol]
        return False

    if rec(0, 0):
        return dict(assign)
    return None


def match_wicks(w, W, allow_empty: bool = False):
    """A cancellation-free labelling theta with ``w = R theta(W) R^-1`` or None.

    Images are non-empty unless ``allow_empty``.
    """
    W = as_word(W)
    w = free_reduce(w)
    _, core = cyclic_reduce(w)
    m = len(core)
    min_len = 0 if allow_empty else 1
    if m < min_len * len(W) or m % 2:
        return None
    if m == 0:
        if not allow_empty:
            return None
        return CancellationFreeLabelling(W, {s: Word() for s in W.support()}, free_reduce(w))
    for R, t in core_rotations(w):
        found = _match_literal(t.letters, W.letters, min_len)
        if found is not None:
            images = {s: Word(seg) for s, seg in found.items()}
            lab = CancellationFreeLabelling(W, images, R)
            assert lab.substitute() == t
            return lab
    return None


def _exponent_sums(w) -> list:
    return list(free_reduce(w).exponent_sums().values())


def _templates(n, orientable: bool, max_len: int):
    for f in enumerate_wicks(n, orientable, max_len=max_len):
        yield f.word
        yield f.word.inverse()


def match_genus(w, n, orientable: bool):
    """First non-empty match of w against a genus-n form, or None."""
    _, core = cyclic_reduce(w)
    for T in _templates(n, orientable, len(core)):
        lab = match_wicks(w, T)
        if lab is not None:
            return lab
    return None


def genus_plus_free(w, max_n: int):
    """Least n <= max_n with w a product of n commutators in the free group."""
    w = free_reduce(w)
    if len(w) == 0:
        return 0
    if any(s != 0 for s in _exponent_sums(w)):
        return None
    for n in range(1, int(max_n) + 1):
        if match_genus(w, n, True) is not None:
            return n
    return None


def genus_minus_free(w, max_n):
    """Least half-integer n <= max_n with w a product of 2n squares, or None.

    The least genus is the smaller of the best non-orientable form match and
    one half more than the orientable genus (a crosscap carrying the trivial
    label).
    """
    w = free_reduce(w)
    max_n = Fraction(max_n)
    if len(w) == 0:
        return Fraction(0)
    if any(s % 2 for s in _exponent_sums(w)):
        return None
    cap = max_n
    plus = genus_plus_free(w, _floor(max_n - HALF)) if max_n >= 1 else None
    if plus is not None:
        cap = min(cap, Fraction(plus))
    n = HALF
    while n <= cap:
        if match_genus(w, n, False) is not None:
            return n
        n += HALF
    if plus is not None:
        return plus + HALF
    return None


# symbolic witnesses: (x, y) over the form letters with [x, y] or x^2 y^2 equal to the form
_NAMED = {
    ("commutator", "abAB"): ("a", "b"),
    ("commutator", "abcABC"): ("ab", "cA"),
    ("squares", "aa"): ("a", ""),
    ("squares", "aabb"): ("a", "b"),
    ("squares", "aabccB"): ("a", "bcB"),
    ("squares", "abacBc"): ("ab", "Bc"),
}


def _combine(kind: str, x: Word, y: Word) -> Word:
    if kind == "commutator":
        return commutator(x, y)
    return product(x, x, y, y)


def _invert_witness(kind: str, x: Word, y: Word) -> tuple:
    # [x,y]^-1 = [y,x];  (x^2 y^2)^-1 = (y^-1)^2 (x^-1)^2
    if kind == "commutator":
        return y, x
    return y.inverse(), x.inverse()


def _short_words(symbols, max_len):
    letters = [Letter(s, e) for s in sorted(symbols) for e in (1, -1)]
    out = [()]
    frontier = [()]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for l in letters:
                if not w or w[-1] != l.inverse():
                    nxt.append(w + (l,))
        out.extend(nxt)
        frontier = nxt
    return [Word(w) for w in out]


@lru_cache(maxsize=None)
def symbolic_witness(kind: str, T: Word) -> tuple:
    """(x, y) over the letters of T with [x,y] (or x^2 y^2) equal to T as reduced words."""
    key = (kind, str(T))
    if key in _NAMED:
        x, y = _NAMED[key]
        return as_word(x), as_word(y)
    inv = str(T.inverse())
    if (kind, inv) in _NAMED:
        x, y = _NAMED[(kind, inv)]
        return _invert_witness(kind, as_word(x), as_word(y))
    target = free_reduce(T)
    words = _short_words(T.support(), 3)
    for x in words:
        for y in words:
            P = _combine(kind, x, y)
            if len(P) != len(target):
                continue
            g = FreeGroupOracle(sorted(T.support())).are_conjugate(target, P)
            if g is not None:
                # T = g P g^-1, and conjugation distributes over the form
                return product(g, x, g.inverse()), product(g, y, g.inverse())
    raise ValueError(f"no short {kind} witness for {T}")


def _witness_from_match(kind: str, lab: CancellationFreeLabelling) -> tuple:
    x, y = symbolic_witness(kind, lab.form)
    R = lab.conjugator
    a = product(R, _substitute(x, lab.images), R.inverse())
    b = product(R, _substitute(y, lab.images), R.inverse())
    return a, b


def is_commutator_free(w):
    """(a, b) with [a, b] = w in the free group, or None."""
    w = free_reduce(w)
    if len(w) == 0:
        return Word(), Word()
    if any(s != 0 for s in _exponent_sums(w)):
        return None
    lab = match_genus(w, 1, True)
    if lab is None:
        return None
    a, b = _witness_from_match("commutator", lab)
    assert commutator(a, b) == w
    return a, b


def is_two_squares_free(w):
    """(a, b) with a^2 b^2 = w in the free group, or None."""
    w = free_reduce(w)
    if len(w) == 0:
        return Word(), Word()
    if any(s % 2 for s in _exponent_sums(w)):
        return None
    for n in (HALF, 1):
        lab = match_genus(w, n, False)
        if lab is not None:
            a, b = _witness_from_match("squares", lab)
            assert product(a, a, b, b) == w
            return a, b
    return None


def is_square_free(w):
    """x with x^2 conjugate to w in the free group, or None."""
    w = free_reduce(w)
    if len(w) == 0:
        return Word()
    lab = match_genus(w, HALF, False)
    if lab is None:
        return None
    a, _ = _witness_from_match("squares", lab)
    return a


# ----------------------------------------------------------------------------
# bounded normal-form searches over an oracle

PRESENT, ABSENT, INDETERMINATE = "present", "absent", "indeterminate"


@dataclass
class Verdict:
    status: str
    form: int | None = None
    conjugator: Word | None = None
    F: Word | None = None
    parts: dict = field(default_factory=dict)
    note: str = ""

    def __bool__(self) -> bool:
        return self.status == PRESENT

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "form": self.form,
            "R": None if self.conjugator is None else str(self.conjugator),
            "F": None if self.F is None else str(self.F),
            "parts": {k: str(v) for k, v in self.parts.items()},
            "note": self.note,
        }


@dataclass(frozen=True)
class Budget:
    max_ball: int = 3  # radius cap for free-group xi searches
    max_work: int = 2_000_000  # candidate checks before giving up
    max_table: int = 60_000_000  # entries in a finite-group value table


def _split_points(m: int, pieces: int):
    """Cut points 0 <= c1 <= ... <= c_{pieces-1} <= m."""
    def rec(start, k):
        if k == 0:
            yield ()
            return
        for c in range(start, m + 1):
            for rest in rec(c, k - 1):
                yield (c,) + rest
    yield from rec(0, pieces - 1)


def _literal_form1(F: Word, L: int):
    ls = F.letters
    m = len(ls)
    if m % 2:
        return None
    half = m // 2
    for i in range(min(L, half) + 1):
        for j in range(min(L, half - i) + 1):
            k = half - i - j
            if k > L:
                continue
            X, Y, Z = Word(ls[:i]), Word(ls[i:i + j]), Word(ls[i + j:half])
            if (X * Y * Z * X.inverse() * Y.inverse() * Z.inverse()).letters == ls:
                return {"X": X, "Y": Y, "Z": Z}
    return None


class _Work:
    def __init__(self, cap):
        self.cap = cap
        self.n = 0

    def tick(self, k=1):
        self.n += k
        if self.n > self.cap:
            raise BudgetExceeded("search budget exhausted")


def _free_forms_234(oracle, F: Word, bound: int, radius: int, work: _Work):
    """Literal splits of F with the xi relations of forms 2-4 (free backend)."""
    ls = F.letters
    m = len(ls)
    xis = oracle.ball(radius)
    red = free_reduce
    # form 2: F = A1 A2^-1, A1 = xi1^-1 A2 xi2, xi1 ~ xi2
    for (c,) in _split_points(m, 2):
        A1, A2 = Word(ls[:c]), Word(ls[c:]).inverse()
        for x1 in xis:
            work.tick()
            x2 = red(A2.inverse() * x1 * A1)
            if len(x1) + len(x2) <= bound and oracle.are_conjugate(x1, x2, bound=None) is not None:
                return 2, {"A1": A1, "A2": A2, "xi1": x1, "xi2": x2}
    # form 3: F = A1 B1 A2^-1 B2^-1, A1 = xi1 A2 xi3, B1 = xi4 B2 xi2, xi1 xi2 xi3 xi4 = 1
    for c1, c2, c3 in _split_points(m, 4):
        A1, B1 = Word(ls[:c1]), Word(ls[c1:c2])
        A2, B2 = Word(ls[c2:c3]).inverse(), Word(ls[c3:]).inverse()
        for x1 in xis:
            x3 = red(A2.inverse() * x1.inverse() * A1)
            for x2 in xis:
                work.tick()
                x4 = red((x1 * x2 * x3).inverse())
                if sum(map(len, (x1, x2, x3, x4))) > bound:
                    continue
                if red(x4 * B2 * x2) == red(B1):
                    return 3, {"A1": A1, "B1": B1, "A2": A2, "B2": B2, "xi1": x1, "xi2": x2, "xi3": x3, "xi4": x4}
    # form 4: F = A1 B1 C1 A2^-1 B2^-1 C2^-1 with rho/xi triples multiplying to 1
    for c1, c2, c3, c4, c5 in _split_points(m, 6):
        A1, B1, C1 = Word(ls[:c1]), Word(ls[c1:c2]), Word(ls[c2:c3])
        A2, B2, C2 = Word(ls[c3:c4]).inverse(), Word(ls[c4:c5]).inverse(), Word(ls[c5:]).inverse()
        for x1 in xis:
            r1 = red(A2.inverse() * x1.inverse() * A1)  # forced by A1 = xi1 A2 rho1
            for x2 in xis:
                work.tick()
                r2 = red(B1 * x2.inverse() * B2.inverse())
                x3 = red((x1 * x2).inverse())
                r3 = red((r1 * r2).inverse())
                if sum(map(len, (x1, x2, x3, r1, r2, r3))) > bound:
                    continue
                if red(x3 * C2 * r3) == red(C1):
                    return 4, {"A1": A1, "B1": B1, "C1": C1, "A2": A2, "B2": B2, "C2": C2,
                               "xi1": x1, "xi2": x2, "xi3": x3, "rho1": r1, "rho2": r2, "rho3": r3}
    return None


def _table_values(oracle, key, build):
    cache = oracle._form_cache
    if key not in cache:
        cache[key] = build()
    return cache[key]


def _first_index(values: np.ndarray) -> dict:
    flat = values.ravel()
    uniq, idx = np.unique(flat, return_index=True)
    return dict(zip(uniq.tolist(), idx.tolist()))


def _finite_commutator_tables(oracle, L1: int, bound: int, budget: Budget):
    T, inv, dist = oracle.table, oracle.inverse, oracle.dist
    N = oracle.order
    allx = np.arange(N)
    B = np.array(oracle.ball_keys(L1))
    b = len(B)
    if b ** 3 > budget.max_table:
        raise BudgetExceeded("form 1 table too large")
    X, Y, Z = B[:, None, None], B[None, :, None], B[None, None, :]
    v = T[T[T[T[T[X, Y], Z], inv[X]], inv[Y]], inv[Z]]
    f1 = (B, _first_index(v))

    # form 2: xi1^-1 A xi2 A^-1 with xi1 ~ xi2 and |xi1| + |xi2| <= bound
    pairs = [(x, y) for x in range(N) for y in range(N)
             if dist[x] + dist[y] <= bound and oracle.class_of(x) == oracle.class_of(y)]
    P = np.array(pairs, dtype=np.int64).reshape(-1, 2)
    if len(P) * N > budget.max_table:
        raise BudgetExceeded("form 2 table too large")
    A = allx[None, :]
    v = T[T[T[inv[P[:, 0]][:, None], A], P[:, 1][:, None]], inv[A]]
    f2 = (P, _first_index(v))

    # form 3: xi1 A (xi1 xi2)^-1 B xi2 A^-1 B^-1, cost |xi1| + |xi2| + |xi1 xi2|
    pairs = [(x, y) for x in range(N) for y in range(N) if dist[x] + dist[y] + dist[T[x, y]] <= bound]
    P3 = np.array(pairs, dtype=np.int64).reshape(-1, 2)
    if len(P3) * N * N > budget.max_table:
        raise BudgetExceeded("form 3 table too large")
    x1 = P3[:, 0][:, None, None]
    x2 = P3[:, 1][:, None, None]
    s = inv[T[x1, x2]]
    A = allx[None, :, None]
    Bv = allx[None, None, :]
    v = T[T[T[T[T[T[x1, A], s], Bv], x2], inv[A]], inv[Bv]]
    f3 = (P3, _first_index(v))

    # form 4: xi A P B xi^-1 C P^-1 A^-1 B^-1 C^-1, cost 2|xi| + 2|P|
    pairs = [(x, p) for x in range(N) for p in range(N) if 2 * dist[x] + 2 * dist[p] <= bound]
    P4 = np.array(pairs, dtype=np.int64).reshape(-1, 2)
    if len(P4) * N ** 3 > budget.max_table:
        raise BudgetExceeded("form 4 table too large")
    first4: dict = {}
    A = allx[:, None, None]
    Bv = allx[None, :, None]
    C = allx[None, None, :]
    for row, (x, p) in enumerate(P4.tolist()):
        v = T[T[T[T[T[T[T[T[T[x, A], p], Bv], inv[x]], C], inv[p]], inv[A]], inv[Bv]], inv[C]]
        for val, idx in _first_index(v).items():
            if val not in first4:
                first4[val] = row * N ** 3 + idx
    f4 = (P4, first4)
    return f1, f2, f3, f4


def _finite_commutator_parts(oracle, form, tables, F):
    rep = oracle.representative
    T, inv = oracle.table, oracle.inverse
    N = oracle.order
    data, first = tables[form - 1]
    idx = first[F]
    if form == 1:
        b = len(data)
        i, j, k = idx // (b * b), (idx // b) % b, idx % b
        return {"X": rep(data[i]), "Y": rep(data[j]), "Z": rep(data[k])}
    if form == 2:
        row, a = divmod(idx, N)
        x1, x2 = data[row]
        A1 = T[T[inv[x1], a], x2]
        return {"A1": rep(A1), "A2": rep(a), "xi1": rep(x1), "xi2": rep(x2)}
    if form == 3:
        row, rest = divmod(idx, N * N)
        a, b_ = divmod(rest, N)
        x1, x2 = data[row]
        x4 = inv[T[x1, x2]]
        return {"A1": rep(T[x1, a]), "B1": rep(T[T[x4, b_], x2]), "A2": rep(a), "B2": rep(b_),
                "xi1": rep(x1), "xi2": rep(x2), "xi3": Word(), "xi4": rep(x4)}
    row, rest = divmod(idx, N ** 3)
    a, rest = divmod(rest, N * N)
    b_, c = divmod(rest, N)
    x, p = data[row]
    return {"A1": rep(T[x, a]), "B1": rep(T[p, b_]), "C1": rep(T[T[inv[x], c], inv[p]]),
            "A2": rep(a), "B2": rep(b_), "C2": rep(c),
            "xi1": rep(x), "xi2": Word(), "xi3": rep(inv[x]), "rho1": Word(), "rho2": rep(p), "rho3": rep(inv[p])}


def _form_word(form: int, parts: dict) -> Word:
    p = parts
    if form == 1:
        X, Y, Z = p["X"], p["Y"], p["Z"]
        return X * Y * Z * X.inverse() * Y.inverse() * Z.inverse()
    if form == 2:
        return p["A1"] * p["A2"].inverse()
    if form == 3:
        return p["A1"] * p["B1"] * p["A2"].inverse() * p["B2"].inverse()
    return p["A1"] * p["B1"] * p["C1"] * p["A2"].inverse() * p["B2"].inverse() * p["C2"].inverse()


def commutator_bounds(h, oracle) -> dict:
    c = oracle.constants(1)
    L1 = _floor(c.piece_bound)
    return {"piece": L1, "xi_sum": 12 * L1, "R1": _floor(c.conjugator_bound_short(len(h))),
            "R234": _floor(c.conjugator_bound_ext(len(h)))}


def is_commutator_oracle(h, oracle: GroupOracle, budget: Budget = Budget()) -> Verdict:
    """Search the four bounded forms for h = R F R^-1."""
    h = as_word(h)
    if oracle.is_free:
        h = free_reduce(h)
    b = commutator_bounds(h, oracle)
    try:
        if oracle.is_free:
            for R, F in oracle.conjugates_within(h, b["R1"]):
                parts = _literal_form1(F, b["piece"])
                if parts is not None:
                    return Verdict(PRESENT, 1, R, F, parts)
            if oracle.refutes_commutator(h):
                return Verdict(ABSENT, note="refuted by exact free-group matching")
            work = _Work(budget.max_work)
            radius = min(budget.max_ball, b["xi_sum"])
            for R, F in oracle.conjugates_within(h, b["R234"]):
                found = _free_forms_234(oracle, F, b["xi_sum"], radius, work)
                if found is not None:
                    return Verdict(PRESENT, found[0], R, F, found[1])
            return Verdict(INDETERMINATE, note=f"xi radius capped at {radius}")
        tables = _table_values(oracle, ("commutator", b["piece"], b["xi_sum"]),
                               lambda: _finite_commutator_tables(oracle, b["piece"], b["xi_sum"], budget))
        for form, bound in ((1, b["R1"]), (2, b["R234"]), (3, b["R234"]), (4, b["R234"])):
            for R, F in oracle.conjugates_within(h, bound):
                if oracle.evaluate(F) in tables[form - 1][1]:
                    parts = _finite_commutator_parts(oracle, form, tables, oracle.evaluate(F))
                    return Verdict(PRESENT, form, R, F, parts)
        return Verdict(ABSENT)
    except BudgetExceeded as exc:
        return Verdict(INDETERMINATE, note=str(exc))


def square_bounds(h, oracle) -> dict:
    c = oracle.constants(HALF)
    c1 = oracle.constants(1)
    return {"piece": _floor(c1.piece_bound), "xi": _floor(5 * c.l + c.M + 4),
            "R1": _floor(len(h) / 2 + 12 * c1.l + 1.5 * c1.M + 2 * float(c1.delta) + 3.5),
            "R2": _floor(c.conjugator_bound_ext(len(h)))}


def is_square_oracle(h, oracle: GroupOracle, budget: Budget = Budget()) -> Verdict:
    """Search F = X^2 and F = A1 A2 with A1 = xi A2 xi for h = R F R^-1."""
    h = as_word(h)
    if oracle.is_free:
        h = free_reduce(h)
    b = square_bounds(h, oracle)
    try:
        if oracle.is_free:
            for R, F in oracle.conjugates_within(h, b["R1"]):
                m = len(F)
                if m % 2 == 0 and m // 2 <= b["piece"] and F.letters[:m // 2] == F.letters[m // 2:]:
                    return Verdict(PRESENT, 1, R, F, {"X": Word(F.letters[:m // 2])})
            if oracle.refutes_square(h):
                return Verdict(ABSENT, note="refuted by exact free-group matching")
            work = _Work(budget.max_work)
            radius = min(budget.max_ball, b["xi"])
            xis = oracle.ball(radius)
            for R, F in oracle.conjugates_within(h, b["R2"]):
                ls = F.letters
                for c in range(len(ls) + 1):
                    A1, A2 = Word(ls[:c]), Word(ls[c:])
                    for xi in xis:
                        work.tick()
                        if free_reduce(xi * A2 * xi) == A1:
                            return Verdict(PRESENT, 2, R, F, {"A1": A1, "A2": A2, "xi": xi})
            return Verdict(INDETERMINATE, note=f"xi radius capped at {radius}")
        T, inv = oracle.table, oracle.inverse
        N = oracle.order

        def build():
            B1 = np.array(oracle.ball_keys(b["piece"]))
            f1 = _first_index(T[B1, B1])
            Bx = np.array(oracle.ball_keys(b["xi"]))
            if len(Bx) * N > budget.max_table:
                raise BudgetExceeded("square form 2 table too large")
            xi = Bx[:, None]
            A = np.arange(N)[None, :]
            f2 = _first_index(T[T[T[xi, A], xi], A])
            return (B1, f1), (Bx, f2)

        (B1, f1), (Bx, f2) = _table_values(oracle, ("square", b["piece"], b["xi"]), build)
        rep = oracle.representative
        for R, F in oracle.conjugates_within(h, b["R1"]):
            x = oracle.evaluate(F)
            if x in f1:
                return Verdict(PRESENT, 1, R, F, {"X": rep(B1[f1[x]])})
        for R, F in oracle.conjugates_within(h, b["R2"]):
            x = oracle.evaluate(F)
            if x in f2:
                i, a = divmod(f2[x], N)
                xi = Bx[i]
                return Verdict(PRESENT, 2, R, F, {"A1": rep(T[T[xi, a], xi]), "A2": rep(a), "xi": rep(xi)})
        return Verdict(ABSENT)
    except BudgetExceeded as exc:
        return Verdict(INDETERMINATE, note=str(exc))


def check_commutator_verdict(h, v: Verdict, oracle) -> bool:
    """Re-verify a present verdict from its parts alone."""
    eq = oracle.are_equal
    p = v.parts
    F = _form_word(v.form, p)
    if not eq(h, v.conjugator * F * v.conjugator.inverse()):
        return False
    if v.form == 2:
        return eq(p["A1"], p["xi1"].inverse() * p["A2"] * p["xi2"]) and \
            oracle.are_conjugate(p["xi1"], p["xi2"], bound=10 ** 6) is not None
    if v.form == 3:
        return eq(p["A1"], p["xi1"] * p["A2"] * p["xi3"]) and eq(p["B1"], p["xi4"] * p["B2"] * p["xi2"]) \
            and eq(p["xi1"] * p["xi2"] * p["xi3"] * p["xi4"], "")
    if v.form == 4:
        return eq(p["A1"], p["xi1"] * p["A2"] * p["rho1"]) and eq(p["B1"], p["rho2"] * p["B2"] * p["xi2"]) \
            and eq(p["C1"], p["xi3"] * p["C2"] * p["rho3"]) and eq(p["xi1"] * p["xi2"] * p["xi3"], "") \
            and eq(p["rho1"] * p["rho2"] * p["rho3"], "")
    return True


def check_square_verdict(h, v: Verdict, oracle) -> bool:
    p = v.parts
    if v.form == 1:
        F = p["X"] * p["X"]
    else:
        F = p["A1"] * p["A2"]
        if not oracle.are_equal(p["A1"], p["xi"] * p["A2"] * p["xi"]):
            return False
    return oracle.are_equal(h, v.conjugator * F * v.conjugator.inverse())


# ----------------------------------------------------------------------------
# certificates

@dataclass
class GenusCertificate:
    genus: Fraction
    orientable: bool
    form: Word  # the Wicks form W
    conjugator: Word
    labelling: dict | None = None  # variant 1: theta
    specialisation: Word | None = None  # variant 2: U
    deleted: tuple = ()
    extension: Extension | None = None

    @property
    def variant(self) -> int:
        return 1 if self.extension is None else 2

    def to_dict(self) -> dict:
        out = {"variant": self.variant, "genus": str(self.genus), "orientable": self.orientable,
               "form": str(self.form), "R": str(self.conjugator)}
        if self.variant == 1:
            out["labelling"] = {s: str(w) for s, w in self.labelling.items()}
        else:
            out["specialisation"] = str(self.specialisation)
            out["deleted"] = list(self.deleted)
            out["extension"] = self.extension.to_dict()
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "GenusCertificate":
        try:
            base = dict(genus=Fraction(str(d["genus"])), orientable=bool(d["orientable"]),
                        form=as_word(d["form"]), conjugator=as_word(d.get("R", "")))
            if int(d.get("variant", 1)) == 1:
                return cls(labelling={s: as_word(w) for s, w in d["labelling"].items()}, **base)
            return cls(specialisation=as_word(d["specialisation"]), deleted=tuple(d.get("deleted", ())),
                       extension=Extension.from_dict(d["extension"]), **base)
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed certificate: {exc}") from None

    @classmethod
    def load(cls, path: str) -> "GenusCertificate":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


@dataclass
class Report:
    checks: list

    def __bool__(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def indeterminate(self) -> bool:
        return any(c.ok is None for c in self.checks) and not any(c.ok is False for c in self.checks)

    def lines(self) -> list:
        tag = {True: "ok", False: "FAIL", None: "unknown"}
        return [f"{tag[c.ok]:7s} {c.name}" + (f"  ({c.detail})" if c.detail and c.ok is not True else "")
                for c in self.checks]


def _form_checks(cert: GenusCertificate) -> list:
    W = cert.form
    out = [CheckResult("form is a Wicks form", is_wicks_form(W), str(W))]
    if out[0].ok:
        g = build_graph(W).genus()
        out.append(CheckResult("form has the claimed genus", g == cert.genus, f"genus {g}"))
        out.append(CheckResult("form orientability", is_orientable(W) == cert.orientable))
    return out


def verify_certificate(h, cert: GenusCertificate, oracle: GroupOracle) -> Report:
    h = as_word(h)
    n = Fraction(cert.genus)
    c = oracle.constants(n)
    R = cert.conjugator
    checks = _form_checks(cert)
    if cert.variant == 1:
        theta = cert.labelling or {}
        W = cert.form
        missing = sorted(W.support() - set(theta))
        checks.append(CheckResult("labelling covers the form", not missing, ",".join(missing)))
        if missing:
            return Report(checks)
        lab = CancellationFreeLabelling(W, theta, R)
        checks.append(CheckResult("labels non-empty", all(len(w) > 0 for w in theta.values())))
        checks.append(CheckResult("labels minimal", all(oracle.is_minimal(w) for w in theta.values())))
        bound = _floor(c.piece_bound)
        checks.append(CheckResult(f"labels of length <= {bound}", lab.max_label() <= bound,
                                  f"longest {lab.max_label()}"))
        checks.append(CheckResult("cancellation free", lab.is_cancellation_free()))
        F = lab.substitute()
        Rb = _floor(c.conjugator_bound_short(len(h)))
    else:
        ext = cert.extension
        U = cert.specialisation
        W = cert.form
        proper = set(cert.deleted) < W.support()
        spec_ok = proper and canonical_code(delete_letters(W, cert.deleted)) == canonical_code(U)
        checks.append(CheckResult("specialisation of the form", spec_ok))
        checks.append(CheckResult("extension is built on the specialisation", ext.base_word == U))
        k = build_graph(U).genus()
        checks.append(CheckResult("extension genus is n - genus(U)", ext.genus == n - k,
                                  f"{ext.genus} vs {n} - {k}"))
        if cert.orientable:
            checks.append(CheckResult("orientable pieces", is_orientable(U) and all(p.orientable for p in ext.partition)))
        checks.extend(labelling_report(ext.graph, ext.labelling, oracle))
        checks.append(CheckResult("partition covers vertices", ext.partition_ok()))
        for cls in ext.partition:
            checks.append(CheckResult(f"joint extension on {list(cls.vertices)} of genus {cls.genus}",
                                      check_joint_extension(ext, cls, oracle)))
        cap = 2 * c.K * c.piece_bound
        L = extension_length(ext)
        checks.append(CheckResult("extension length bound", L <= cap + 1e-9, f"{L} > {cap}"))
        F = hamiltonian_label(ext)
        checks.append(CheckResult("F minimal", oracle.is_minimal(F), str(F)))
        Rb = _floor(c.conjugator_bound_ext(len(h)))
    checks.append(CheckResult("h = R F R^-1", oracle.are_equal(h, R * F * R.inverse())))
    checks.append(CheckResult(f"|R| <= {Rb}", len(R) <= Rb, f"|R| = {len(R)}"))
    return Report(checks)


def trivial_extension_certificate(lab: CancellationFreeLabelling, n, orientable) -> GenusCertificate:
    """Variant 2 with U = W and empty cycle labels: psi(x1) = psi(x2) = theta(x)."""
    W = lab.form
    d = double_edges(W)
    graph = insert_cycles(d)
    psi = {}
    for x, (x1, x2) in d.pairs.items():
        psi[x1] = lab.images[x]
        psi[x2] = lab.images[x]
    for v in graph.vertices:
        for c in graph.cycles[v]:
            psi[c] = Word()
    part = [VertexClass((v,), Fraction(0), True) for v in graph.vertices]
    ext = Extension(graph, psi, part)
    return GenusCertificate(Fraction(n), orientable, W, lab.conjugator, specialisation=W, deleted=(), extension=ext)


def search_genus(h, n, orientable: bool, oracle: GroupOracle, budget: Budget = Budget()):
    """Returns ``(status, certificate)``; the certificate always verifies."""
    h = as_word(h)
    n = Fraction(n)
    if n <= 0:
        return (PRESENT, None) if oracle.are_equal(h, "") else (ABSENT, None)
    c = oracle.constants(n)
    bound = _floor(c.piece_bound)
    try:
        if oracle.is_free:
            h = free_reduce(h)
            sums = _exponent_sums(h)
            if any((s % 2 if not orientable else s) for s in sums):
                return ABSENT, None
            _, core = cyclic_reduce(h)
            for T in _templates(n, orientable, len(core)):
                lab = match_wicks(h, T)
                if lab is None:
                    continue
                if lab.max_label() <= bound:
                    cert = GenusCertificate(n, orientable, T, lab.conjugator, labelling=lab.images)
                else:
                    cert = trivial_extension_certificate(lab, n, orientable)
                if verify_certificate(h, cert, oracle):
                    return PRESENT, cert
            exact = genus_plus_free(h, int(n)) if orientable else genus_minus_free(h, n)
            if exact is None or exact > n:
                return ABSENT, None
            return INDETERMINATE, None
        return _search_finite(h, n, orientable, oracle, bound, budget)
    except BudgetExceeded:
        return INDETERMINATE, None


def _search_finite(h, n, orientable, oracle, bound, budget):
    c = oracle.constants(n)
    Rb = _floor(c.conjugator_bound_short(len(h)))
    labels = [oracle.representative(x) for x in oracle.ball_keys(bound) if oracle.key_length(x) > 0]
    targets = {}
    for R, F in oracle.conjugates_within(h, Rb):
        targets.setdefault(oracle.evaluate(F), R)
    work = _Work(budget.max_work)
    for f in enumerate_wicks(n, orientable):
        for T in (f.word, f.word.inverse()):
            syms = sorted(T.support())
            for combo in iproduct(labels, repeat=len(syms)):
                work.tick()
                images = dict(zip(syms, combo))
                lab = CancellationFreeLabelling(T, images)
                if not lab.is_cancellation_free():
                    continue
                x = oracle.evaluate(lab.substitute())
                if x in targets:
                    cert = GenusCertificate(n, orientable, T, targets[x], labelling=images)
                    if verify_certificate(h, cert, oracle):
                        return PRESENT, cert
    return ABSENT, None


# ----------------------------------------------------------------------------
# reference searches

def _abelian_obstruction(w, orientable: bool) -> bool:
    sums = _exponent_sums(w)
    return any((s if orientable else s % 2) for s in sums)


def _element_set(oracle, kind: str, L: int, cap: int) -> list:
    key = ("elements", kind, L)
    cache = oracle.__dict__.setdefault("_brute_cache", {})
    if key not in cache:
        ball = oracle.ball_keys(L)
        if len(ball) ** 2 > cap:
            raise BudgetExceeded("ball too large for brute force")
        vals = {oracle.identity()}
        if kind == "commutator":
            for x in ball:
                xi = oracle.inv(x)
                for y in ball:
                    vals.add(oracle.mul(oracle.mul(oracle.mul(x, y), xi), oracle.inv(y)))
        else:
            for x in ball:
                vals.add(oracle.mul(x, x))
        cache[key] = sorted(vals, key=lambda v: (oracle.key_length(v), str(v)))
    return cache[key]


def brute_force_genus(w, n, orientable: bool, L: int, oracle: GroupOracle,
                      prefilter: bool = True, cap: int = 2_000_000) -> bool:
    """Is some conjugate v^-1 w v (|v| <= L) a product of n commutators, or
    2n squares, of elements of length <= L?"""
    w = as_word(w)
    n = Fraction(n)
    k = n if orientable else 2 * n
    if k.denominator != 1 or k < 0:
        raise ValueError("genus does not fit the orientability")
    k = int(k)
    x = oracle.evaluate(w)
    if k == 0:
        return x == oracle.identity()
    if prefilter and oracle.is_free and _abelian_obstruction(w, orientable):
        return False
    elems = _element_set(oracle, "commutator" if orientable else "square", L, cap)
    targets = set()
    for v in oracle.ball_keys(L):
        targets.add(oracle.mul(oracle.mul(oracle.inv(v), x), v))

    def products(j):
        out = {oracle.identity()}
        for _ in range(j):
            nxt = set()
            for p in out:
                for e in elems:
                    nxt.add(oracle.mul(p, e))
                    if len(nxt) > cap:
                        raise BudgetExceeded("product set too large")
            out = nxt
        return out

    right = products((k + 1) // 2)
    if k == 1:
        return bool(targets & right)
    left = products(k // 2)
    work = _Work(cap * 10)
    for t in targets:
        for p in left:
            work.tick()
            if oracle.mul(oracle.inv(p), t) in right:
                return True
    return False


def genus_tuple(c, n, orientable: bool, oracle: GroupOracle, radius: int = 2, cap: int = 200_000) -> bool:
    """Some product c_1 r_2 c_2 r_2^-1 ... r_t c_t r_t^-1 (|r_i| <= radius) has genus <= n."""
    words = [as_word(w) for w in c]
    n = Fraction(n)
    if not words:
        return True
    rs = oracle.ball(radius)
    if len(rs) ** (len(words) - 1) > cap:
        raise BudgetExceeded("too many conjugator choices")
    for choice in iproduct(rs, repeat=len(words) - 1):
        p = words[0]
        for r, w in zip(choice, words[1:]):
            p = p * r * w * r.inverse()
        if oracle.is_free:
            p = free_reduce(p)
            if n == 0:
                ok = len(p) == 0
            elif orientable:
                ok = genus_plus_free(p, int(n)) is not None
            else:
                ok = genus_minus_free(p, n) is not None
        else:
            L = getattr(oracle, "diameter", radius)
            ok = brute_force_genus(p, n, orientable, L, oracle)
        if ok:
            return True
    return False
