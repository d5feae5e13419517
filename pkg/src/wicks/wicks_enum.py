"""Canonical forms and exhaustive enumeration of Wicks forms."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .quadratic import is_orientable, is_quadratic, is_redundant
from .surface import build_graph
from .words import Letter, Word, as_word


def variable_symbol(i: int) -> str:
    """The i-th symbol of the fixed variable alphabet: a..z, then a1, a2, ..."""
    if i < 26:
        return chr(ord("a") + i)
    return f"a{i - 25}"


def _relabel(letters: tuple) -> tuple:
    """Rename by order of first appearance and make first occurrences positive."""
    names: dict = {}
    flip: dict = {}
    out = []
    for l in letters:
        if l.symbol not in names:
            names[l.symbol] = len(names)
            flip[l.symbol] = l.exp
        out.append((names[l.symbol], 0 if l.exp * flip[l.symbol] == 1 else 1))
    return tuple(out)


def _from_code(code: tuple) -> Word:
    return Word(tuple(Letter(variable_symbol(i), 1 if e == 0 else -1) for i, e in code))


def canonical_code(W) -> tuple:
    W = as_word(W)
    ls = W.letters
    inv = tuple(l.inverse() for l in reversed(ls))
    best = None
    for base in (ls, inv):
        for i in range(len(base) or 1):
            code = _relabel(base[i:] + base[:i])
            if best is None or code < best:
                best = code
    return best


def canonicalize(W) -> Word:
    """Least word in the orbit of W under rotation, inversion, per-letter
    inversion and renaming of support letters."""
    return _from_code(canonical_code(W))


def fine_canonicalize(W) -> Word:
    """Quotient by rotation and renaming only (first occurrences keep their sign)."""
    W = as_word(W)
    ls = W.letters
    best = None
    for i in range(len(ls) or 1):
        rot = ls[i:] + ls[:i]
        names: dict = {}
        code = []
        for l in rot:
            names.setdefault(l.symbol, len(names))
            code.append((names[l.symbol], 0 if l.exp == 1 else 1))
        code = tuple(code)
        if best is None or code < best:
            best = code
    return _from_code(best)


def max_length(n) -> int:
    """Longest possible genus-n Wicks form: 12n - 6, with 2 at n = 1/2."""
    n = Fraction(n)
    if n == 0:
        return 0
    if n == Fraction(1, 2):
        return 2
    return int(12 * n - 6)


@dataclass(frozen=True)
class WicksForm:
    word: Word
    genus: Fraction
    orientable: bool

    def __str__(self) -> str:
        return str(self.word)


def is_wicks_form(W, n=None) -> bool:
    W = as_word(W)
    if len(W) == 0 or not is_quadratic(W) or not W.is_cyclically_reduced():
        return False
    if is_redundant(W):
        return False
    if n is not None and build_graph(W).genus() != Fraction(n):
        return False
    return True


def _quadratic_codes(length: int, orientable: bool):
    """Depth-first generation of canonical-prefix quadratic words of the given
    length: new letters appear in order with exponent +1, no adjacent
    cancellation, no repeated adjacent pair (xy twice or xy and its inverse)."""
    k = length // 2
    code = []
    open_letters = []  # letters seen once
    pairs: dict = {}  # adjacent pair -> start index

    def pair_ok(i):
        # pair starting at i-1 ending at i
        x, y = code[i - 1], code[i]
        if x[0] == y[0] and x[1] != y[1]:
            return False
        for p in ((x, y), ((y[0], 1 - y[1]), (x[0], 1 - x[1]))):
            j = pairs.get(p)
            if j is not None and j != i - 2 and j != i:
                # j is the start of an existing pair; overlap iff j == i-2 (shares i-1)
                return False
        return True

    def rec(next_new):
        pos = len(code)
        if pos == length:
            yield tuple(code)
            return
        remaining = length - pos
        choices = []
        if next_new < k and len(open_letters) + 1 <= remaining - 1:
            choices.append((next_new, 0, True))
        for s in list(open_letters):
            if orientable:
                choices.append((s, 1, False))
            else:
                choices.append((s, 0, False))
                choices.append((s, 1, False))
        for s, e, new in choices:
            code.append((s, e))
            ok = pos == 0 or pair_ok(pos)
            if ok:
                added = None
                if pos > 0:
                    p = (code[pos - 1], code[pos])
                    if p not in pairs:
                        pairs[p] = pos - 1
                        added = p
                if new:
                    open_letters.append(s)
                    yield from rec(next_new + 1)
                    open_letters.remove(s)
                else:
                    open_letters.remove(s)
                    yield from rec(next_new)
                    open_letters.append(s)
                    open_letters.sort()
                if added is not None:
                    del pairs[added]
            code.pop()

    yield from rec(0)


def _code_relabel(seq) -> tuple:
    names: dict = {}
    flip: dict = {}
    out = []
    for s, e in seq:
        if s not in names:
            names[s] = len(names)
            flip[s] = e
        out.append((names[s], e ^ flip[s]))
    return tuple(out)


def _code_canonical(code: tuple) -> tuple:
    """canonical_code computed directly on (symbol index, 0|1) tuples."""
    inv = tuple((s, 1 - e) for s, e in reversed(code))
    return min(_code_relabel(base[i:] + base[:i]) for base in (code, inv) for i in range(len(base)))


def _code_redundant(code: tuple) -> bool:
    n = len(code)
    seen: dict = {}
    for i in range(n):
        x, y = code[i], code[(i + 1) % n]
        for p in ((x, y), ((y[0], 1 - y[1]), (x[0], 1 - x[1]))):
            for j in seen.get(p, ()):
                if len({i, (i + 1) % n} & {j, (j + 1) % n}) == 0:
                    return True
        seen.setdefault((x, y), []).append(i)
    return False


def _code_genus(code: tuple) -> Fraction:
    n = len(code)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    pos: dict = {}
    for i, (s, _) in enumerate(code):
        pos.setdefault(s, []).append(i)
    for i, j in pos.values():
        ti = i if code[i][1] == 0 else (i + 1) % n
        tj = j if code[j][1] == 0 else (j + 1) % n
        hi = (i + 1) % n if code[i][1] == 0 else i
        hj = (j + 1) % n if code[j][1] == 0 else j
        parent[find(ti)] = find(tj)
        parent[find(hi)] = find(hj)
    v = len({find(p) for p in range(n)})
    return Fraction(1 - v + len(pos), 2)


@lru_cache(maxsize=None)
def _enumerate(n: Fraction, orientable: bool, limit: int) -> tuple:
    found: set = set()
    for length in range(2, limit + 1, 2):
        for code in _quadratic_codes(length, orientable):
            first, last = code[0], code[-1]
            if first[0] == last[0] and first[1] != last[1]:
                continue  # not cyclically reduced
            if not orientable:
                # some letter must appear twice with the same exponent
                sums: dict = {}
                for s, e in code:
                    sums[s] = sums.get(s, 0) + (1 if e == 0 else -1)
                if all(v == 0 for v in sums.values()):
                    continue
            if _code_genus(code) != n or _code_redundant(code):
                continue
            found.add(_code_canonical(code))
    return tuple(WicksForm(_from_code(c), n, orientable) for c in sorted(found))


def enumerate_wicks(n, orientable: bool, max_len: int | None = None) -> list:
    """All Wicks forms of genus exactly n with the given orientability, one per
    canonical class, of length at most ``min(K(n), max_len)``."""
    n = Fraction(n)
    if n <= 0 or (n * 2).denominator != 1:
        raise ValueError("genus must be a positive half-integer")
    if orientable and n.denominator != 1:
        raise ValueError("orientable genus must be an integer")
    limit = max_length(n)
    if max_len is not None:
        limit = min(limit, max_len)
    return list(_enumerate(n, orientable, limit))
