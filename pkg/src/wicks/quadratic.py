"""Quadratic words and tuples over a variable alphabet."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .words import Word, as_word


def concat(t) -> Word:
    """Concatenate a word or a tuple of words (no reduction)."""
    if isinstance(t, (Word, str)):
        return as_word(t)
    out = Word()
    for w in t:
        out = out * as_word(w)
    return out


def occurrences(w: Word) -> dict:
    """Map each support symbol to the list of positions where it occurs."""
    occ: dict = {}
    for i, l in enumerate(w.letters):
        occ.setdefault(l.symbol, []).append(i)
    return occ


def is_quadratic(t) -> bool:
    return all(len(p) == 2 for p in occurrences(concat(t)).values())


def _require_quadratic(w: Word):
    if not is_quadratic(w):
        raise ValueError(f"{w} is not quadratic")


@dataclass(frozen=True)
class Signature:
    pairs: dict  # symbol -> (first exponent, second exponent)

    def orientation(self, symbol: str) -> int:
        e, d = self.pairs[symbol]
        return -e * d

    def is_alternating(self, symbol: str) -> bool:
        return self.orientation(symbol) == 1

    def __getitem__(self, symbol):
        return self.pairs[symbol]


def signature(t) -> Signature:
    w = concat(t)
    _require_quadratic(w)
    return Signature({s: (w.letters[i].exp, w.letters[j].exp) for s, (i, j) in occurrences(w).items()})


def is_orientable(t) -> bool:
    sig = signature(t)
    return all(sig.orientation(s) == 1 for s in sig.pairs)


def _cyclic_pairs(words: Sequence[Word]):
    """All length-2 subwords of the cyclic words, as (word index, start, pair)."""
    for k, w in enumerate(words):
        ls = w.letters
        n = len(ls)
        if n < 2:
            continue
        for i in range(n):
            yield k, i, (ls[i], ls[(i + 1) % n])


def _overlap(a, b, lengths) -> bool:
    (ka, ia, _), (kb, ib, _) = a, b
    if ka != kb:
        return False
    n = lengths[ka]
    pa = {ia, (ia + 1) % n}
    pb = {ib, (ib + 1) % n}
    return bool(pa & pb)


def is_redundant(t) -> bool:
    """True when two disjoint cyclic subwords read ``xy`` and ``(xy)^{+-1}``."""
    words = [as_word(t)] if isinstance(t, (Word, str)) else [as_word(w) for w in t]
    lengths = [len(w) for w in words]
    pairs = list(_cyclic_pairs(words))
    for a, b in combinations(pairs, 2):
        (x, y), (u, v) = a[2], b[2]
        same = (u, v) == (x, y)
        inverse = (u, v) == (y.inverse(), x.inverse())
        if (same or inverse) and not _overlap(a, b, lengths):
            return True
    return False


def delete_letters(w: Word, symbols) -> Word:
    symbols = set(symbols)
    return Word(tuple(l for l in w.letters if l.symbol not in symbols))


def specialisations(W) -> list:
    """Words obtained by deleting a proper subset of the support, without
    free reduction, one canonical representative per class."""
    from .wicks_enum import canonicalize

    W = as_word(W)
    _require_quadratic(W)
    supp = sorted(W.support())
    seen = {}
    for r in range(len(supp)):
        for D in combinations(supp, r):
            c = canonicalize(delete_letters(W, D))
            seen.setdefault(c, D)
    return sorted(seen, key=lambda c: (len(c), str(c)))
