"""Free-group words over a finite symbol alphabet.

Words are immutable sequences of :class:`Letter`.  The text format is a
string of tokens; a token is a lowercase letter optionally followed by
digits (a generator) or the same token with its first character uppercased
(the inverse).  ``"abAB"`` is a*b*a^-1*b^-1 and ``"a1B2"`` is a1*b2^-1.
``""`` and ``"1"`` both denote the empty word.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

_TOKEN = re.compile(r"([a-zA-Z])(\d*)")


class Letter(NamedTuple):
    symbol: str
    exp: int  # +1 or -1

    def inverse(self) -> "Letter":
        return Letter(self.symbol, -self.exp)

    def __str__(self) -> str:
        return self.symbol if self.exp == 1 else self.symbol[0].upper() + self.symbol[1:]


def symbol_key(symbol: str):
    """Natural order on symbols: ``a < b < ... < a1 < a2 < ... < a10``."""
    head, digits = symbol[0], symbol[1:]
    return (head, -1 if digits == "" else int(digits))


class Alphabet:
    """An ordered, finite set of generator symbols."""

    def __init__(self, symbols: Iterable[str]):
        self.symbols = tuple(symbols)
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("repeated symbol in alphabet")
        for s in self.symbols:
            if not _TOKEN.fullmatch(s) or not s[0].islower():
                raise ValueError(f"invalid symbol {s!r}")
        self._index = {s: i for i, s in enumerate(self.symbols)}

    def __contains__(self, symbol) -> bool:
        return symbol in self._index

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self.symbols == other.symbols

    def __hash__(self) -> int:
        return hash(self.symbols)

    def __repr__(self) -> str:
        return f"Alphabet({','.join(self.symbols)})"

    def index(self, symbol: str) -> int:
        return self._index[symbol]


@dataclass(frozen=True)
class Word:
    """A (not necessarily reduced) word.

    ``alphabet`` is optional; when two words both carry an alphabet, they
    must agree before they can be concatenated.
    """

    letters: tuple = ()
    alphabet: Alphabet | None = None

    def __post_init__(self):
        letters = tuple(l if isinstance(l, Letter) else Letter(*l) for l in self.letters)
        object.__setattr__(self, "letters", letters)
        if self.alphabet is not None:
            for l in letters:
                if l.symbol not in self.alphabet:
                    raise ValueError(f"symbol {l.symbol!r} not in {self.alphabet!r}")

    @classmethod
    def parse(cls, text: str, alphabet: Alphabet | None = None) -> "Word":
        return cls(parse_letters(text), alphabet)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Word(self.letters[i], self.alphabet)
        return self.letters[i]

    def __eq__(self, other) -> bool:
        if isinstance(other, str):
            other = Word.parse(other)
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __str__(self) -> str:
        return "".join(str(l) for l in self.letters) or "1"

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"

    def __mul__(self, other: "Word") -> "Word":
        if isinstance(other, str):
            other = Word.parse(other)
        return Word(self.letters + other.letters, _join_alphabets(self.alphabet, other.alphabet))

    def inverse(self) -> "Word":
        return Word(tuple(l.inverse() for l in reversed(self.letters)), self.alphabet)

    def support(self) -> set:
        return {l.symbol for l in self.letters}

    def exponent_sums(self) -> dict:
        sums: dict = {}
        for l in self.letters:
            sums[l.symbol] = sums.get(l.symbol, 0) + l.exp
        return sums

    def is_reduced(self) -> bool:
        return is_reduced(self.letters)

    def is_cyclically_reduced(self) -> bool:
        ls = self.letters
        return is_reduced(ls) and (len(ls) < 2 or ls[0] != ls[-1].inverse())


def _join_alphabets(a: Alphabet | None, b: Alphabet | None) -> Alphabet | None:
    if a is None:
        return b
    if b is not None and a != b:
        raise ValueError(f"cannot combine words over {a!r} and {b!r}")
    return a


def parse_letters(text: str) -> tuple:
    text = "".join(text.split())
    if text in ("", "1"):
        return ()
    letters = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ValueError(f"bad word {text!r} at position {pos}")
        head, digits = m.groups()
        letters.append(Letter(head.lower() + digits, 1 if head.islower() else -1))
        pos = m.end()
    return tuple(letters)


def as_word(w) -> Word:
    if isinstance(w, Word):
        return w
    if isinstance(w, str):
        return Word.parse(w)
    return Word(tuple(w))


def is_reduced(letters: Sequence[Letter]) -> bool:
    return all(letters[i + 1] != letters[i].inverse() for i in range(len(letters) - 1))


def reduce_letters(letters: Iterable[Letter]) -> tuple:
    out: list = []
    for l in letters:
        if out and out[-1].symbol == l.symbol and out[-1].exp == -l.exp:
            out.pop()
        else:
            out.append(l)
    return tuple(out)


def free_reduce(w) -> Word:
    w = as_word(w)
    return Word(reduce_letters(w.letters), w.alphabet)


def product(*words) -> Word:
    """Freely reduced product of the given words."""
    out = Word()
    for w in words:
        out = out * as_word(w)
    return free_reduce(out)


def commutator(a, b) -> Word:
    a, b = as_word(a), as_word(b)
    return product(a, b, a.inverse(), b.inverse())


def cyclic_reduce(w) -> tuple:
    """Return ``(conjugator, core)`` with ``w = conjugator * core * conjugator^-1``."""
    w = free_reduce(w)
    ls = w.letters
    i, j = 0, len(ls) - 1
    while i < j and ls[i] == ls[j].inverse():
        i += 1
        j -= 1
    return Word(ls[:i], w.alphabet), Word(ls[i:j + 1], w.alphabet)


def _letter_key(alphabet: Alphabet | None):
    if alphabet is None:
        return lambda l: (symbol_key(l.symbol), 0 if l.exp == 1 else 1)
    return lambda l: (alphabet.index(l.symbol), 0 if l.exp == 1 else 1)


def word_key(w: Word, alphabet: Alphabet | None = None):
    """Total order on words: by length, then lexicographically with +1 < -1."""
    key = _letter_key(alphabet if alphabet is not None else w.alphabet)
    return (len(w), tuple(key(l) for l in w.letters))


def rotations(letters: tuple):
    for i in range(len(letters) or 1):
        yield letters[i:] + letters[:i]


@dataclass(frozen=True)
class CyclicWord:
    """Canonical representative of a conjugacy class in a free group."""

    representative: Word

    def __str__(self) -> str:
        return str(self.representative)

    def __len__(self) -> int:
        return len(self.representative)


def least_rotation(w: Word) -> tuple:
    """Return ``(offset, rotated)`` for the least rotation of ``w``."""
    key = _letter_key(w.alphabet)
    ls = w.letters
    if not ls:
        return 0, w
    keyed = [key(l) for l in ls]
    best = min(range(len(ls)), key=lambda i: keyed[i:] + keyed[:i])
    return best, Word(ls[best:] + ls[:best], w.alphabet)


def cyclic_normal_form(w) -> CyclicWord:
    _, core = cyclic_reduce(w)
    return CyclicWord(least_rotation(core)[1])


def is_conjugate_free(u, v) -> bool:
    return cyclic_normal_form(u) == cyclic_normal_form(v)


def conjugator_free(u, v) -> Word | None:
    """Some ``g`` with ``u = g v g^-1`` in the free group, or ``None``."""
    gu, cu = cyclic_reduce(u)
    gv, cv = cyclic_reduce(v)
    if len(cu) != len(cv):
        return None
    n = len(cu)
    for k in range(n or 1):
        if cu.letters[k:] + cu.letters[:k] == cv.letters:
            # cv = p^-1 cu p with p = cu[:k]
            p = Word(cu.letters[:k])
            return product(gu, p, gv.inverse())
    return None
