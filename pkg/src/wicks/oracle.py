"""Group backends: equality, minimal length, balls, bounded conjugacy and the
hyperbolicity constants used by the genus bounds.

Two backends are provided.  :class:`FreeGroupOracle` is exact (delta = 0).
:class:`FiniteGroupOracle` works on an explicit finite group given by
permutation generators or a multiplication table; geodesics come from a
breadth-first search of the Cayley graph and delta is computed exactly from
the thin-triangle condition.
"""
from __future__ import annotations

import json
import math
import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct

import numpy as np

from .words import (Alphabet, Letter, Word, as_word, conjugator_free, is_reduced,
                    reduce_letters, symbol_key)


class BudgetExceeded(Exception):
    """A search needed more work than its budget allows; the answer is unknown."""


def K(n) -> int:
    n = Fraction(n)
    if n == 0:
        return 0
    if n == Fraction(1, 2):
        return 2
    if n < 1 or (2 * n).denominator != 1:
        raise ValueError(f"K is defined on 0, 1/2 and half-integers >= 1, not {n}")
    return int(12 * n - 6)


@dataclass(frozen=True)
class Constants:
    delta: Fraction
    M: int
    K: int
    l: float

    @property
    def piece_bound(self) -> float:
        """12l + M + 4: the bound on each label of a cancellation-free match."""
        return 12 * self.l + self.M + 4

    def conjugator_bound_short(self, h_len: int) -> float:
        """|h|/2 + 6l + 3M/2 + 2 delta + 7/2."""
        return h_len / 2 + 6 * self.l + 1.5 * self.M + 2 * float(self.delta) + 3.5

    def conjugator_bound_ext(self, h_len: int) -> float:
        """|h|/2 + 2 delta."""
        return h_len / 2 + 2 * float(self.delta)


def _floor(x: float) -> int:
    # guard against 4.999999 style float noise
    return int(math.floor(x + 1e-9))


class GroupOracle:
    """Common interface.  Elements are represented by hashable keys."""

    is_free = False
    generators: Alphabet
    delta: Fraction

    # element arithmetic -------------------------------------------------
    def identity(self):
        raise NotImplementedError

    def evaluate(self, w):
        raise NotImplementedError

    def mul(self, x, y):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def key_length(self, x) -> int:
        raise NotImplementedError

    def representative(self, x) -> Word:
        raise NotImplementedError

    def ball_keys(self, k: int) -> list:
        raise NotImplementedError

    # public operations --------------------------------------------------
    def are_equal(self, u, v) -> bool:
        return self.evaluate(as_word(u)) == self.evaluate(as_word(v))

    def minimal_length(self, w) -> int:
        return self.key_length(self.evaluate(as_word(w)))

    def is_minimal(self, w) -> bool:
        w = as_word(w)
        return len(w) == self.minimal_length(w)

    def ball(self, k: int) -> list:
        return [self.representative(x) for x in self.ball_keys(k)]

    def constants(self, n) -> Constants:
        n = Fraction(n)
        if n < 0:
            raise ValueError("n must be non-negative")
        k = K(n)
        M = len(self.ball_keys(_floor(4 * float(self.delta))))
        if self.delta == 0 or k == 0:
            l = 0.0
        else:
            l = float(self.delta) * (math.log2(k) + 1)
        return Constants(self.delta, M, k, l)

    def conjugator_bound(self, u, v) -> int:
        """|w| <= (|u| + |v|)/2 + M + 1 for minimal u, v."""
        M = len(self.ball_keys(_floor(4 * float(self.delta))))
        return _floor((len(as_word(u)) + len(as_word(v))) / 2 + M + 1)

    def are_conjugate(self, u, v, bound: int | None = None) -> Word | None:
        """A witness w with u = w v w^-1, |w| <= bound, or None."""
        raise NotImplementedError

    def conjugates_within(self, h, bound: int):
        """Yield ``(R, F)`` with ``h = R F R^-1`` and ``|R| <= bound``, where F
        runs over the candidates a form search has to consider."""
        raise NotImplementedError

    # refutation hooks used to turn an unfinished search into a definite no
    def refutes_commutator(self, h) -> bool:
        return False

    def refutes_square(self, h) -> bool:
        return False


class FreeGroupOracle(GroupOracle):
    is_free = True

    def __init__(self, symbols):
        self.generators = symbols if isinstance(symbols, Alphabet) else Alphabet(symbols)
        self.delta = Fraction(0)
        self._letters = [Letter(s, e) for s in self.generators for e in (1, -1)]
        self._balls: dict = {0: [()]}

    def __repr__(self) -> str:
        return f"FreeGroupOracle({','.join(self.generators)})"

    def identity(self):
        return ()

    def evaluate(self, w):
        w = as_word(w)
        for l in w.letters:
            if l.symbol not in self.generators:
                raise ValueError(f"{l.symbol!r} is not a generator of {self!r}")
        return reduce_letters(w.letters)

    def mul(self, x, y):
        i = 0
        n = min(len(x), len(y))
        while i < n and x[len(x) - 1 - i] == y[i].inverse():
            i += 1
        return x[:len(x) - i] + y[i:]

    def inv(self, x):
        return tuple(l.inverse() for l in reversed(x))

    def key_length(self, x) -> int:
        return len(x)

    def representative(self, x) -> Word:
        return Word(x)

    def ball_keys(self, k: int) -> list:
        if k < 0:
            return []
        top = max(self._balls)
        while top < k:
            shell = [w for w in self._balls[top] if len(w) == top]
            new = list(self._balls[top])
            for w in shell:
                for l in self._letters:
                    if not w or w[-1] != l.inverse():
                        new.append(w + (l,))
            top += 1
            self._balls[top] = new
        return self._balls[k]

    def are_conjugate(self, u, v, bound=None):
        from .words import cyclic_reduce

        u, v = as_word(u), as_word(v)
        g = conjugator_free(u, v)
        if g is None:
            return None
        # shortest over the rotations that realise the conjugacy
        gu, cu = cyclic_reduce(u)
        gv, cv = cyclic_reduce(v)
        best = g
        m = len(cu)
        for k in range(m):
            if cu.letters[k:] + cu.letters[:k] == cv.letters:
                for p in (Word(cu.letters[:k]), Word(cu.letters[k:]).inverse()):
                    cand = Word(reduce_letters((gu * p * gv.inverse()).letters))
                    if len(cand) < len(best):
                        best = cand
        if bound is not None and len(best) > bound:
            return None
        return best

    def conjugates_within(self, h, bound):
        """Rotations of the cyclic core of h, with the shorter of the two conjugators."""
        from .words import cyclic_reduce

        g, core = cyclic_reduce(h)
        m = len(core)
        seen = set()
        for k in range(m or 1):
            t = core.letters[k:] + core.letters[:k]
            if t in seen:
                continue
            seen.add(t)
            options = [Word(core.letters[:k]), Word(core.letters[k:]).inverse()]
            R = min((Word(reduce_letters((g * p).letters)) for p in options), key=len)
            if len(R) <= bound:
                yield R, Word(t)

    def refutes_commutator(self, h) -> bool:
        from .detect import is_commutator_free

        return is_commutator_free(h) is None

    def refutes_square(self, h) -> bool:
        from .detect import is_square_free

        return is_square_free(h) is None


# ----------------------------------------------------------------------------
# finite groups

_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_permutation(text: str, degree: int | None = None) -> tuple:
    """Cycle notation over points 1..n, e.g. ``"(1 2)(3 4 5)"``; ``"()"`` is the identity."""
    cycles = []
    for body in _CYCLE.findall(text):
        pts = [int(p) for p in re.split(r"[\s,]+", body.strip()) if p]
        cycles.append(pts)
    if not cycles and text.strip() not in ("", "()"):
        raise ValueError(f"bad permutation {text!r}")
    n = max([p for c in cycles for p in c] + [degree or 0])
    perm = list(range(n))
    for c in cycles:
        for a, b in zip(c, c[1:] + c[:1]):
            perm[a - 1] = b - 1
    return tuple(perm)


class FiniteGroupOracle(GroupOracle):
    """A finite group with a chosen generating set; element 0 is the identity."""

    MAX_ORDER = 200
    MAX_GEODESIC_WORK = 5_000_000

    def __init__(self, table, generators: dict, name: str = "finite"):
        self.table = np.asarray(table, dtype=np.int64)
        N = self.table.shape[0]
        if self.table.shape != (N, N):
            raise ValueError("multiplication table must be square")
        if N > self.MAX_ORDER:
            raise BudgetExceeded(f"group order {N} exceeds {self.MAX_ORDER}")
        if not np.array_equal(self.table[0], np.arange(N)) or not np.array_equal(self.table[:, 0], np.arange(N)):
            raise ValueError("element 0 must be the identity")
        self.order = N
        self.name = name
        syms = sorted(generators, key=symbol_key)
        self.generators = Alphabet(syms)
        self.gen_elem = {s: int(generators[s]) for s in syms}
        self.inverse = np.zeros(N, dtype=np.int64)
        for x in range(N):
            self.inverse[x] = int(np.nonzero(self.table[x] == 0)[0][0])
        self.letter_elem = {}
        for s in syms:
            self.letter_elem[Letter(s, 1)] = self.gen_elem[s]
            self.letter_elem[Letter(s, -1)] = int(self.inverse[self.gen_elem[s]])
        self._letters = [Letter(s, e) for s in syms for e in (1, -1)]
        self._bfs()
        self.delta = Fraction(self._compute_delta())
        self._form_cache: dict = {}

    def __repr__(self) -> str:
        return f"FiniteGroupOracle({self.name}, order={self.order})"

    @classmethod
    def from_permutations(cls, gens: dict, name: str = "perm"):
        perms = {s: parse_permutation(p) for s, p in gens.items()}
        n = max(len(p) for p in perms.values())
        perms = {s: p + tuple(range(len(p), n)) for s, p in perms.items()}
        ident = tuple(range(n))
        elems = [ident]
        index = {ident: 0}
        queue = deque([ident])
        # right multiplication by generators: (x*g)(i) = g(x(i)) acting on the left of points
        while queue:
            x = queue.popleft()
            for g in perms.values():
                for y in (tuple(g[x[i]] for i in range(n)),):
                    if y not in index:
                        index[y] = len(elems)
                        elems.append(y)
                        queue.append(y)
            if len(elems) > cls.MAX_ORDER:
                raise BudgetExceeded(f"group order exceeds {cls.MAX_ORDER}")
        N = len(elems)
        table = np.zeros((N, N), dtype=np.int64)
        for i, x in enumerate(elems):
            for j, y in enumerate(elems):
                # x then y: apply x first
                table[i, j] = index[tuple(y[x[k]] for k in range(n))]
        return cls(table, {s: index[p] for s, p in perms.items()}, name)

    @classmethod
    def cyclic(cls, order: int, symbol: str = "a"):
        table = [[(i + j) % order for j in range(order)] for i in range(order)]
        return cls(table, {symbol: 1 % order}, f"C{order}")

    @classmethod
    def from_file(cls, path: str):
        """JSON with either ``{"permutations": {"a": "(1 2)", ...}}`` or
        ``{"table": [[...], ...], "generators": {"a": 1, ...}}``."""
        with open(path) as fh:
            data = json.load(fh)
        name = data.get("name", path)
        if "permutations" in data:
            return cls.from_permutations(data["permutations"], name)
        if "table" in data:
            return cls(data["table"], data["generators"], name)
        raise ValueError(f"{path}: need 'permutations' or 'table'")

    # Cayley graph -------------------------------------------------------
    def _bfs(self):
        N = self.order
        dist = [-1] * N
        rep: list = [None] * N
        dist[0] = 0
        rep[0] = ()
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for l in self._letters:
                y = int(self.table[x, self.letter_elem[l]])
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    rep[y] = rep[x] + (l,)
                    queue.append(y)
        if min(dist) < 0:
            raise ValueError("generators do not generate the group")
        self.dist = np.array(dist, dtype=np.int64)
        self.rep = rep
        self.diameter = int(self.dist.max())

    def _compute_delta(self) -> int:
        """Largest |w2 z1| over minimal w = w1 w2, z = z1 z2 with
        |w2| = |z1| <= (|w| + |z| - |wz|) / 2."""
        N, T, dist = self.order, self.table, self.dist
        letters = [(l, self.letter_elem[l]) for l in self._letters]
        order = sorted(range(N), key=lambda x: dist[x])
        # suffix sets S[g][k] and prefix sets P[g][k] over all geodesic words for g
        S = [None] * N
        P = [None] * N
        work = 0
        for g in order:
            d = int(dist[g])
            S[g] = [set() for _ in range(d + 1)]
            P[g] = [set() for _ in range(d + 1)]
            S[g][0].add(0)
            P[g][0].add(0)
            for _, x in letters:
                pred = int(T[g, self.inverse[x]])  # g = pred * x
                if dist[pred] == d - 1:
                    for k in range(1, d + 1):
                        S[g][k].update(int(T[s, x]) for s in S[pred][k - 1])
                succ = int(T[self.inverse[x], g])  # g = x * succ
                if dist[succ] == d - 1:
                    for k in range(1, d + 1):
                        P[g][k].update(int(T[x, p]) for p in P[succ][k - 1])
                work += d
        delta = 0
        for g in range(N):
            for h in range(N):
                kmax = (int(dist[g]) + int(dist[h]) - int(dist[T[g, h]])) // 2
                for k in range(1, kmax + 1):
                    Sg, Ph = S[g][k], P[h][k]
                    work += len(Sg) * len(Ph)
                    if work > self.MAX_GEODESIC_WORK:
                        raise BudgetExceeded("thin-triangle check exceeds budget")
                    for s in Sg:
                        row = T[s]
                        for p in Ph:
                            v = int(dist[row[p]])
                            if v > delta:
                                delta = v
        return delta

    # element arithmetic -------------------------------------------------
    def identity(self):
        return 0

    def evaluate(self, w):
        x = 0
        for l in as_word(w).letters:
            try:
                x = int(self.table[x, self.letter_elem[l]])
            except KeyError:
                raise ValueError(f"{l.symbol!r} is not a generator of {self!r}") from None
        return x

    def mul(self, x, y):
        return int(self.table[x, y])

    def inv(self, x):
        return int(self.inverse[x])

    def key_length(self, x) -> int:
        return int(self.dist[x])

    def representative(self, x) -> Word:
        return Word(self.rep[x])

    def ball_keys(self, k: int) -> list:
        return sorted((x for x in range(self.order) if self.dist[x] <= k), key=lambda x: (self.dist[x], x))

    def are_conjugate(self, u, v, bound=None):
        if bound is None:
            bound = self.conjugator_bound(u, v)
        x, y = self.evaluate(u), self.evaluate(v)
        for w in self.ball_keys(bound):
            if self.mul(self.mul(w, y), self.inv(w)) == x:
                return self.representative(w)
        return None

    def conjugates_within(self, h, bound):
        x = self.evaluate(h)
        seen = set()
        for R in self.ball_keys(bound):
            F = self.mul(self.mul(self.inv(R), x), R)
            if F not in seen:
                seen.add(F)
                yield self.representative(R), self.representative(F)

    def conjugacy_classes(self) -> list:
        N, T, inv = self.order, self.table, self.inverse
        seen = [-1] * N
        classes = []
        for x in range(N):
            if seen[x] >= 0:
                continue
            cls_ = sorted({int(T[T[g, x], inv[g]]) for g in range(N)})
            for y in cls_:
                seen[y] = len(classes)
            classes.append(cls_)
        self._class_of = seen
        return classes

    def class_of(self, x: int) -> int:
        if not hasattr(self, "_class_of"):
            self.conjugacy_classes()
        return self._class_of[x]


def parse_group(spec: str) -> GroupOracle:
    """``free:a,b`` or ``file:PATH`` (see :meth:`FiniteGroupOracle.from_file`)."""
    kind, _, arg = spec.partition(":")
    if kind == "free":
        return FreeGroupOracle([s for s in arg.split(",") if s])
    if kind == "file":
        return FiniteGroupOracle.from_file(arg)
    raise ValueError(f"unknown group spec {spec!r}")
