import itertools
import time
from pathlib import Path

import pytest

from wicks.words import Letter, Word

DATA = Path(__file__).parent / "data"

# criterion number -> (title, ok, seconds, limit); filled by the acceptance suite
ACCEPTANCE: dict = {}


class Criterion:
    def __init__(self, number: int, title: str, limit: float):
        self.number, self.title, self.limit = number, title, limit
        self.t0 = time.perf_counter()

    def finish(self, ok: bool) -> bool:
        dt = time.perf_counter() - self.t0
        ok = bool(ok) and dt < self.limit
        ACCEPTANCE[self.number] = (self.title, ok, dt, self.limit)
        print(format_line(self.number))
        return ok


def format_line(n: int) -> str:
    title, ok, dt, limit = ACCEPTANCE[n]
    return f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title}  ({dt:.1f}s, limit {limit:.0f}s)"


@pytest.fixture
def criterion():
    return Criterion


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(format_line(n))


def arrangements(k: int):
    """Symbol sequences using each of 0..k-1 exactly twice, first appearances in order."""
    def rec(seq, counts, nxt):
        if len(seq) == 2 * k:
            yield tuple(seq)
            return
        for s in range(nxt):
            if counts[s] < 2:
                counts[s] += 1
                seq.append(s)
                yield from rec(seq, counts, nxt)
                seq.pop()
                counts[s] -= 1
        if nxt < k:
            counts[nxt] += 1
            seq.append(nxt)
            yield from rec(seq, counts, nxt + 1)
            seq.pop()
            counts[nxt] -= 1
    yield from rec([], [0] * k, 0)


def quadratic_words(max_letters: int, symbols: str = "abcd"):
    """Every quadratic word on 1..max_letters letters, up to renaming."""
    for k in range(1, max_letters + 1):
        for arr in arrangements(k):
            for exps in itertools.product((1, -1), repeat=2 * k):
                yield Word(tuple(Letter(symbols[s], e) for s, e in zip(arr, exps)))


def word_strategy(symbols: str = "ab", max_size: int = 12):
    """Hypothesis strategy for (not necessarily reduced) words."""
    from hypothesis import strategies as st

    letter = st.builds(Letter, st.sampled_from(symbols), st.sampled_from((1, -1)))
    return st.lists(letter, max_size=max_size).map(lambda ls: Word(tuple(ls)))


def naive_reduce(letters) -> tuple:
    """Reference reduction: delete adjacent inverse pairs until none remain."""
    ls = list(letters)
    changed = True
    while changed:
        changed = False
        for i in range(len(ls) - 1):
            if ls[i].symbol == ls[i + 1].symbol and ls[i].exp == -ls[i + 1].exp:
                del ls[i:i + 2]
                changed = True
                break
    return tuple(ls)


def quadratic_strategy(max_letters: int = 5):
    """Hypothesis strategy for random quadratic words on up to max_letters letters."""
    from hypothesis import strategies as st

    @st.composite
    def build(draw):
        k = draw(st.integers(1, max_letters))
        syms = [chr(ord("a") + i) for i in range(k)]
        slots = draw(st.permutations(syms * 2))
        exps = draw(st.lists(st.sampled_from((1, -1)), min_size=2 * k, max_size=2 * k))
        return Word(tuple(Letter(s, e) for s, e in zip(slots, exps)))

    return build()
