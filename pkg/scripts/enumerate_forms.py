"""Count Wicks forms by genus and orientability, with timings."""
import argparse
import time
from dataclasses import dataclass
from fractions import Fraction

from wicks.surface import build_graph
from wicks.wicks_enum import enumerate_wicks, max_length


@dataclass
class Config:
    max_genus: Fraction = Fraction(3, 2)
    max_len: int | None = None
    show: bool = False


def cases(cfg: Config):
    n = Fraction(1, 2)
    while n <= cfg.max_genus:
        if n.denominator == 1:
            yield n, True
        yield n, False
        n += Fraction(1, 2)


def run(cfg: Config) -> list:
    rows = []
    for n, orientable in cases(cfg):
        t = time.perf_counter()
        forms = enumerate_wicks(n, orientable, cfg.max_len)
        dt = time.perf_counter() - t
        lengths = sorted({len(f.word) for f in forms})
        min_deg = min((min(build_graph(f.word).degree(v) for v in build_graph(f.word).vertices) for f in forms),
                      default=None)
        rows.append((n, orientable, len(forms), lengths, min_deg, dt))
        print(f"genus {str(n):>4} {'orientable' if orientable else 'non-orientable':>15}: "
              f"{len(forms):4d} forms, lengths {lengths}, K(n) = {max_length(n)}, "
              f"min degree {min_deg}, {dt:.1f}s", flush=True)
        if cfg.show:
            for f in forms:
                print("   ", f)
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-genus", type=Fraction, default=Config.max_genus)
    ap.add_argument("--max-len", type=int, default=None, help="truncate each enumeration at this length")
    ap.add_argument("--show", action="store_true", help="print every form")
    a = ap.parse_args()
    run(Config(a.max_genus, a.max_len, a.show))


if __name__ == "__main__":
    main()
