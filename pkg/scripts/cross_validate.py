"""Cross-check the exact free-group answers against the bounded oracle
searches and the brute-force equation solver."""
import argparse
import time
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from wicks.detect import (brute_force_genus, check_commutator_verdict, genus_minus_free, genus_plus_free,
                          is_commutator_free, is_commutator_oracle)
from wicks.oracle import FreeGroupOracle


@dataclass
class Config:
    oracle_len: int = 8  # words checked against the bounded form search
    brute_len: int = 6  # words checked against brute force
    radius: int = 4  # substitution ball radius for brute force


def oracle_vs_exact(F, cfg: Config) -> Counter:
    tally = Counter()
    for w in F.ball(cfg.oracle_len):
        if len(w) == 0 or not w.is_cyclically_reduced():
            continue
        v = is_commutator_oracle(w, F)
        exact = is_commutator_free(w) is not None
        agree = v.status != "indeterminate" and bool(v) == exact and (not v or check_commutator_verdict(w, v, F))
        tally[(v.status, f"form {v.form}" if v else "-", "agree" if agree else "DISAGREE")] += 1
    return tally


def brute_vs_exact(F, cfg: Config) -> Counter:
    tally = Counter()
    for w in F.ball(cfg.brute_len):
        if not w.is_cyclically_reduced():
            continue
        gp, gm = genus_plus_free(w, 2), genus_minus_free(w, 1)
        for n in (1, 2):
            ok = brute_force_genus(w, n, True, cfg.radius, F) == (gp is not None and gp <= n)
            tally[("orientable", n, ok)] += 1
        for n in (Fraction(1, 2), Fraction(1)):
            ok = brute_force_genus(w, n, False, cfg.radius, F) == (gm is not None and gm <= n)
            tally[("non-orientable", str(n), ok)] += 1
    return tally


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--oracle-len", type=int, default=Config.oracle_len)
    ap.add_argument("--brute-len", type=int, default=Config.brute_len)
    ap.add_argument("--radius", type=int, default=Config.radius)
    a = ap.parse_args()
    cfg = Config(a.oracle_len, a.brute_len, a.radius)
    F = FreeGroupOracle("ab")
    t = time.perf_counter()
    for key, count in sorted(oracle_vs_exact(F, cfg).items(), key=str):
        print("oracle", *key, count)
    print(f"  {time.perf_counter() - t:.1f}s")
    t = time.perf_counter()
    for key, count in sorted(brute_vs_exact(F, cfg).items(), key=str):
        print("brute ", *key, count)
    print(f"  {time.perf_counter() - t:.1f}s")


if __name__ == "__main__":
    main()
