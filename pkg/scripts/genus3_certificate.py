"""Rebuild the genus-3 extension certificate used by the test suite.

Starts from U = abcCBA (genus 0) with cycle labels making one class of
genus 2 and one of genus 1, searches short edge labels that satisfy the
edge relations, then looks for an orientable genus-3 Wicks form that
specialises to U by random letter insertion.
"""
import argparse
import json
import random
from dataclasses import dataclass
from fractions import Fraction

from wicks.detect import GenusCertificate, verify_certificate
from wicks.extension import Extension, VertexClass, double_edges, hamiltonian_label, insert_cycles, validate_labelling
from wicks.quadratic import delete_letters, is_orientable
from wicks.oracle import FreeGroupOracle
from wicks.wicks_enum import canonical_code, is_wicks_form
from wicks.words import Letter, Word, product

CYCLES = {0: ["p"], 1: ["q", "r"], 2: ["s", "t"], 3: ["u"]}
CYCLE_LABELS = {"p": "x", "q": "xYX", "r": "Xy", "s": "x", "t": "y", "u": "XY"}


@dataclass
class Config:
    seed: int = 1
    trials: int = 200_000
    out: str | None = None


def best_labelling(F):
    graph = insert_cycles(double_edges("abcCBA"), names=CYCLES)
    rel = graph.relations()
    short = [w for w in F.ball(2) if len(w) > 0]
    best = None
    for A in short:
        for B in short:
            for C in short:
                psi = {k: Word.parse(v) for k, v in CYCLE_LABELS.items()}
                for x, w in zip("abc", (A, B, C)):
                    left, right = rel[x]
                    psi[x + "2"] = w
                    psi[x + "1"] = product(_img(psi, left), w, _img(psi, right))
                if all(len(psi[x + "1"]) for x in "abc") and validate_labelling(graph, psi, F):
                    h = hamiltonian_label(graph, psi)
                    if best is None or len(h) < len(best[1]):
                        best = (psi, h)
    return graph, best


def _img(psi, letter):
    w = psi[letter.symbol]
    return w if letter.exp == 1 else w.inverse()


def find_form(cfg: Config):
    rng = random.Random(cfg.seed)
    base = list(Word.parse("abcCBA").letters)
    best = None
    for _ in range(cfg.trials):
        w = base[:]
        extra = "defghijkl"[:rng.randint(3, 9)]
        for s in extra:
            w.insert(rng.randint(0, len(w)), Letter(s, 1))
            w.insert(rng.randint(0, len(w)), Letter(s, -1))
        W = Word(tuple(w))
        if is_orientable(W) and is_wicks_form(W, 3) and (best is None or len(W) < len(best[0])):
            best = (W, tuple(extra))
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--trials", type=int, default=Config.trials)
    ap.add_argument("--out", help="write the certificate JSON here")
    a = ap.parse_args()
    cfg = Config(a.seed, a.trials, a.out)

    F = FreeGroupOracle("xy")
    graph, (psi, h) = best_labelling(F)
    print("h =", h)
    part = [VertexClass((0, 1), Fraction(2)), VertexClass((2, 3), Fraction(1))]
    ext = Extension(graph, psi, part)
    W, deleted = find_form(cfg)
    assert canonical_code(delete_letters(W, deleted)) == canonical_code(Word.parse("abcCBA"))
    print("form", W, "deleting", "".join(deleted))
    cert = GenusCertificate(Fraction(3), True, W, Word(), specialisation=Word.parse("abcCBA"),
                            deleted=deleted, extension=ext)
    report = verify_certificate(h, cert, F)
    print("\n".join(report.lines()))
    print("valid:", bool(report))
    if cfg.out:
        with open(cfg.out, "w") as fh:
            json.dump({"word": str(h), **cert.to_dict()}, fh, indent=2)


if __name__ == "__main__":
    main()
