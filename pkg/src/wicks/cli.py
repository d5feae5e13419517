"""Command-line front end.  Exit status: 0 answered, 2 indeterminate, 1 error."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import detect
from .extension import extension_report, hamiltonian_label, load_extension
from .oracle import BudgetExceeded, FreeGroupOracle, parse_group
from .quadratic import is_orientable, signature, specialisations
from .surface import build_graph, link_table, vertex_link
from .wicks_enum import enumerate_wicks
from .words import Word, as_word, cyclic_normal_form, free_reduce

OK, ERROR, UNKNOWN = 0, 1, 2


def fmt_genus(n) -> str:
    return str(Fraction(n)) if n is not None else "none"


def parse_genus(text: str) -> Fraction:
    try:
        n = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad genus {text!r}") from None
    if n < 0 or (2 * n).denominator != 1:
        raise argparse.ArgumentTypeError("genus must be a non-negative half-integer")
    return n


def parse_word(text: str) -> Word:
    try:
        return as_word(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _oracle_for(args, *words):
    if args.group:
        return parse_group(args.group)
    syms = set()
    for w in words:
        syms |= as_word(w).support()
    return FreeGroupOracle(sorted(syms) or ["a"])


def _emit(args, doc: dict, lines):
    if args.json:
        print(json.dumps(doc, indent=2, default=str))
    else:
        for line in lines:
            print(line)


def _table_lines(rows) -> list:
    keys = [("e", "e_q"), ("eps", "eps_q"), ("o", "o(e_q)"), ("O", "O_q"),
            ("mu", "mu_q"), ("nu", "nu_q"), ("l", "l_q"), ("r", "r_q")]
    head = "q".ljust(8) + " ".join(f"{r['q']:>3}" for r in rows)
    out = [head]
    for k, label in keys:
        if k == "e":
            cells = [r["e"].upper() for r in rows]
        else:
            cells = [str(r[k]) for r in rows]
        out.append(label.ljust(8) + " ".join(f"{c:>3}" for c in cells))
    return out


def cmd_reduce(args):
    w = free_reduce(args.word)
    c = cyclic_normal_form(w)
    _emit(args, {"reduced": str(w), "cyclic_normal_form": str(c)}, [f"reduced: {w}", f"cyclic: {c}"])
    return OK


def cmd_conjugate(args):
    oracle = _oracle_for(args, args.u, args.v)
    g = oracle.are_conjugate(args.u, args.v)
    _emit(args, {"conjugate": g is not None, "witness": None if g is None else str(g)},
          [f"conjugate: u = w v w^-1 with w = {g}" if g is not None else "not conjugate"])
    return OK


def cmd_info(args):
    U = args.word
    sig = signature(U)
    g = build_graph(U)
    doc = {"word": str(U), "signature": {s: list(p) for s, p in sig.pairs.items()},
           "orientable": is_orientable(U), "genus": str(g.genus()),
           "vertices": g.num_vertices, "edges": g.num_edges, "links": {}}
    lines = [f"word: {U}", "signature: " + ", ".join(f"{s}=({a},{b}) o={sig.orientation(s)}"
                                                    for s, (a, b) in sorted(sig.pairs.items())),
             f"orientable: {doc['orientable']}", f"vertices: {g.num_vertices}  edges: {g.num_edges}  "
             f"genus: {g.genus()}"]
    for v in g.vertices:
        start = as_word(args.start).letters[0] if args.start and len(g.vertices) == 1 else None
        link = vertex_link(g, v, args.orientation, start)
        rows = link_table(U, link)
        doc["links"][str(v)] = rows
        lines.append("")
        lines.append(f"vertex {v} (degree {link.degree}, start {link.start})")
        lines.extend(_table_lines(rows))
    _emit(args, doc, lines)
    return OK


def cmd_wicks(args):
    n = args.genus
    orientable = args.orientable if args.orientable is not None else n.denominator == 1
    forms = enumerate_wicks(n, orientable, max_len=args.max_len)
    _emit(args, {"genus": str(n), "orientable": orientable, "forms": [str(f) for f in forms]},
          [str(f) for f in forms])
    return OK


def cmd_specialise(args):
    specs = specialisations(args.word)
    _emit(args, {"word": str(args.word), "specialisations": [str(s) for s in specs]},
          [str(s) for s in specs])
    return OK


def cmd_extend(args):
    ext = load_extension(args.spec)
    oracle = parse_group(args.group) if args.group else FreeGroupOracle(
        sorted(set().union(*(as_word(w).support() for w in ext.labelling.values())) or {"a"}))
    doc = {"base_word": str(ext.base_word), "hamiltonian": str(ext.graph.hamiltonian),
           "genus": str(ext.genus)}
    lines = [f"base word: {ext.base_word}", f"U': {ext.graph.hamiltonian}", f"genus: {ext.genus}"]
    status = OK
    if args.check:
        report = extension_report(ext, oracle, radius=args.max_ball)
        doc["checks"] = [{"name": c.name, "ok": c.ok} for c in report]
        lines += [f"{ {True: 'ok', False: 'FAIL', None: 'unknown'}[c.ok]:7s} {c.name}" for c in report]
        valid = all(c.ok for c in report)
        doc["valid"] = valid
        if valid:
            doc["F"] = str(hamiltonian_label(ext))
            lines.append(f"F = {doc['F']}")
        lines.append(f"valid: {valid}")
        if any(c.ok is None for c in report) and not any(c.ok is False for c in report):
            status = UNKNOWN
    _emit(args, doc, lines)
    return status


def _status_code(status: str) -> int:
    return UNKNOWN if status == detect.INDETERMINATE else OK


def cmd_detect(args):
    w = args.word
    oracle = _oracle_for(args, w)
    budget = detect.Budget(max_ball=args.max_ball, max_work=args.max_work)
    if args.kind == "two-squares":
        if not oracle.is_free:
            raise ValueError("two-squares detection needs a free group")
        found = detect.is_two_squares_free(w)
        doc = {"kind": args.kind, "status": "present" if found else "absent"}
        if found:
            doc["a"], doc["b"] = str(found[0]), str(found[1])
        _emit(args, doc, [f"a = {found[0]}", f"b = {found[1]}"] if found else ["absent"])
        return OK
    if oracle.is_free and args.kind == "commutator":
        found = detect.is_commutator_free(w)
        doc = {"kind": args.kind, "status": "present" if found else "absent"}
        if found:
            doc["a"], doc["b"] = str(found[0]), str(found[1])
        _emit(args, doc, [f"a = {found[0]}", f"b = {found[1]}"] if found else ["absent"])
        return OK
    search = detect.is_commutator_oracle if args.kind == "commutator" else detect.is_square_oracle
    v = search(w, oracle, budget)
    doc = {"kind": args.kind, **v.to_dict()}
    if v.status == detect.PRESENT:
        lines = [f"form {v.form}", f"R = {v.conjugator}", f"F = {v.F}"] + [f"{k} = {x}" for k, x in v.parts.items()]
    else:
        lines = [v.status + (f" ({v.note})" if v.note else "")]
    _emit(args, doc, lines)
    return _status_code(v.status)


def cmd_genus(args):
    w = args.word
    oracle = _oracle_for(args, w)
    orientable = args.orientable if args.orientable is not None else True
    if oracle.is_free:
        n = detect.genus_plus_free(w, int(args.max)) if orientable else detect.genus_minus_free(w, args.max)
    else:
        n = None
        step = Fraction(1) if orientable else Fraction(1, 2)
        k = Fraction(0)
        try:
            while k <= args.max:
                if detect.brute_force_genus(w, k, orientable, oracle.diameter, oracle):
                    n = k
                    break
                k += step
        except BudgetExceeded as exc:
            _emit(args, {"status": "indeterminate", "note": str(exc)}, [f"indeterminate ({exc})"])
            return UNKNOWN
    doc = {"word": str(w), "orientable": orientable, "max": str(args.max), "genus": None if n is None else str(n)}
    lines = [fmt_genus(n)]
    if args.emit_cert and n is not None and n > 0:
        status, cert = detect.search_genus(w, n, orientable, oracle, detect.Budget(max_ball=args.max_ball, max_work=args.max_work))
        if cert is not None:
            with open(args.emit_cert, "w") as fh:
                fh.write(cert.dumps())
            lines.append(f"certificate written to {args.emit_cert}")
        else:
            lines.append(f"no certificate ({status})")
        doc["certificate"] = status
    _emit(args, doc, lines)
    return OK


def cmd_verify(args):
    cert = detect.GenusCertificate.load(args.cert)
    if args.group:
        oracle = parse_group(args.group)
    else:
        labels = cert.labelling if cert.extension is None else cert.extension.labelling
        syms = set(args.word.support()) | set(cert.conjugator.support())
        for w in labels.values():
            syms |= as_word(w).support()
        oracle = FreeGroupOracle(sorted(syms) or ["a"])
    report = detect.verify_certificate(args.word, cert, oracle)
    _emit(args, {"valid": bool(report), "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail}
                                                   for c in report.checks]},
          report.lines() + [f"valid: {bool(report)}"])
    return UNKNOWN if report.indeterminate else OK


def cmd_oracle_test(args):
    oracle = parse_group(args.group) if args.group else FreeGroupOracle(["a", "b"])
    c = oracle.constants(1)
    ball = oracle.ball_keys(2)
    problems = []
    for x in ball:
        for y in ball:
            if oracle.key_length(oracle.mul(x, y)) > oracle.key_length(x) + oracle.key_length(y):
                problems.append("triangle inequality")
    for k in range(3):
        if not set(oracle.ball_keys(k)) <= set(oracle.ball_keys(k + 1)):
            problems.append("ball nesting")
    doc = {"oracle": repr(oracle), "delta": str(c.delta), "M": c.M, "K(1)": c.K, "l(1)": c.l,
           "ball sizes": [len(oracle.ball_keys(k)) for k in range(4)], "problems": sorted(set(problems))}
    lines = [f"{k}: {v}" for k, v in doc.items()]
    _emit(args, doc, lines)
    return ERROR if problems else OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wicks", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit one JSON document")
    common.add_argument("--group", help="free:a,b or file:PATH (default: free on the word's letters)")
    common.add_argument("--max-ball", type=int, default=3, help="radius cap for bounded searches (default 3)")
    common.add_argument("--max-len", type=int, default=None, help="length cap for enumerations")
    common.add_argument("--max-work", type=int, default=detect.Budget().max_work,
                        help="step cap for bounded searches before answering indeterminate")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("reduce", parents=[common], help="free and cyclic reduction")
    s.add_argument("word", type=parse_word)
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("conjugate", parents=[common], help="conjugacy witness")
    s.add_argument("u", type=parse_word)
    s.add_argument("v", type=parse_word)
    s.set_defaults(func=cmd_conjugate)

    s = sub.add_parser("info", parents=[common], help="signature, genus and link tables of a quadratic word")
    s.add_argument("word", type=parse_word)
    s.add_argument("--orientation", type=int, choices=(1, -1), default=1)
    s.add_argument("--start", help="starting link entry (single-vertex words only)")
    s.set_defaults(func=cmd_info)

    s = sub.add_parser("wicks", parents=[common], help="enumerate Wicks forms")
    s.add_argument("--genus", type=parse_genus, required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--orientable", dest="orientable", action="store_true", default=None)
    g.add_argument("--non-orientable", dest="orientable", action="store_false")
    s.set_defaults(func=cmd_wicks)

    s = sub.add_parser("specialise", parents=[common], help="list specialisations")
    s.add_argument("word", type=parse_word)
    s.set_defaults(func=cmd_specialise)

    s = sub.add_parser("extend", parents=[common], help="load and check an extension spec")
    s.add_argument("--spec", required=True)
    s.add_argument("--check", action="store_true")
    s.set_defaults(func=cmd_extend)

    s = sub.add_parser("detect", parents=[common], help="commutator or square detection")
    s.add_argument("kind", choices=("commutator", "square", "two-squares"))
    s.add_argument("word", type=parse_word)
    s.set_defaults(func=cmd_detect)

    s = sub.add_parser("genus", parents=[common], help="least genus up to a cap")
    s.add_argument("word", type=parse_word)
    s.add_argument("--max", type=parse_genus, required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--orientable", dest="orientable", action="store_true", default=None)
    g.add_argument("--non-orientable", dest="orientable", action="store_false")
    s.add_argument("--emit-cert", metavar="FILE")
    s.set_defaults(func=cmd_genus)

    s = sub.add_parser("verify", parents=[common], help="verify a genus certificate")
    s.add_argument("--cert", required=True)
    s.add_argument("word", type=parse_word)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("oracle-test", parents=[common], help="self-check a group backend")
    s.set_defaults(func=cmd_oracle_test)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return ERROR if exc.code else OK
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
