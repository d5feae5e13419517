"""Extensions of the surface graph of a quadratic word.

``double_edges`` splits every edge in two and ``insert_cycles`` swaps each
vertex for a cycle of its degree.  Group-word labels on the result are
checked by ``validate_labelling``.  An :class:`Extension` bundles the
labelled graph with a partition of the vertices into classes, each carrying
a declared genus.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .quadratic import concat, is_quadratic, occurrences, signature
from .surface import SurfaceGraph, VertexLink, bookkeeping, build_graph, vertex_link
from .words import Letter, Word, as_word, free_reduce, symbol_key

IOTA, TAU = "iota", "tau"


def doubled_names(symbol: str) -> tuple:
    return symbol + "1", symbol + "2"


@dataclass
class DoubledGraph:
    base: SurfaceGraph
    pairs: dict  # x -> (x1, x2)
    hamiltonian: Word  # U'
    links: dict  # vertex -> VertexLink used for the bookkeeping
    data: dict  # vertex -> IncidenceData

    @property
    def word(self) -> Word:
        return self.base.word


def _double_word(U: Word, pairs: dict) -> Word:
    sig = signature(U)
    seen: set = set()
    out = []
    for l in U.letters:
        x1, x2 = pairs[l.symbol]
        if sig.is_alternating(l.symbol):
            out.append(Letter(x1, 1) if l.exp == 1 else Letter(x2, -1))
        else:
            out.append(Letter(x1 if l.symbol not in seen else x2, l.exp))
        seen.add(l.symbol)
    return Word(tuple(out))


def double_edges(U, links: dict | None = None) -> DoubledGraph:
    """Split every edge x into x1, x2.  ``links`` optionally maps a vertex to ``(start, orientation)``."""
    U = concat(U)
    if len(U) == 0:
        raise ValueError("cannot double the empty word")
    if not is_quadratic(U):
        raise ValueError(f"{U} is not quadratic")
    supp = U.support()
    pairs = {}
    taken = set(supp)
    for x in sorted(supp, key=symbol_key):
        x1, x2 = doubled_names(x)
        if x1 in taken or x2 in taken:
            raise ValueError(f"doubled names for {x} collide with existing symbols")
        taken.update((x1, x2))
        pairs[x] = (x1, x2)
    g = build_graph(U)
    chosen = {}
    for v in g.vertices:
        start, orientation = (links or {}).get(v, (None, 1))
        chosen[v] = vertex_link(g, v, orientation, start)
    data = {v: bookkeeping(U, link) for v, link in chosen.items()}
    return DoubledGraph(g, pairs, _double_word(U, pairs), chosen, data)


def link_violations(Up: Word, pairs: dict, link: VertexLink, data) -> list:
    """Corners of one vertex where U' does not read
    (e_{q,r_q}^eps_q e_{q+1,l_{q+1}}^-eps_{q+1})^O_q."""
    Up = Up.letters
    n = len(Up)
    deg = link.degree
    bad = []
    for q in range(deg):
        q1 = (q + 1) % deg
        e, f = link.ends[q], link.ends[q1]
        a = Letter(pairs[e.symbol][data.r[q] - 1], e.exp)
        b = Letter(pairs[f.symbol][data.l[q1] - 1], -f.exp)
        k, O = link.steps[q]
        expected = (a, b) if O == 1 else (b.inverse(), a.inverse())
        found = (Up[k], Up[(k + 1) % n])
        if expected != found:
            bad.append((link.vertex, q, expected, found))
    return bad


def vind_violations(d: DoubledGraph) -> list:
    """All ``(vertex, q, expected, found)`` failures of the subword property;
    empty means it holds at every vertex."""
    bad = []
    for v, link in d.links.items():
        bad.extend(link_violations(d.hamiltonian, d.pairs, link, d.data[v]))
    return bad


@dataclass
class ExtendedGraph:
    doubled: DoubledGraph
    cycles: dict  # vertex -> tuple of cycle symbols c_1..c_d
    attachment: dict  # (doubled symbol, IOTA|TAU) -> (vertex, cycle index)

    @property
    def hamiltonian(self) -> Word:
        return self.doubled.hamiltonian

    @property
    def vertices(self) -> list:
        return sorted(self.cycles)

    def edge_symbols(self) -> list:
        out = [s for p in self.doubled.pairs.values() for s in p]
        for v in self.vertices:
            out.extend(self.cycles[v])
        return out

    def cycle_word(self, v: int) -> Word:
        return Word(tuple(Letter(c, 1) for c in self.cycles[v]))

    def relations(self) -> dict:
        """x -> (left, right) cycle letters with psi(x1) = psi(left) psi(x2) psi(right)."""
        out = {}
        for x, (x1, x2) in self.doubled.pairs.items():
            sides = []
            for end, exp in ((IOTA, -1), (TAU, 1)):
                v = self.doubled.base.vertex_of_end(Letter(x, exp))
                link = self.doubled.links[v]
                data = self.doubled.data[v]
                q = link.ends.index(Letter(x, exp))
                c = self.cycles[v][q]
                if end == IOTA:
                    # path from iota(x1) to iota(x2)
                    sides.append(Letter(c, 1 if data.l[q] == 1 else -1))
                else:
                    # path from tau(x2) to tau(x1)
                    sides.append(Letter(c, 1 if data.l[q] == 2 else -1))
            out[x] = tuple(sides)
        return out


def fresh_symbols(taken, count: int, letters: str = "pqrstuvwxyz"):
    """Deterministic supply of symbols not in ``taken``."""
    out = []
    taken = set(taken)
    k = 0
    while len(out) < count:
        for ch in letters:
            s = ch if k == 0 else f"{ch}{k}"
            if s not in taken:
                out.append(s)
                taken.add(s)
                if len(out) == count:
                    break
        k += 1
    return out


def insert_cycles(d: DoubledGraph, cycle_lengths: dict | None = None, names: dict | None = None) -> ExtendedGraph:
    """Replace each vertex v by a cycle c_1..c_d, d = deg(v)."""
    g = d.base
    taken = set(d.word.support()) | set(d.hamiltonian.support())
    cycles = {}
    for v in g.vertices:
        deg = g.degree(v)
        if cycle_lengths is not None and cycle_lengths.get(v, deg) != deg:
            raise ValueError(f"vertex {v} has degree {deg}, not {cycle_lengths[v]}")
        if names and v in names:
            syms = tuple(names[v])
            if len(syms) != deg:
                raise ValueError(f"vertex {v} needs {deg} cycle symbols, got {len(syms)}")
            for s in syms:
                if s in taken:
                    raise ValueError(f"cycle symbol {s!r} is already in use")
        else:
            syms = tuple(fresh_symbols(taken, deg))
        taken.update(syms)
        cycles[v] = syms

    attachment = {}
    for v, link in d.links.items():
        data = d.data[v]
        deg = link.degree
        for q, e in enumerate(link.ends):
            end = TAU if e.exp == 1 else IOTA
            x1x2 = d.pairs[e.symbol]
            attachment[(x1x2[data.l[q] - 1], end)] = (v, q)
            attachment[(x1x2[data.r[q] - 1], end)] = (v, (q + 1) % deg)
    ext = ExtendedGraph(d, cycles, attachment)
    _check_hamiltonian(ext)
    return ext


def _check_hamiltonian(ext: ExtendedGraph):
    """U' must be a closed walk: each letter ends at the cycle vertex where the
    next one starts, and it visits every cycle vertex exactly once."""
    Up = ext.hamiltonian.letters
    n = len(Up)

    def ends(l):
        a, b = ext.attachment[(l.symbol, IOTA)], ext.attachment[(l.symbol, TAU)]
        return (a, b) if l.exp == 1 else (b, a)

    visited = []
    for k in range(n):
        _, arrive = ends(Up[k])
        leave, _ = ends(Up[(k + 1) % n])
        if arrive != leave:
            raise AssertionError(f"U' is not a closed walk at position {k}")
        visited.append(arrive)
    total = sum(len(c) for c in ext.cycles.values())
    if len(set(visited)) != total or len(visited) != total:
        raise AssertionError("U' is not Hamiltonian in the extended graph")


def _image(psi: dict, w: Word) -> Word:
    out = Word()
    for l in w.letters:
        img = psi[l.symbol]
        out = out * (img if l.exp == 1 else img.inverse())
    return out


@dataclass
class CheckResult:
    name: str
    ok: bool | None  # None = indeterminate
    detail: str = ""


def labelling_report(ext: ExtendedGraph, psi: dict, oracle) -> list:
    missing = [s for s in ext.edge_symbols() if s not in psi]
    if missing:
        raise KeyError(f"labelling misses {', '.join(missing)}")
    psi = {s: as_word(w) for s, w in psi.items()}
    out = []
    bad = [s for s in ext.edge_symbols() if not oracle.is_minimal(psi[s])]
    out.append(CheckResult("minimal images", not bad, ", ".join(bad)))
    bad = []
    for x, (left, right) in ext.relations().items():
        x1, x2 = ext.doubled.pairs[x]
        rhs = _image(psi, Word((left, Letter(x2, 1), right)))
        if not oracle.are_equal(psi[x1], rhs):
            bad.append(f"{x1} != {left}{x2}{right}")
    out.append(CheckResult("edge relations", not bad, "; ".join(bad)))
    F = _image(psi, ext.hamiltonian)
    out.append(CheckResult("cyclically reduced as written", F.is_cyclically_reduced(), str(F)))
    return out


def validate_labelling(ext: ExtendedGraph, psi: dict, oracle) -> bool:
    return all(c.ok for c in labelling_report(ext, psi, oracle))


def hamiltonian_label(ext, psi: dict | None = None) -> Word:
    """psi(U'), freely reduced."""
    if isinstance(ext, Extension):
        ext, psi = ext.graph, ext.labelling
    psi = {s: as_word(w) for s, w in psi.items()}
    return free_reduce(_image(psi, ext.hamiltonian))


@dataclass
class VertexClass:
    vertices: tuple
    genus: Fraction
    orientable: bool = True


@dataclass
class Extension:
    graph: ExtendedGraph
    labelling: dict
    partition: list = field(default_factory=list)

    @property
    def base_word(self) -> Word:
        return self.graph.doubled.word

    @property
    def genus(self) -> Fraction:
        return sum((c.genus for c in self.partition), Fraction(0))

    def cycle_label(self, v: int) -> Word:
        psi = {s: as_word(w) for s, w in self.labelling.items()}
        return free_reduce(_image(psi, self.graph.cycle_word(v)))

    def partition_ok(self) -> bool:
        seen = [v for c in self.partition for v in c.vertices]
        return sorted(seen) == self.graph.vertices

    def to_dict(self) -> dict:
        links = {str(v): {"start": str(l.start), "orientation": l.orientation}
                 for v, l in self.graph.doubled.links.items()}
        return {
            "base_word": str(self.base_word),
            "cycles": {str(v): list(c) for v, c in self.graph.cycles.items()},
            "labelling": {s: str(as_word(w)) for s, w in self.labelling.items()},
            "partition": [{"vertices": list(c.vertices), "genus": str(c.genus), "orientable": c.orientable}
                          for c in self.partition],
            "links": links,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Extension":
        U = as_word(data["base_word"])
        links = {}
        for v, spec in (data.get("links") or {}).items():
            start = spec.get("start")
            start = as_word(start).letters[0] if start else None
            links[int(v)] = (start, int(spec.get("orientation", 1)))
        d = double_edges(U, links)
        names = {int(v): tuple(c) for v, c in (data.get("cycles") or {}).items()}
        graph = insert_cycles(d, names=names)
        psi = {s: as_word(w) for s, w in data.get("labelling", {}).items()}
        partition = [VertexClass(tuple(int(v) for v in c["vertices"]), Fraction(str(c["genus"])),
                                 bool(c.get("orientable", True)))
                     for c in data.get("partition", [])]
        return cls(graph, psi, partition)

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def load_extension(path: str) -> Extension:
    with open(path) as fh:
        return Extension.from_dict(json.load(fh))


def extension_length(ext: Extension) -> int:
    """Sum of the lengths of the labels of the inserted cycles."""
    total = 0
    for v in ext.graph.vertices:
        for c in ext.graph.cycles[v]:
            total += len(as_word(ext.labelling[c]))
    return total


def check_joint_extension(ext: Extension, cls: VertexClass, oracle, radius: int = 2):
    """True/False, or None when the genus search ran out of budget."""
    from .detect import genus_tuple
    from .oracle import BudgetExceeded

    verts = tuple(cls.vertices)
    t = len(verts)
    if t == 0:
        return False
    target = Fraction(cls.genus) - t + 1
    if target < 0:
        return False
    if cls.orientable and target.denominator != 1:
        return False
    if (2 * target).denominator != 1:
        return False
    # clause (ii): a lone vertex of degree 1 or 2 needs positive genus unless U = A^{+-2}
    if t == 1:
        deg = ext.graph.doubled.base.degree(verts[0])
        U = ext.base_word
        square = len(U) == 2 and U.letters[0] == U.letters[1]
        if deg <= 2 and cls.genus < Fraction(1, 2) and not square:
            return False
    words = [ext.cycle_label(v) for v in verts]
    try:
        if not genus_tuple(words, target, cls.orientable, oracle, radius=radius):
            return False
        if target > 0:
            lower = target - (1 if cls.orientable else Fraction(1, 2))
            if lower >= 0 and genus_tuple(words, lower, cls.orientable, oracle, radius=radius):
                return False
    except BudgetExceeded:
        return None
    return True


def extension_report(ext: Extension, oracle, radius: int = 2) -> list:
    out = labelling_report(ext.graph, ext.labelling, oracle)
    out.append(CheckResult("partition covers vertices", ext.partition_ok()))
    for cls in ext.partition:
        ok = check_joint_extension(ext, cls, oracle, radius)
        out.append(CheckResult(f"class {list(cls.vertices)} genus {cls.genus}", ok))
    return out
