"""The graph of a quadratic word on its glued surface.

Write U around the boundary of a disk and glue the two segments carrying
each letter, respecting direction.  Boundary points P_0..P_{n-1} (P_i is
the start of letter i) become the vertices after gluing; segment i runs
tail->head with tail = P_i when the letter has exponent +1.

A vertex's link is read off the corners of the disk.  Corner k sits at
P_{k+1}, between letter k (which ends there) and letter k+1 (which starts
there).  Link entries are edge ends: ``Letter(x, +1)`` is the end where x
arrives (v = head of x), ``Letter(x, -1)`` the end where x leaves.
Corner k joins the entry ``U[k]`` to the entry ``U[k+1]^-1``; traversing it
in that direction gives incidence +1, the other way -1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .quadratic import concat, is_quadratic, occurrences, signature
from .words import Letter, Word, symbol_key


def mu(x: int) -> int:
    return 1 if x == 1 else 2


def nu(x: int) -> int:
    return 2 if x == 1 else 1


def book_l(x: int, y: int) -> int:
    return nu(x * y)


def book_r(x: int, y: int) -> int:
    return mu(x * y)


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, i):
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i, j):
        i, j = self.find(i), self.find(j)
        if i != j:
            self.parent[max(i, j)] = min(i, j)


@dataclass(frozen=True)
class Corner:
    index: int  # corner k lies between letters k and k+1
    end: Letter  # link entry of the letter ending here
    start: Letter  # link entry of the letter starting here (its inverse)


@dataclass(frozen=True)
class VertexLink:
    vertex: int
    ends: tuple  # e_q^{eps_q}, q = 1..d
    steps: tuple  # (corner index, O_q) for the step from entry q to q+1
    arrivals: tuple  # position in U of the occurrence of e_q entered by step q-1
    orientation: int
    start: Letter

    @property
    def degree(self) -> int:
        return len(self.ends)


@dataclass(frozen=True)
class IncidenceData:
    O: tuple
    mu: tuple = ()
    nu: tuple = ()
    l: tuple = ()
    r: tuple = ()


@dataclass
class SurfaceGraph:
    word: Word
    edges: tuple
    vertex_of_point: tuple  # P_i -> vertex id
    corners: tuple
    vertex_ends: dict = field(default_factory=dict)  # vertex -> set of link entries

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_ends)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> list:
        return sorted(self.vertex_ends)

    def degree(self, v: int) -> int:
        return len(self.vertex_ends[v])

    def corner_vertex(self, k: int) -> int:
        n = len(self.word)
        return self.vertex_of_point[(k + 1) % n]

    def vertex_of_end(self, end: Letter) -> int:
        for v, ends in self.vertex_ends.items():
            if end in ends:
                return v
        raise KeyError(end)

    def tail(self, symbol: str) -> int:
        return self.vertex_of_end(Letter(symbol, -1))

    def head(self, symbol: str) -> int:
        return self.vertex_of_end(Letter(symbol, 1))

    def genus(self) -> Fraction:
        return Fraction(1 - self.num_vertices + self.num_edges, 2)

    def incidences(self) -> dict:
        """Link entry -> the two (corner, role) incidences; role is 'end' or 'start'."""
        cached = self.__dict__.get("_incidences")
        if cached is None:
            cached = {}
            for c in self.corners:
                cached.setdefault(c.end, []).append((c.index, "end"))
                cached.setdefault(c.start, []).append((c.index, "start"))
            self.__dict__["_incidences"] = cached
        return cached


def build_graph(U) -> SurfaceGraph:
    U = concat(U)
    if len(U) == 0:
        raise ValueError("empty quadratic word")
    if not is_quadratic(U):
        raise ValueError(f"{U} is not quadratic")
    n = len(U)
    ls = U.letters

    def tail(i):
        return i if ls[i].exp == 1 else (i + 1) % n

    def head(i):
        return (i + 1) % n if ls[i].exp == 1 else i

    uf = _UnionFind(n)
    for i, j in occurrences(U).values():
        uf.union(tail(i), tail(j))
        uf.union(head(i), head(j))
    roots = sorted({uf.find(p) for p in range(n)})
    vid = {r: k for k, r in enumerate(roots)}
    vertex_of_point = tuple(vid[uf.find(p)] for p in range(n))

    corners = tuple(Corner(k, ls[k], ls[(k + 1) % n].inverse()) for k in range(n))
    vertex_ends: dict = {v: set() for v in range(len(roots))}
    for c in corners:
        v = vertex_of_point[(c.index + 1) % n]
        vertex_ends[v].add(c.end)
        vertex_ends[v].add(c.start)
    edges = tuple(sorted(U.support(), key=symbol_key))
    return SurfaceGraph(U, edges, vertex_of_point, corners, vertex_ends)


def graph_genus(U) -> Fraction:
    return build_graph(U).genus()


def default_start(g: SurfaceGraph, v: int) -> Letter:
    return min(g.vertex_ends[v], key=lambda e: (symbol_key(e.symbol), e.exp))


def vertex_link(g: SurfaceGraph, v: int, orientation: int = 1, start: Letter | None = None) -> VertexLink:
    if start is None:
        start = default_start(g, v)
    if start not in g.vertex_ends[v]:
        raise ValueError(f"{start} is not incident to vertex {v}")
    if orientation not in (1, -1):
        raise ValueError("orientation must be +1 or -1")
    n = len(g.word)
    inc = g.incidences()
    d = g.degree(v)
    first = sorted(inc[start], key=lambda t: (t[1] != "end", t[0]))
    corner, role = first[0] if orientation == 1 else first[1]

    ends, steps, arrivals = [start], [], []
    node = start
    for q in range(d):
        c = g.corners[corner]
        if role == "end":
            nxt, O, arrive_role, pos = c.start, 1, "start", (corner + 1) % n
        else:
            nxt, O, arrive_role, pos = c.end, -1, "end", corner
        steps.append((corner, O))
        arrivals.append(pos)
        if q == d - 1:
            if nxt != start:
                raise AssertionError("link walk did not close")
            break
        ends.append(nxt)
        others = list(inc[nxt])
        others.remove((corner, arrive_role))
        corner, role = others[0]
        node = nxt
    # arrivals[q] is the position entered by step q, i.e. the occurrence of
    # e_{q+1}; rotate so that index q refers to e_q.
    arrivals = arrivals[-1:] + arrivals[:-1]
    return VertexLink(v, tuple(ends), tuple(steps), tuple(arrivals), orientation, start)


def all_links(g: SurfaceGraph) -> dict:
    return {v: vertex_link(g, v) for v in g.vertices}


def incidence_sequence(U, link: VertexLink) -> IncidenceData:
    U = concat(U)
    sig = _signature(U)
    O = tuple(o for _, o in link.steps)
    d = len(O)
    for q in range(d - 1):
        if O[q + 1] != O[q] * sig.orientation(link.ends[q + 1].symbol):
            raise AssertionError("incidence recurrence violated")
    return IncidenceData(O)


@lru_cache(maxsize=4096)
def _signature(U: Word):
    return signature(U)


@lru_cache(maxsize=4096)
def _first_positions(U: Word) -> dict:
    return {s: p[0] for s, p in occurrences(U).items()}


def bookkeeping(U, link: VertexLink, inc: IncidenceData | None = None) -> IncidenceData:
    U = concat(U)
    if inc is None:
        inc = incidence_sequence(U, link)
    sig = _signature(U)
    first = _first_positions(U)
    O = inc.O
    d = len(O)
    mus, nus, ls, rs = [], [], [], []
    for q in range(d):
        e = link.ends[q]
        Oq = O[q]
        if d == 1:
            # the loop reads e^eps e^-eps; which copy comes first depends on eps too
            lq, rq = mu(-e.exp * Oq), nu(-e.exp * Oq)
            muq, nuq = (rq, lq) if Oq == 1 else (lq, rq)
        elif sig.orientation(e.symbol) == 1:
            muq, nuq = mu(e.exp), nu(e.exp)
            lq, rq = book_l(Oq, e.exp), book_r(Oq, e.exp)
        else:
            # the occurrence of e_q inside the subword shared with e_{q-1}
            if link.arrivals[q] == first[e.symbol]:
                lq, rq = 1, 2
            else:
                lq, rq = 2, 1
            muq, nuq = (rq, lq) if Oq == 1 else (lq, rq)
        mus.append(muq)
        nus.append(nuq)
        ls.append(lq)
        rs.append(rq)
    return IncidenceData(O, tuple(mus), tuple(nus), tuple(ls), tuple(rs))


def link_table(U, link: VertexLink) -> list:
    """Rows q, e_q, eps_q, o(e_q), O_q, mu_q, nu_q, l_q, r_q."""
    U = concat(U)
    sig = signature(U)
    data = bookkeeping(U, link)
    rows = []
    for q, e in enumerate(link.ends):
        rows.append({
            "q": q + 1,
            "e": e.symbol,
            "eps": e.exp,
            "o": sig.orientation(e.symbol),
            "O": data.O[q],
            "mu": data.mu[q],
            "nu": data.nu[q],
            "l": data.l[q],
            "r": data.r[q],
        })
    return rows
