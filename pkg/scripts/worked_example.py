"""Walk through the Klein-bottle word abAb: link table, doubled word,
inserted cycles and edge relations."""
import argparse
from dataclasses import dataclass

from wicks.extension import double_edges, insert_cycles, vind_violations
from wicks.surface import build_graph, link_table, vertex_link


@dataclass
class Config:
    word: str = "abAb"
    orientation: int = 1


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("word", nargs="?", default=Config.word)
    ap.add_argument("--orientation", type=int, choices=(1, -1), default=1)
    a = ap.parse_args()
    cfg = Config(a.word, a.orientation)

    g = build_graph(cfg.word)
    print(f"{cfg.word}: {g.num_vertices} vertices, {g.num_edges} edges, genus {g.genus()}")
    links = {}
    for v in g.vertices:
        link = vertex_link(g, v, cfg.orientation)
        links[v] = (None, cfg.orientation)
        print(f"vertex {v}: " + "  ".join(str(e) for e in link.ends))
        for row in link_table(cfg.word, link):
            print("   ", row)
    d = double_edges(cfg.word, links)
    print("doubled word:", d.hamiltonian, "| subword violations:", len(vind_violations(d)))
    ext = insert_cycles(d)
    for v in ext.vertices:
        print(f"cycle at vertex {v}:", " ".join(ext.cycles[v]))
    for x, (left, right) in ext.relations().items():
        x1, x2 = d.pairs[x]
        print(f"  {x1} = {left} {x2} {right}")


if __name__ == "__main__":
    main()
