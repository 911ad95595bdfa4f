"""Enriched graphs on ordered vertex sets, and the fiber category they form.

Graphs here are triangular: vertices are 0..n and only homs (i, j) with
i < j may be nonempty.  Every path is then strictly increasing, so the
path-indexed coproducts used downstream are finite.  The graphs with a
fixed vertex set and identity-on-objects morphisms form a product of
copies of the base category, one per vertex pair; colimits are
componentwise.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cat import BaseCat
from .errors import MtkError


def hom_pairs(n: int):
    return [(i, j) for i in range(n) for j in range(i + 1, n + 1)]


@dataclass
class VGraph:
    """Vertices 0..n with a base-category object for each pair i < j."""

    cat: BaseCat
    n: int
    homs: dict  # (i, j) -> base object, i < j

    def hom(self, i, j):
        if (i, j) in self.homs:
            return self.homs[(i, j)]
        return self.cat.initial()

    def key(self):
        return tuple((p, self.cat.obj_key(self.hom(*p))) for p in hom_pairs(self.n))


def vgraph(cat: BaseCat, n: int, homs: dict) -> VGraph:
    for (i, j) in homs:
        if not (0 <= i < j <= n):
            raise MtkError("hom %r is not upper-triangular" % ((i, j),))
    return VGraph(cat, n, dict(homs))


def sequence_graph(cat: BaseCat, objs) -> VGraph:
    """The graph on 0..n with objs[i] between i and i+1, initial elsewhere."""
    objs = list(objs)
    return vgraph(cat, len(objs), {(i, i + 1): z for i, z in enumerate(objs)})


def is_sequence_graph(x: VGraph) -> bool:
    zero = x.cat.obj_key(x.cat.initial())
    return all(j == i + 1 or x.cat.obj_key(x.hom(i, j)) == zero
               for (i, j) in hom_pairs(x.n))


def increasing_paths(n: int, a: int, b: int):
    """All strictly increasing vertex sequences from a to b, shortest first."""
    if a >= b:
        return []
    out = []

    def extend(path):
        last = path[-1]
        if last == b:
            out.append(tuple(path))
            return
        for nxt in range(last + 1, b + 1):
            extend(path + [nxt])

    extend([a])
    return sorted(out, key=lambda p: (len(p), p))


@dataclass
class GraphMor:
    """A graph morphism: a vertex map plus a hom map per source pair."""

    src: VGraph
    tgt: VGraph
    vmap: dict  # source vertex -> target vertex
    homs: dict  # (i, j) -> base morphism x.hom(i,j) -> y.hom(vmap i, vmap j)

    def hom_at(self, i, j):
        return self.homs[(i, j)]


def path_morphism(x: VGraph, verts) -> GraphMor:
    """The morphism from the sequence graph of x's homs along ``verts`` into x,
    with vertex map i -> verts[i] and identity hom maps."""
    objs = [x.hom(verts[i], verts[i + 1]) if verts[i] < verts[i + 1] else x.cat.initial()
            for i in range(len(verts) - 1)]
    seq = sequence_graph(x.cat, objs)
    homs = {}
    for (i, j) in hom_pairs(seq.n):
        if j == i + 1 and verts[i] < verts[j]:
            homs[(i, j)] = x.cat.identity(objs[i])
        else:
            homs[(i, j)] = x.cat.from_initial(x.hom(verts[i], verts[j])
                                              if verts[i] < verts[j] else x.cat.initial())
    return GraphMor(seq, x, {i: v for i, v in enumerate(verts)}, homs)


class GraphFiberCat(BaseCat):
    """Graphs on a fixed vertex set 0..n with identity-on-objects morphisms.

    Elements are tagged ((i, j), e); all structure is componentwise.
    """

    def __init__(self, base: BaseCat, n: int):
        self.base = base
        self.n = n
        self.pairs = hom_pairs(n)

    def obj_key(self, x: VGraph):
        return x.key()

    def mor_key(self, f: dict):
        # morphisms in the fiber are plain dicts (i, j) -> base morphism,
        # wrapped with endpoints
        return (f["src"].key(), f["tgt"].key(),
                tuple((p, self.base.mor_key(f["homs"][p])) for p in self.pairs))

    def make(self, src: VGraph, tgt: VGraph, homs: dict) -> dict:
        return {"src": src, "tgt": tgt, "homs": dict(homs)}

    def dom(self, f):
        return f["src"]

    def cod(self, f):
        return f["tgt"]

    def identity(self, x):
        return self.make(x, x, {p: self.base.identity(x.hom(*p)) for p in self.pairs})

    def compose(self, f, g):
        return self.make(f["src"], g["tgt"],
                         {p: self.base.compose(f["homs"][p], g["homs"][p])
                          for p in self.pairs})

    def elements(self, x):
        return [(p, e) for p in self.pairs for e in self.base.elements(x.hom(*p))]

    def apply(self, f, elem):
        p, e = elem
        return (p, self.base.apply(f["homs"][p], e))

    def make_mor(self, x, y, table):
        homs = {}
        for p in self.pairs:
            sub = {e: table[(p, e)][1] for e in self.base.elements(x.hom(*p))}
            homs[p] = self.base.make_mor(x.hom(*p), y.hom(*p), sub)
        return self.make(x, y, homs)

    def initial(self):
        return vgraph(self.base, self.n, {})

    def coproduct(self, parts):
        parts = list(parts)
        homs, injhoms = {}, [dict() for _ in parts]
        for p in self.pairs:
            total, injs = self.base.coproduct([x.hom(*p) for x in parts])
            homs[p] = total
            for i, inj in enumerate(injs):
                injhoms[i][p] = inj
        total_graph = vgraph(self.base, self.n, homs)
        return total_graph, [self.make(x, total_graph, ih)
                             for x, ih in zip(parts, injhoms)]

    def cotuple(self, total, fns):
        fns = list(fns)
        tgt = fns[0]["tgt"]
        homs = {p: self.base.cotuple(total.hom(*p), [f["homs"][p] for f in fns])
                for p in self.pairs}
        return self.make(total, tgt, homs)

    def copr_split(self, elem):
        p, e = elem
        i, inner = self.base.copr_split(e)
        return i, (p, inner)

    def copr_join(self, index, inner):
        p, e = inner
        return (p, self.base.copr_join(index, e))

    def coequalize(self, f, g):
        homs, projhoms = {}, {}
        for p in self.pairs:
            q, proj = self.base.coequalize(f["homs"][p], g["homs"][p])
            homs[p] = q
            projhoms[p] = proj
        quot = vgraph(self.base, self.n, homs)
        return quot, self.make(f["tgt"], quot, projhoms)

    def quotient_by(self, x, pairs):
        per = {p: [] for p in self.pairs}
        for (p, a), (p2, b) in pairs:
            if p != p2:
                raise MtkError("quotient pair across different homs")
            per[p].append((a, b))
        homs, projhoms = {}, {}
        for p in self.pairs:
            q, proj = self.base.quotient_by(x.hom(*p), per[p])
            homs[p] = q
            projhoms[p] = proj
        quot = vgraph(self.base, self.n, homs)
        return quot, self.make(x, quot, projhoms)

    def chain_colimit(self, objs, maps):
        last = objs[-1]
        cocone = []
        for i, x in enumerate(objs):
            leg = self.identity(x)
            for m in maps[i:]:
                leg = self.compose(leg, m)
            cocone.append(leg)
        return last, cocone

    def all_mors(self, x, y):
        from itertools import product as iproduct
        per = [list(self.base.all_mors(x.hom(*p), y.hom(*p))) for p in self.pairs]
        for combo in iproduct(*per):
            yield self.make(x, y, dict(zip(self.pairs, combo)))

    def inverse(self, f):
        return self.make(f["tgt"], f["src"],
                         {p: self.base.inverse(f["homs"][p]) for p in self.pairs})

    def size_report(self, x):
        return {"%d,%d" % p: self.base.size(x.hom(*p)) for p in self.pairs}
