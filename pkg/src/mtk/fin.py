"""Finite sets with canonical structured labels, and their basic colimits.

Labels are ints, strings or tuples of labels.  Tuples carry structure:
pairs produced by products, ``(i, x)`` tags produced by coproduct
injections.  Quotient classes are named by their least member under a
fixed total order, so running the same construction twice always yields
label-identical sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import MtkError, ValidationError


def label_key(lab):
    """Total order on labels: ints, then strings, then tuples (recursively)."""
    if isinstance(lab, bool):
        return (0, int(lab))
    if isinstance(lab, int):
        return (0, lab)
    if isinstance(lab, str):
        return (1, lab)
    if isinstance(lab, tuple):
        return (2, tuple(label_key(x) for x in lab))
    raise TypeError("unsupported label: %r" % (lab,))


def label_str(lab) -> str:
    """Compact deterministic rendering of a label, for reports."""
    if isinstance(lab, tuple):
        return "(" + ",".join(label_str(x) for x in lab) + ")"
    return str(lab)


@dataclass(frozen=True)
class FinSet:
    """A finite set; labels are kept sorted so equal sets compare equal."""

    labels: tuple

    def __post_init__(self):
        for a, b in zip(self.labels, self.labels[1:]):
            if not label_key(a) < label_key(b):
                raise ValidationError("labels not sorted/distinct: %r" % (self.labels,))

    @cached_property
    def _index(self):
        return {lab: i for i, lab in enumerate(self.labels)}

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, lab):
        return lab in self._index

    def __repr__(self):
        return "FinSet(%s)" % ",".join(label_str(x) for x in self.labels)


def finset(labels) -> FinSet:
    """Build a FinSet from any iterable of labels, sorting canonically."""
    labs = sorted(labels, key=label_key)
    return FinSet(tuple(labs))


EMPTY = finset([])


@dataclass(frozen=True)
class FinFn:
    """A total function between finite sets, stored elementwise."""

    dom: FinSet
    cod: FinSet
    mapping: tuple  # mapping[i] is the image of dom.labels[i]

    def __post_init__(self):
        if len(self.mapping) != len(self.dom):
            raise ValidationError("mapping does not cover the domain")
        for y in self.mapping:
            if y not in self.cod:
                raise ValidationError("image %r not in codomain" % (y,))

    def __call__(self, lab):
        return self.mapping[self.dom._index[lab]]

    def then(self, other: "FinFn") -> "FinFn":
        if self.cod != other.dom:
            raise MtkError("composition mismatch")
        return FinFn(self.dom, other.cod, tuple(other(y) for y in self.mapping))

    def is_bijection(self) -> bool:
        return len(self.dom) == len(self.cod) and len(set(self.mapping)) == len(self.mapping)

    def is_surjection(self) -> bool:
        return len(set(self.mapping)) == len(self.cod)

    def inverse(self) -> "FinFn":
        if not self.is_bijection():
            raise MtkError("not a bijection")
        inv = {y: x for x, y in zip(self.dom.labels, self.mapping)}
        return finfn(self.cod, self.dom, inv)

    def table(self) -> dict:
        return dict(zip(self.dom.labels, self.mapping))

    def __repr__(self):
        pairs = ",".join("%s>%s" % (label_str(x), label_str(y))
                         for x, y in zip(self.dom.labels, self.mapping))
        return "FinFn{%s}" % pairs


def finfn(dom: FinSet, cod: FinSet, assign) -> FinFn:
    """Build a FinFn from a dict or callable."""
    get = assign.__getitem__ if isinstance(assign, dict) else assign
    return FinFn(dom, cod, tuple(get(x) for x in dom.labels))


def identity_fn(s: FinSet) -> FinFn:
    return FinFn(s, s, s.labels)


def empty_fn(cod: FinSet) -> FinFn:
    return FinFn(EMPTY, cod, ())


def coproduct(parts) -> tuple:
    """Disjoint union; element ``x`` of part ``i`` becomes ``(i, x)``.

    Returns (sum, injections); injections are jointly surjective and
    pairwise disjoint by the index tag.
    """
    parts = list(parts)
    total = finset((i, x) for i, p in enumerate(parts) for x in p)
    injs = [finfn(p, total, lambda x, i=i: (i, x)) for i, p in enumerate(parts)]
    return total, injs


def cotuple_fn(total: FinSet, fns) -> FinFn:
    """Mediating map out of a coproduct built by :func:`coproduct`."""
    fns = list(fns)
    return finfn(total, fns[0].cod if fns else EMPTY,
                 lambda t: fns[t[0]](t[1]))


def product(parts) -> tuple:
    """Cartesian product with tuple labels; returns (prod, projections)."""
    parts = list(parts)
    tuples = [()]
    for p in parts:
        tuples = [t + (x,) for t in tuples for x in p]
    prod = finset(tuples)
    projs = [finfn(prod, p, lambda t, i=i: t[i]) for i, p in enumerate(parts)]
    return prod, projs


class UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        # keep the least label as representative
        if label_key(rb) < label_key(ra):
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True

    def classes(self) -> dict:
        return {x: self.find(x) for x in self.parent}


def quotient_by(s: FinSet, pairs) -> tuple:
    """Quotient of ``s`` by the equivalence generated by ``pairs``.

    Classes are named by their least representative.  Returns
    (quotient, projection).
    """
    uf = UnionFind(s.labels)
    for a, b in pairs:
        uf.union(a, b)
    cls = uf.classes()
    q = finset(set(cls.values()))
    return q, finfn(s, q, cls)


def coequalize(f: FinFn, g: FinFn) -> tuple:
    """Coequaliser of a parallel pair, computed by union-find."""
    if f.dom != g.dom or f.cod != g.cod:
        raise MtkError("coequalize: maps are not parallel")
    return quotient_by(f.cod, zip(f.mapping, g.mapping))


def induce_from_coeq(proj: FinFn, h: FinFn) -> FinFn:
    """The unique map m with m . proj = h, for a surjective proj."""
    if not proj.is_surjection():
        raise MtkError("projection is not surjective")
    table = {}
    for x in proj.dom:
        c, y = proj(x), h(x)
        if table.setdefault(c, y) != y:
            raise MtkError("map does not descend to the quotient")
    return finfn(proj.cod, h.cod, table)


def chain_colimit(sets, maps) -> tuple:
    """Colimit of a finite chain: the last set, with composite cocone maps.

    The caller certifies that truncating at the last set is valid.
    """
    sets = list(sets)
    maps = list(maps)
    if len(maps) != len(sets) - 1:
        raise MtkError("chain mismatch: need one map per consecutive pair")
    for s, m, t in zip(sets, maps, sets[1:]):
        if m.dom != s or m.cod != t:
            raise MtkError("chain mismatch at %r" % (m,))
    last = sets[-1]
    cocone = []
    for i in range(len(sets)):
        leg = identity_fn(sets[i])
        for m in maps[i:]:
            leg = leg.then(m)
        cocone.append(leg)
    return last, cocone


@dataclass
class FinCat:
    """A finite category given by hom-sets, identities and composition tables.

    ``comp[(a, b, c)][(f, g)]`` is the composite of f: a -> b followed by
    g: b -> c.  Missing hom entries denote the empty hom-set.
    """

    objects: tuple
    homs: dict
    identities: dict
    comp: dict

    def hom(self, a, b) -> FinSet:
        return self.homs.get((a, b), EMPTY)

    def compose_elems(self, a, b, c, f, g):
        return self.comp[(a, b, c)][(f, g)]

    def mors(self):
        for a in self.objects:
            for b in self.objects:
                for f in self.hom(a, b):
                    yield (a, b, f)

    def is_discrete(self) -> bool:
        return all(len(self.hom(a, b)) == (1 if a == b else 0)
                   for a in self.objects for b in self.objects)


def discrete_cat(objects) -> FinCat:
    objects = tuple(objects)
    homs = {(a, a): finset([("id", a)]) for a in objects}
    idents = {a: ("id", a) for a in objects}
    comp = {(a, a, a): {(("id", a), ("id", a)): ("id", a)} for a in objects}
    return FinCat(objects, homs, idents, comp)


def check_fincat(cat: FinCat) -> list:
    """Exhaustively check unit and associativity laws; returns violations."""
    problems = []
    for a in cat.objects:
        if cat.identities.get(a) not in cat.hom(a, a):
            problems.append("missing identity at %r" % (a,))
    for (a, b, f) in cat.mors():
        ida, idb = cat.identities[a], cat.identities[b]
        if cat.comp.get((a, a, b), {}).get((ida, f)) != f:
            problems.append("left unit fails at %r" % ((a, b, f),))
        if cat.comp.get((a, b, b), {}).get((f, idb)) != f:
            problems.append("right unit fails at %r" % ((a, b, f),))
    for (a, b, f) in cat.mors():
        for (b2, c, g) in cat.mors():
            if b2 != b:
                continue
            for (c2, d, h) in cat.mors():
                if c2 != c:
                    continue
                gf = cat.compose_elems(a, b, c, f, g)
                hg = cat.compose_elems(b, c, d, g, h)
                left = cat.compose_elems(a, c, d, gf, h)
                right = cat.compose_elems(a, b, d, f, hg)
                if left != right:
                    problems.append("associativity fails at %r" % ((a, b, c, d, f, g, h),))
    return problems
