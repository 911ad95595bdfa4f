"""A small common interface for the concrete categories everything runs in.

Objects and morphisms are opaque to callers; each category knows how to
enumerate elements, build maps elementwise, and compute the colimits the
rest of the package needs.  All values are immutable after construction
and all operations are pure.
"""

from __future__ import annotations

from .errors import IsoNotFound, MtkError
from .fin import FinFn, FinSet, coequalize, coproduct, finfn, finset, identity_fn
from .fin import EMPTY, chain_colimit, cotuple_fn, quotient_by
from .copresheaf import (
    Copresheaf,
    NatTransform,
    check_naturality,
    copresheaf,
    copresheaf_chain_colimit,
    copresheaf_coequalize,
    copresheaf_coproduct,
    copresheaf_cotuple,
    copresheaf_quotient,
    constant_empty,
    identity_nat,
    nat_transform,
)


class BaseCat:
    """Protocol for the concrete base categories in this package."""

    def obj_key(self, x):
        raise NotImplementedError

    def mor_key(self, f):
        raise NotImplementedError

    def equal_obj(self, x, y) -> bool:
        return self.obj_key(x) == self.obj_key(y)

    def equal_mor(self, f, g) -> bool:
        return self.mor_key(f) == self.mor_key(g)

    def dom(self, f):
        raise NotImplementedError

    def cod(self, f):
        raise NotImplementedError

    def identity(self, x):
        raise NotImplementedError

    def compose(self, f, g):
        """f followed by g."""
        raise NotImplementedError

    def elements(self, x) -> list:
        raise NotImplementedError

    def apply(self, f, elem):
        raise NotImplementedError

    def make_mor(self, x, y, table: dict):
        raise NotImplementedError

    def initial(self):
        raise NotImplementedError

    def from_initial(self, x):
        return self.make_mor(self.initial(), x, {})

    def coproduct(self, parts) -> tuple:
        raise NotImplementedError

    def cotuple(self, total, fns):
        raise NotImplementedError

    def copr_split(self, elem) -> tuple:
        """Decompose an element of a coproduct into (part index, inner element)."""
        raise NotImplementedError

    def copr_join(self, index, inner):
        raise NotImplementedError

    def coequalize(self, f, g) -> tuple:
        raise NotImplementedError

    def quotient_by(self, x, pairs) -> tuple:
        """Least quotient in this category identifying the element pairs."""
        raise NotImplementedError

    def chain_colimit(self, objs, maps) -> tuple:
        raise NotImplementedError

    def all_mors(self, x, y):
        raise NotImplementedError

    def size(self, x) -> int:
        return len(self.elements(x))

    def inverse(self, f):
        raise NotImplementedError

    def size_report(self, x) -> dict:
        """Sizes per component, for reports."""
        return {"total": self.size(x)}


def compose_all(cat: BaseCat, *fs):
    out = fs[0]
    for f in fs[1:]:
        out = cat.compose(out, f)
    return out


def mor_is_iso(cat: BaseCat, f) -> bool:
    dom_elems = cat.elements(cat.dom(f))
    images = [cat.apply(f, e) for e in dom_elems]
    return len(set(images)) == len(images) and len(images) == cat.size(cat.cod(f))


def mor_is_epi(cat: BaseCat, f) -> bool:
    images = {cat.apply(f, e) for e in cat.elements(cat.dom(f))}
    return len(images) == cat.size(cat.cod(f))


def induce_along_epi(cat: BaseCat, e, h):
    """The unique m with m . e = h, for surjective e; checks well-definedness."""
    if cat.obj_key(cat.dom(e)) != cat.obj_key(cat.dom(h)):
        raise MtkError("induce_along_epi: domains differ")
    table = {}
    for x in cat.elements(cat.dom(e)):
        key = cat.apply(e, x)
        val = cat.apply(h, x)
        if key in table:
            if table[key] != val:
                raise MtkError("map does not descend along the given epi")
        else:
            table[key] = val
    mid = cat.cod(e)
    for y in cat.elements(mid):
        if y not in table:
            raise MtkError("induce_along_epi: map is not an epi")
    return cat.make_mor(mid, cat.cod(h), table)


def iso_from_commutation(cat: BaseCat, qa, qb):
    """The unique isomorphism i with i . qa = qb, given surjective qa, qb.

    Raises IsoNotFound when no such bijection exists.
    """
    try:
        i = induce_along_epi(cat, qa, qb)
    except MtkError as exc:
        raise IsoNotFound(str(exc))
    if not mor_is_iso(cat, i):
        raise IsoNotFound("induced comparison map is not a bijection")
    return i


class FinSetCat(BaseCat):
    """Finite sets and total functions."""

    def obj_key(self, x: FinSet):
        return x.labels

    def mor_key(self, f: FinFn):
        return (f.dom.labels, f.cod.labels, f.mapping)

    def dom(self, f):
        return f.dom

    def cod(self, f):
        return f.cod

    def identity(self, x):
        return identity_fn(x)

    def compose(self, f, g):
        return f.then(g)

    def elements(self, x):
        return list(x.labels)

    def apply(self, f, elem):
        return f(elem)

    def make_mor(self, x, y, table):
        return finfn(x, y, table)

    def initial(self):
        return EMPTY

    def coproduct(self, parts):
        return coproduct(parts)

    def cotuple(self, total, fns):
        return cotuple_fn(total, fns)

    def copr_split(self, elem):
        return elem[0], elem[1]

    def copr_join(self, index, inner):
        return (index, inner)

    def coequalize(self, f, g):
        return coequalize(f, g)

    def quotient_by(self, x, pairs):
        return quotient_by(x, pairs)

    def chain_colimit(self, objs, maps):
        return chain_colimit(objs, maps)

    def all_mors(self, x, y):
        if len(x) == 0:
            yield finfn(x, y, {})
            return
        if len(y) == 0:
            return
        from itertools import product as iproduct
        for combo in iproduct(y.labels, repeat=len(x)):
            yield FinFn(x, y, combo)

    def inverse(self, f):
        return f.inverse()

    def size_report(self, x):
        return {"total": len(x)}


class CopresheafCat(BaseCat):
    """Copresheaves on a fixed finite base category; elements are (obj, label)."""

    def __init__(self, base):
        self.base = base

    def obj_key(self, x: Copresheaf):
        return x.key()

    def mor_key(self, f: NatTransform):
        return (f.src.key(), f.tgt.key(), f.key())

    def dom(self, f):
        return f.src

    def cod(self, f):
        return f.tgt

    def identity(self, x):
        return identity_nat(x)

    def compose(self, f, g):
        return NatTransform(f.src, g.tgt,
                            {o: f.at(o).then(g.at(o)) for o in self.base.objects})

    def elements(self, x):
        return [(o, lab) for o in self.base.objects for lab in x.at(o)]

    def apply(self, f, elem):
        o, lab = elem
        return (o, f.at(o)(lab))

    def make_mor(self, x, y, table):
        parts = {}
        for o in self.base.objects:
            parts[o] = finfn(x.at(o), y.at(o), lambda lab, o=o: table[(o, lab)][1])
        return NatTransform(x, y, parts)

    def make_obj(self, values: dict, actions: dict = None):
        return copresheaf(self.base, values, actions)

    def initial(self):
        return constant_empty(self.base)

    def coproduct(self, parts):
        return copresheaf_coproduct(self.base, parts)

    def cotuple(self, total, fns):
        return copresheaf_cotuple(total, fns)

    def copr_split(self, elem):
        o, (i, lab) = elem
        return i, (o, lab)

    def copr_join(self, index, inner):
        o, lab = inner
        return (o, (index, lab))

    def coequalize(self, f, g):
        return copresheaf_coequalize(f, g)

    def quotient_by(self, x, pairs):
        return copresheaf_quotient(x, pairs)

    def chain_colimit(self, objs, maps):
        return copresheaf_chain_colimit(objs, maps)

    def all_mors(self, x, y):
        from itertools import product as iproduct
        per_obj = []
        fscat = FinSetCat()
        for o in self.base.objects:
            per_obj.append(list(fscat.all_mors(x.at(o), y.at(o))))
        for combo in iproduct(*per_obj):
            cand = NatTransform(x, y, dict(zip(self.base.objects, combo)))
            if not check_naturality(cand):
                yield cand

    def inverse(self, f):
        return NatTransform(f.tgt, f.src,
                            {o: f.at(o).inverse() for o in self.base.objects})

    def size_report(self, x):
        return {str(o): len(x.at(o)) for o in self.base.objects}
