"""Set-valued functors on a finite category, and their pointwise colimits."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BaseMismatchError, MtkError
from .fin import (
    EMPTY,
    FinCat,
    FinFn,
    FinSet,
    chain_colimit,
    coequalize,
    coproduct,
    cotuple_fn,
    finfn,
    finset,
    identity_fn,
    quotient_by,
)


@dataclass
class Copresheaf:
    """A functor base -> Set: a FinSet per object, a FinFn per morphism."""

    base: FinCat
    values: dict  # object -> FinSet
    actions: dict  # (a, b, f) -> FinFn

    def at(self, obj) -> FinSet:
        return self.values.get(obj, EMPTY)

    def act(self, a, b, f) -> FinFn:
        if a == b and f == self.base.identities[a]:
            return identity_fn(self.at(a))
        return self.actions[(a, b, f)]

    def key(self):
        cached = getattr(self, "_key_cache", None)
        if cached is None:
            vals = tuple((o, self.at(o).labels) for o in self.base.objects)
            acts = tuple(sorted(
                ((a, b, f), self.act(a, b, f).mapping)
                for (a, b, f) in self.base.mors()
            ))
            cached = (vals, acts)
            self._key_cache = cached
        return cached


def copresheaf(base: FinCat, values: dict, actions: dict = None) -> Copresheaf:
    """Build a copresheaf; identity actions are filled in automatically."""
    values = {o: values.get(o, EMPTY) for o in base.objects}
    actions = dict(actions or {})
    for (a, b, f) in base.mors():
        if a == b and f == base.identities[a]:
            actions[(a, b, f)] = identity_fn(values[a])
        elif (a, b, f) not in actions:
            raise MtkError("missing action for %r" % ((a, b, f),))
    return Copresheaf(base, values, actions)


def constant_empty(base: FinCat) -> Copresheaf:
    return copresheaf(base, {}, {(a, b, f): FinFn(EMPTY, EMPTY, ())
                                 for (a, b, f) in base.mors()
                                 if not (a == b and f == base.identities[a])})


def check_functor_laws(x: Copresheaf) -> list:
    """Identity and composition preservation, checked exhaustively."""
    problems = []
    for (a, b, f) in x.base.mors():
        fn = x.act(a, b, f)
        if fn.dom != x.at(a) or fn.cod != x.at(b):
            problems.append("action at %r has wrong endpoints" % ((a, b, f),))
    for a in x.base.objects:
        if x.act(a, a, x.base.identities[a]) != identity_fn(x.at(a)):
            problems.append("identity not preserved at %r" % (a,))
    for (a, b, f) in x.base.mors():
        for (b2, c, g) in x.base.mors():
            if b2 != b:
                continue
            gf = x.base.compose_elems(a, b, c, f, g)
            if x.act(a, b, f).then(x.act(b, c, g)) != x.act(a, c, gf):
                problems.append("composition not preserved at %r" % ((a, b, c, f, g),))
    return problems


@dataclass
class NatTransform:
    src: Copresheaf
    tgt: Copresheaf
    parts: dict  # object -> FinFn

    def at(self, obj) -> FinFn:
        return self.parts[obj]

    def key(self):
        return tuple((o, self.parts[o].mapping) for o in self.src.base.objects)


def nat_transform(src: Copresheaf, tgt: Copresheaf, parts: dict) -> NatTransform:
    if src.base is not tgt.base and src.base != tgt.base:
        raise BaseMismatchError("natural transformation across different bases")
    return NatTransform(src, tgt, {o: parts[o] for o in src.base.objects})


def check_naturality(t: NatTransform) -> list:
    problems = []
    for (a, b, f) in t.src.base.mors():
        left = t.src.act(a, b, f).then(t.at(b))
        right = t.at(a).then(t.tgt.act(a, b, f))
        if left != right:
            problems.append("naturality fails at %r" % ((a, b, f),))
    return problems


def identity_nat(x: Copresheaf) -> NatTransform:
    return NatTransform(x, x, {o: identity_fn(x.at(o)) for o in x.base.objects})


def _same_base(items):
    bases = [i.base for i in items]
    for b in bases[1:]:
        if b != bases[0]:
            raise BaseMismatchError("inputs live over different base categories")


def copresheaf_coproduct(base: FinCat, parts) -> tuple:
    """Pointwise coproduct with the induced functorial action."""
    parts = list(parts)
    if parts:
        _same_base(parts)
    values, injparts = {}, {o: [] for o in base.objects}
    for o in base.objects:
        total, injs = coproduct([p.at(o) for p in parts])
        values[o] = total
        injparts[o] = injs
    actions = {}
    for (a, b, f) in base.mors():
        actions[(a, b, f)] = finfn(
            values[a], values[b],
            lambda t, a=a, b=b, f=f: (t[0], parts[t[0]].act(a, b, f)(t[1])))
    total = copresheaf(base, values, actions)
    injections = [
        NatTransform(p, total, {o: injparts[o][i] for o in base.objects})
        for i, p in enumerate(parts)
    ]
    return total, injections


def copresheaf_cotuple(total: Copresheaf, fns) -> NatTransform:
    fns = list(fns)
    tgt = fns[0].tgt
    parts = {o: cotuple_fn(total.at(o), [t.at(o) for t in fns])
             for o in total.base.objects}
    return NatTransform(total, tgt, parts)


def copresheaf_quotient(x: Copresheaf, pairs) -> tuple:
    """Least functorial quotient identifying the given pairs ((obj, a), (obj, b)).

    Union-find per object, then closure under the base actions until stable.
    """
    uf = {o: {lab: lab for lab in x.at(o)} for o in x.base.objects}

    def find(o, a):
        m = uf[o]
        while m[a] != a:
            m[a] = m[m[a]]
            a = m[a]
        return a

    def union(o, a, b):
        from .fin import label_key
        ra, rb = find(o, a), find(o, b)
        if ra == rb:
            return False
        if label_key(rb) < label_key(ra):
            ra, rb = rb, ra
        uf[o][rb] = ra
        return True

    for (o, a), (o2, b) in pairs:
        if o != o2:
            raise MtkError("quotient pair across different objects")
        union(o, a, b)
    changed = True
    while changed:
        changed = False
        for (a, b, f) in x.base.mors():
            fn = x.act(a, b, f)
            # group elements of x(a) by class and force equal images
            reps = {}
            for lab in x.at(a):
                r = find(a, lab)
                if r in reps:
                    if union(b, fn(reps[r]), fn(lab)):
                        changed = True
                else:
                    reps[r] = lab
    values, projs = {}, {}
    for o in x.base.objects:
        cls = {lab: find(o, lab) for lab in x.at(o)}
        q = finset(set(cls.values()))
        values[o] = q
        projs[o] = finfn(x.at(o), q, cls)
    actions = {}
    for (a, b, f) in x.base.mors():
        fn = x.act(a, b, f)
        table = {}
        for lab in x.at(a):
            table[projs[a](lab)] = projs[b](fn(lab))
        actions[(a, b, f)] = finfn(values[a], values[b], table)
    quot = copresheaf(x.base, values, actions)
    return quot, NatTransform(x, quot, projs)


def copresheaf_coequalize(f: NatTransform, g: NatTransform) -> tuple:
    """Pointwise coequaliser; the induced action must be well defined
    (it always is when the inputs are genuinely natural)."""
    if f.src.key() != g.src.key() or f.tgt.key() != g.tgt.key():
        raise MtkError("coequalize: transformations are not parallel")
    x = f.tgt
    pairs = []
    for o in x.base.objects:
        for lab in f.src.at(o):
            pairs.append(((o, f.at(o)(lab)), (o, g.at(o)(lab))))
    return copresheaf_quotient(x, pairs)


def copresheaf_chain_colimit(xs, maps) -> tuple:
    """Colimit of a finite chain of copresheaves: last one, composite cocone."""
    xs = list(xs)
    maps = list(maps)
    if len(maps) != len(xs) - 1:
        raise MtkError("chain mismatch")
    last = xs[-1]
    cocone = []
    for i, x in enumerate(xs):
        leg = identity_nat(x)
        for m in maps[i:]:
            leg = NatTransform(leg.src, m.tgt,
                               {o: leg.at(o).then(m.at(o)) for o in x.base.objects})
        cocone.append(leg)
    return last, cocone


def pointwise_lift(op: str, *args):
    """Dispatch a FinSet-level colimit to its copresheaf-level version."""
    table = {
        "coproduct": copresheaf_coproduct,
        "coequalize": copresheaf_coequalize,
        "chain_colimit": copresheaf_chain_colimit,
    }
    return table[op](*args)


def kan_free(base: FinCat, family: dict) -> Copresheaf:
    """Free copresheaf on an object-indexed family of finite sets.

    value at C is the sum over D of hom(D, C) x family(D); elements are
    labelled (D, g, x).  The unit family(D) -> value(D), x -> (D, id, x)
    witnesses the universal property.
    """
    family = {o: family.get(o, EMPTY) for o in base.objects}
    values = {}
    for c in base.objects:
        labs = [(d, g, x)
                for d in base.objects
                for g in base.hom(d, c)
                for x in family[d]]
        values[c] = finset(labs)
    actions = {}
    for (a, b, f) in base.mors():
        actions[(a, b, f)] = finfn(
            values[a], values[b],
            lambda t, a=a, b=b, f=f: (t[0], base.compose_elems(t[0], a, b, t[1], f), t[2]))
    return copresheaf(base, values, actions)


def kan_unit(base: FinCat, family: dict, free: Copresheaf) -> dict:
    """The unit maps family(D) -> free(D), one FinFn per object."""
    family = {o: family.get(o, EMPTY) for o in base.objects}
    return {d: finfn(family[d], free.at(d),
                     lambda x, d=d: (d, base.identities[d], x))
            for d in base.objects}


def value_family(base: FinCat, sizes: dict) -> Copresheaf:
    """A copresheaf over a discrete base with integer-labelled values."""
    if not base.is_discrete():
        raise MtkError("value_family needs a discrete base")
    return copresheaf(base, {o: finset(range(sizes.get(o, 0)))
                             for o in base.objects})


def all_families(base: FinCat, max_size: int):
    """All copresheaves over a discrete base with values up to max_size."""
    from itertools import product as iproduct
    out = []
    for sizes in iproduct(range(max_size + 1), repeat=len(base.objects)):
        out.append(value_family(base, dict(zip(base.objects, sizes))))
    return out


def all_copresheaves(base: FinCat, max_size: int):
    """All copresheaves with values up to max_size, actions included.

    Enumerates value-size vectors and all action tables, then filters by
    the functor laws; intended for small bases only.
    """
    from itertools import product as iproduct
    nonid = [(a, b, f) for (a, b, f) in base.mors()
             if not (a == b and f == base.identities[a])]
    out = []
    for sizes in iproduct(range(max_size + 1), repeat=len(base.objects)):
        values = {o: finset(range(s)) for o, s in zip(base.objects, sizes)}
        pools = []
        for (a, b, f) in nonid:
            va, vb = values[a], values[b]
            if len(va) and not len(vb):
                pools.append([])
            else:
                pools.append([FinFn(va, vb, combo) for combo in
                              iproduct(vb.labels, repeat=len(va))])
        for combo in iproduct(*pools):
            cand = copresheaf(base, values, dict(zip(nonid, combo)))
            if not check_functor_laws(cand):
                out.append(cand)
    return out
