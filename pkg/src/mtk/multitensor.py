"""Multitensors, enriched-graph endofunctors built from them, and E-categories.

A multitensor packages n-ary tensor functors (1 <= n <= arity bound) with a
unit X -> E1(X) and substitution maps E_k(E_{n_1}.., .., E_{n_k}..) -> E_n
indexed by partitions into nonempty blocks, subject to unit and
associativity laws.  The graph endofunctor built from a distributive
multitensor sums the tensors over increasing vertex paths; its monad
structure comes from the unit and substitution.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .cat import BaseCat, CopresheafCat, mor_is_iso
from .copresheaf import Copresheaf, copresheaf, finset
from .errors import ArityError, MtkError
from .fin import discrete_cat, finfn
from .graphs import (
    GraphFiberCat,
    GraphMor,
    VGraph,
    hom_pairs,
    increasing_paths,
    path_morphism,
    sequence_graph,
    vgraph,
)
from .monad import ComputableMonad
from .report import CheckReport


def compositions(n: int):
    """All ways to split n into an ordered tuple of positive block lengths."""
    if n == 0:
        return [()]
    out = []
    for first in range(1, n + 1):
        for rest in compositions(n - first):
            out.append((first,) + rest)
    return sorted(out, key=lambda c: (len(c), c))


@dataclass(frozen=True)
class PartitionIndex:
    """Block lengths of a partition into nonempty consecutive blocks."""

    blocks: tuple

    def __post_init__(self):
        if any(b < 1 for b in self.blocks):
            raise MtkError("empty blocks are excluded")

    @property
    def outer(self) -> int:
        return len(self.blocks)

    @property
    def total(self) -> int:
        return sum(self.blocks)


def split_by(seq, blocks):
    out, i = [], 0
    for b in blocks:
        out.append(tuple(seq[i:i + b]))
        i += b
    if i != len(seq):
        raise MtkError("blocks do not cover the sequence")
    return tuple(out)


@dataclass
class Multitensor:
    """n-ary tensors with unit and substitution over a base category."""

    cat: BaseCat
    arity_bound: int
    name: str
    _obj: object
    _mor: object
    _unit: object
    _subst: object
    _memo: dict = field(default_factory=dict)

    def _check_arity(self, n):
        if not 1 <= n <= self.arity_bound:
            raise ArityError("arity %d outside 1..%d" % (n, self.arity_bound))

    def obj(self, objs):
        objs = tuple(objs)
        self._check_arity(len(objs))
        key = ("obj", tuple(self.cat.obj_key(x) for x in objs))
        if key not in self._memo:
            self._memo[key] = self._obj(objs)
        return self._memo[key]

    def mor(self, mors):
        mors = tuple(mors)
        self._check_arity(len(mors))
        key = ("mor", tuple(self.cat.mor_key(f) for f in mors))
        if key not in self._memo:
            self._memo[key] = self._mor(mors)
        return self._memo[key]

    def unit(self, x):
        key = ("unit", self.cat.obj_key(x))
        if key not in self._memo:
            self._memo[key] = self._unit(x)
        return self._memo[key]

    def subst(self, nested):
        """The substitution map E_k(E(block_1), ..) -> E(concatenation)."""
        nested = tuple(tuple(b) for b in nested)
        self._check_arity(len(nested))
        self._check_arity(sum(len(b) for b in nested))
        key = ("subst", tuple(tuple(self.cat.obj_key(x) for x in b) for b in nested))
        if key not in self._memo:
            self._memo[key] = self._subst(nested)
        return self._memo[key]


@dataclass
class MultitensorMorphism:
    src: Multitensor
    tgt: Multitensor
    _component: object

    def at(self, objs):
        return self._component(tuple(objs))


def mt_from_multicat(mc) -> Multitensor:
    """The multitensor on set-families over the objects of a multicategory.

    The tensor of (X_1..X_n) at a target object is the sum over source
    tuples of hom x prod X_i; the unit and substitution come straight from
    the identities and substitution tables.
    """
    from .multicat import validate

    report = validate(mc)
    if not report.ok:
        raise MtkError("multicategory invalid: %s" % (report.violations + report.gaps)[:3])
    base = discrete_cat(mc.objects)
    ccat = CopresheafCat(base)

    def eobj(objs):
        n = len(objs)
        values = {}
        for c in mc.objects:
            labels = []
            for ref in mc.multimaps(arity=n):
                if ref[1] != c:
                    continue
                pools = [objs[i].at(ref[0][i]).labels for i in range(n)]
                for xs in itertools.product(*pools):
                    labels.append((ref, xs))
            values[c] = finset(labels)
        return copresheaf(base, values)

    def emor(fs):
        srcs = tuple(f.src for f in fs)
        tgts = tuple(f.tgt for f in fs)
        dom, cod = eobj(srcs), eobj(tgts)
        return ccat.make_mor(dom, cod, {
            (c, (ref, xs)): (c, (ref, tuple(fs[i].at(ref[0][i])(x)
                                            for i, x in enumerate(xs))))
            for c in mc.objects for (ref, xs) in dom.at(c)
        })

    def eunit(x):
        cod = eobj((x,))
        return ccat.make_mor(x, cod, {
            (c, lab): (c, (mc.identity_ref(c), (lab,)))
            for c in mc.objects for lab in x.at(c)
        })

    def esubst(nested):
        inner_objs = tuple(eobj(block) for block in nested)
        dom = eobj(inner_objs)
        flat = tuple(x for block in nested for x in block)
        cod = eobj(flat)
        table = {}
        for c in mc.objects:
            for (outer_ref, ys) in dom.at(c):
                inner_refs = tuple(y[0] for y in ys)
                xs = tuple(x for y in ys for x in y[1])
                res = mc.substitute(outer_ref, inner_refs)
                table[(c, (outer_ref, ys))] = (c, (res, xs))
        return ccat.make_mor(dom, cod, table)

    return Multitensor(ccat, mc.arity_bound, "E[%d objs]" % len(mc.objects),
                       eobj, emor, eunit, esubst)


def unary_part(E: Multitensor) -> ComputableMonad:
    """The monad E1 with unit u and multiplication given by unary substitution."""
    return ComputableMonad(
        E.cat, "unary(%s)" % E.name,
        lambda x: E.obj((x,)),
        lambda f: E.mor((f,)),
        lambda x: E.unit(x),
        lambda x: E.subst(((x,),)),
    )


def tilde_unary(E: Multitensor):
    """The sub-multitensor with the same unary part and empty higher tensors,
    together with its inclusion into E."""
    cat = E.cat

    def tobj(objs):
        if len(objs) == 1:
            return E.obj(objs)
        return cat.initial()

    def tmor(fs):
        if len(fs) == 1:
            return E.mor(fs)
        return cat.from_initial(cat.initial())

    def tsubst(nested):
        k = len(nested)
        flat = tuple(x for b in nested for x in b)
        cod = tobj(flat)
        if k == 1 and len(nested[0]) == 1:
            return E.subst(nested)
        if k == 1:
            dom = E.obj((cat.initial(),))
            if cat.size(dom) != 0:
                raise MtkError("unary part does not preserve the initial object")
            return cat.make_mor(dom, cod, {})
        return cat.from_initial(cod)

    tilde = Multitensor(cat, E.arity_bound, "tilde(%s)" % E.name,
                        tobj, tmor, lambda x: E.unit(x), tsubst)

    def psi_component(objs):
        if len(objs) == 1:
            return cat.identity(E.obj(objs))
        return cat.from_initial(E.obj(objs))

    return tilde, MultitensorMorphism(tilde, E, psi_component)


# ---------------------------------------------------------------------------
# axiom checking


def _sample_endos(cat: BaseCat, x):
    """identity plus, when x is inhabited, the constant map onto its least element."""
    out = [cat.identity(x)]
    elems = cat.elements(x)
    if elems:
        least = elems[0]
        out.append(cat.make_mor(x, x, {e: least for e in elems}))
    return out


def mt_check_axioms(E: Multitensor, tuples, max_nestings: int = None) -> CheckReport:
    """Unit laws, substitution associativity, functoriality and naturality.

    Unit and associativity run over every supplied tuple and every nesting
    within the arity bound; functoriality and naturality run over a small
    deterministic sample of endomorphism tuples.
    """
    cat = E.cat
    problems = []
    stats = {"tuples": 0, "unit_instances": 0, "assoc_instances": 0,
             "functoriality_samples": 0, "empty_slot_checks": 0}

    for objs in tuples:
        objs = tuple(objs)
        n = len(objs)
        if n > E.arity_bound:
            continue
        stats["tuples"] += 1
        en = E.obj(objs)

        # unit law: all-unary substitution after tensoring the units
        units = E.mor(tuple(E.unit(x) for x in objs))
        sub = E.subst(tuple((x,) for x in objs))
        if not cat.equal_mor(cat.compose(units, sub), cat.identity(en)):
            problems.append("unit law (units then subst) fails at %s" % (E.name,))
        stats["unit_instances"] += 1

        # unit law: single-block substitution after the unit of the tensor
        sub1 = E.subst((objs,))
        if not cat.equal_mor(cat.compose(E.unit(en), sub1), cat.identity(en)):
            problems.append("unit law (unit of tensor) fails")
        stats["unit_instances"] += 1

        # associativity over all 2-level nestings
        for outer in compositions(n):
            blocks = split_by(objs, outer)
            for mids in itertools.product(*[compositions(len(b)) for b in blocks]):
                nested_parts = [split_by(b, m) for b, m in zip(blocks, mids)]
                inner_sigmas = [E.subst(parts) for parts in nested_parts]
                outer_args = tuple(tuple(E.obj(p) for p in parts)
                                   for parts in nested_parts)
                lhs = cat.compose(E.mor(tuple(inner_sigmas)), E.subst(blocks))
                mid_flat = tuple(p for parts in nested_parts for p in parts)
                rhs = cat.compose(E.subst(outer_args), E.subst(mid_flat))
                if not cat.equal_mor(lhs, rhs):
                    problems.append("associativity fails at nesting %r of a %d-tuple"
                                    % ((outer, mids), n))
                stats["assoc_instances"] += 1

        # functoriality and naturality on sampled endomorphism tuples
        endos = [_sample_endos(cat, x) for x in objs]
        picks = list(itertools.islice(itertools.product(*endos), 4))
        for fs in picks:
            stats["functoriality_samples"] += 1
            efs = E.mor(fs)
            gs = tuple(endos[i][0] for i in range(n))
            comp = tuple(cat.compose(f, g) for f, g in zip(fs, gs))
            if not cat.equal_mor(E.mor(comp), cat.compose(efs, E.mor(gs))):
                problems.append("functoriality fails on sampled composite")
            # naturality of the unit in each slot
            for i, f in enumerate(fs):
                lhs = cat.compose(f, E.unit(cat.cod(f)))
                rhs = cat.compose(E.unit(cat.dom(f)), E.mor((f,)))
                if not cat.equal_mor(lhs, rhs):
                    problems.append("unit naturality fails in slot %d" % i)
        ids = E.mor(tuple(cat.identity(x) for x in objs))
        if not cat.equal_mor(ids, cat.identity(en)):
            problems.append("identity not preserved by the tensor")

        # empty-argument collapse (distributivity over the empty coproduct)
        for i in range(n):
            with_empty = objs[:i] + (cat.initial(),) + objs[i + 1:]
            if cat.size(E.obj(with_empty)) != 0:
                problems.append("tensor with an empty slot %d is not empty" % i)
            stats["empty_slot_checks"] += 1

    return CheckReport("multitensor-axioms", not problems, problems,
                       {"arity_bound": E.arity_bound, **stats})


# ---------------------------------------------------------------------------
# the graph endofunctor of a distributive multitensor


class GammaEndo:
    """The endofunctor on triangular graphs summing tensors over paths."""

    def __init__(self, E: Multitensor):
        self.E = E
        self.cat = E.cat

    def _parts(self, x: VGraph, a: int, b: int):
        """(paths, summand objects) for the hom between a and b."""
        paths, parts = [], []
        for p in increasing_paths(x.n, a, b):
            homs = [x.hom(p[t], p[t + 1]) for t in range(len(p) - 1)]
            paths.append(p)
            if len(homs) <= self.E.arity_bound:
                parts.append(self.E.obj(homs))
            else:
                if all(self.cat.size(h) > 0 for h in homs):
                    raise ArityError("path %r longer than the arity bound with "
                                     "inhabited homs" % (p,))
                parts.append(self.cat.initial())
        return paths, parts

    def apply(self, x: VGraph) -> VGraph:
        homs = {}
        for (a, b) in hom_pairs(x.n):
            _, parts = self._parts(x, a, b)
            homs[(a, b)] = self.cat.coproduct(parts)[0]
        return vgraph(self.cat, x.n, homs)

    def hom_injections(self, x: VGraph, a: int, b: int):
        paths, parts = self._parts(x, a, b)
        total, injs = self.cat.coproduct(parts)
        return paths, parts, total, injs

    def apply_graphmor(self, f: GraphMor) -> GraphMor:
        x, y, v = f.src, f.tgt, f.vmap
        gx, gy = self.apply(x), self.apply(y)
        homs = {}
        for (a, b) in hom_pairs(x.n):
            paths, _ = self._parts(x, a, b)
            ypaths = {}
            table = {}
            for e in self.cat.elements(gx.hom(a, b)):
                i, w = self.cat.copr_split(e)
                p = paths[i]
                q = tuple(v[t] for t in p)
                if any(q[s] >= q[s + 1] for s in range(len(q) - 1)):
                    raise MtkError("inhabited summand over a collapsing path")
                if (v[a], v[b]) not in ypaths:
                    ypaths[(v[a], v[b])] = increasing_paths(y.n, v[a], v[b])
                j = ypaths[(v[a], v[b])].index(q)
                fmors = tuple(f.hom_at(p[t], p[t + 1]) for t in range(len(p) - 1))
                table[e] = self.cat.copr_join(j, self.cat.apply(self.E.mor(fmors), w))
            va, vb = v[a], v[b]
            tgt_hom = gy.hom(va, vb) if va < vb else self.cat.initial()
            homs[(a, b)] = self.cat.make_mor(gx.hom(a, b), tgt_hom, table)
        return GraphMor(gx, gy, dict(v), homs)

    def distributor_inverse(self, slot_data):
        """Invert the canonical map from sums of tensors to the tensor of sums.

        ``slot_data`` is one (paths, parts, total, injections) tuple per slot.
        Returns a lookup: element of E(totals) -> (choice index tuple, element).
        Bijectivity of the comparison is asserted; it is exactly
        distributivity of the tensor on this diagram.
        """
        E, cat = self.E, self.cat
        totals = [d[2] for d in slot_data]
        full = E.obj(totals)
        lookup = {}
        count = 0
        choices = itertools.product(*[range(len(d[0])) for d in slot_data])
        for choice in choices:
            parts = [slot_data[s][1][c] for s, c in enumerate(choice)]
            injs = [slot_data[s][3][c] for s, c in enumerate(choice)]
            emor = E.mor(tuple(injs))
            for e in cat.elements(E.obj(parts)):
                img = cat.apply(emor, e)
                if img in lookup:
                    raise MtkError("tensor is not distributive on a path diagram")
                lookup[img] = (choice, e)
                count += 1
        if count != cat.size(full):
            raise MtkError("tensor is not distributive on a path diagram")
        return lookup


def gamma_apply(E: Multitensor, x: VGraph) -> VGraph:
    """Object map of the path-summing endofunctor on a triangular graph."""
    return GammaEndo(E).apply(x)


def gamma_monad(E: Multitensor, n: int) -> ComputableMonad:
    """The monad on graphs with vertex set 0..n induced by a distributive
    multitensor: unit includes along single-step paths, multiplication
    substitutes after distributing over inner path sums."""
    endo = GammaEndo(E)
    cat = E.cat
    fiber = GraphFiberCat(cat, n)

    def on_obj(x):
        return endo.apply(x)

    def on_mor(fm):
        gm = GraphMor(fm["src"], fm["tgt"], {i: i for i in range(n + 1)}, fm["homs"])
        out = endo.apply_graphmor(gm)
        return fiber.make(out.src, out.tgt, out.homs)

    def unit(x):
        gx = endo.apply(x)
        homs = {}
        for (a, b) in fiber.pairs:
            paths, _, total, injs = endo.hom_injections(x, a, b)
            step = paths.index((a, b))
            homs[(a, b)] = cat.compose(E.unit(x.hom(a, b)), injs[step])
        return fiber.make(x, gx, homs)

    def mult(x):
        gx = endo.apply(x)
        ggx = endo.apply(gx)
        homs = {}
        for (a, b) in fiber.pairs:
            opaths, _, _, _ = endo.hom_injections(gx, a, b)
            xinjs = {}
            table = {}
            for e in cat.elements(ggx.hom(a, b)):
                i, w = cat.copr_split(e)
                p = opaths[i]
                slot_data = []
                for t in range(len(p) - 1):
                    key = (p[t], p[t + 1])
                    if key not in xinjs:
                        xinjs[key] = endo.hom_injections(x, *key)
                    slot_data.append(xinjs[key])
                lookup = endo.distributor_inverse(slot_data)
                choice, w2 = lookup[w]
                inner_paths = [slot_data[t][0][c] for t, c in enumerate(choice)]
                nested = tuple(
                    tuple(x.hom(q[s], q[s + 1]) for s in range(len(q) - 1))
                    for q in inner_paths)
                sig = E.subst(nested)
                con = inner_paths[0]
                for q in inner_paths[1:]:
                    con = con + q[1:]
                tpaths, _, _, tinjs = endo.hom_injections(x, a, b)
                j = tpaths.index(con)
                table[e] = cat.apply(cat.compose(sig, tinjs[j]), w2)
            homs[(a, b)] = cat.make_mor(ggx.hom(a, b), gx.hom(a, b), table)
        return fiber.make(ggx, gx, homs)

    return ComputableMonad(fiber, "Gamma(%s,n=%d)" % (E.name, n),
                           on_obj, on_mor, unit, mult)


class ComposedEndo:
    """Composite of two graph endofunctors over Set."""

    def __init__(self, outer, inner):
        self.outer, self.inner = outer, inner
        self.cat = inner.cat

    def apply(self, x):
        return self.outer.apply(self.inner.apply(x))

    def apply_graphmor(self, f):
        return self.outer.apply_graphmor(self.inner.apply_graphmor(f))


class ConstantEndo:
    """Constant-on-homs endofunctor: every hom becomes the same fixed object."""

    def __init__(self, cat: BaseCat, value):
        self.cat = cat
        self.value = value

    def apply(self, x):
        return vgraph(self.cat, x.n, {p: self.value for p in hom_pairs(x.n)})

    def apply_graphmor(self, f):
        gx, gy = self.apply(f.src), self.apply(f.tgt)
        homs = {}
        for p in hom_pairs(f.src.n):
            va, vb = f.vmap[p[0]], f.vmap[p[1]]
            if not va < vb:
                raise MtkError("constant endofunctor applied over a collapsing map")
            homs[p] = self.cat.identity(self.value)
        return GraphMor(gx, gy, dict(f.vmap), homs)


def tbar(T, objs):
    """Evaluate a graph endofunctor on the sequence graph of a tuple and read
    off the hom from the first to the last vertex."""
    objs = tuple(objs)
    seq = sequence_graph(T.cat, objs)
    return T.apply(seq).hom(0, len(objs))


def check_pathlike(T, graphs) -> CheckReport:
    """Check that the canonical maps from path-indexed sums are bijections.

    Only strictly increasing vertex sequences can contribute inhabited
    summands on a triangular graph; a sample of collapsing sequences is
    verified to contribute nothing.
    """
    cat = T.cat
    problems = []
    stats = {"graphs": 0, "pairs": 0, "degenerate_sequences": 0}
    for x in graphs:
        stats["graphs"] += 1
        tx = T.apply(x)
        for (a, b) in hom_pairs(x.n):
            stats["pairs"] += 1
            comps, parts = [], []
            for p in increasing_paths(x.n, a, b):
                m = T.apply_graphmor(path_morphism(x, list(p)))
                comps.append(m.hom_at(0, len(p) - 1))
                parts.append(cat.dom(comps[-1]))
            total, _ = cat.coproduct(parts)
            pi = cat.cotuple(total, comps) if comps else cat.from_initial(tx.hom(a, b))
            if not mor_is_iso(cat, pi):
                problems.append("path comparison not bijective at %r" % ((a, b),))
            # a few collapsing sequences: their summands must be empty
            for t in range(x.n + 1):
                if not (a < t < b):
                    verts = [a, t, b]
                    homs = [x.hom(verts[s], verts[s + 1])
                            if verts[s] < verts[s + 1] else cat.initial()
                            for s in range(2)]
                    if cat.size(tbar(T, homs)) != 0:
                        problems.append("collapsing sequence %r has an inhabited summand"
                                        % (verts,))
                    stats["degenerate_sequences"] += 1
    return CheckReport("path-like", not problems, problems, stats)


def _decompositions(cat: BaseCat, x):
    """Canonical coproduct decompositions of an object used for the
    distributivity check: empty, trivial, with-empty, and (over set-families)
    the full splitting into single elements."""
    decomps = [[x], [x, cat.initial()]]
    if isinstance(cat, CopresheafCat) and cat.base.is_discrete():
        elems = cat.elements(x)
        if len(elems) >= 2:
            singles = []
            for (o, lab) in elems:
                singles.append(cat.make_obj({o: finset([lab])}))
            decomps.append(singles)
    return decomps


def check_distributive(T, tuples) -> CheckReport:
    """Compare the tensor of a coproduct against the coproduct of tensors,
    one variable at a time, over canonical decompositions of each slot."""
    cat = T.cat
    problems = []
    stats = {"tuples": 0, "comparisons": 0}
    for objs in tuples:
        objs = tuple(objs)
        stats["tuples"] += 1
        for slot in range(len(objs)):
            if cat.size(tbar(T, objs[:slot] + (cat.initial(),) + objs[slot + 1:])) != 0:
                problems.append("tensor with an empty slot %d not empty" % slot)
            for parts in _decompositions(cat, objs[slot]):
                total, injs = cat.coproduct(parts)
                comps = []
                for part, inj in zip(parts, injs):
                    seq_src = sequence_graph(cat, objs[:slot] + (part,) + objs[slot + 1:])
                    seq_tgt = sequence_graph(cat, objs[:slot] + (total,) + objs[slot + 1:])
                    homs = {}
                    for (i, j) in hom_pairs(seq_src.n):
                        if j == i + 1:
                            homs[(i, j)] = inj if i == slot else \
                                cat.identity(seq_src.hom(i, j))
                        else:
                            homs[(i, j)] = cat.from_initial(cat.initial())
                    gm = GraphMor(seq_src, seq_tgt,
                                  {t: t for t in range(seq_src.n + 1)}, homs)
                    comps.append(T.apply_graphmor(gm).hom_at(0, seq_src.n))
                sum_obj, _ = cat.coproduct([cat.dom(c) for c in comps])
                cmp_map = cat.cotuple(sum_obj, comps) if comps else \
                    cat.from_initial(tbar(T, objs[:slot] + (total,) + objs[slot + 1:]))
                if not mor_is_iso(cat, cmp_map):
                    problems.append("coproduct not preserved in slot %d" % slot)
                stats["comparisons"] += 1
    return CheckReport("distributive", not problems, problems, stats)


# ---------------------------------------------------------------------------
# E-categories


@dataclass
class PlainGraph:
    """A graph for enrichment purposes: homs for every ordered vertex pair."""

    cat: BaseCat
    verts: tuple
    homs: dict  # (a, b) -> base object

    def hom(self, a, b):
        return self.homs.get((a, b), self.cat.initial())

    def vertex_sequences(self, length):
        return [tuple(s) for s in itertools.product(self.verts, repeat=length + 1)]


@dataclass
class ECategoryStructure:
    """Composition maps kappa over vertex sequences, one per 1..bound steps."""

    tensor: Multitensor
    graph: PlainGraph
    kappa: dict  # vertex sequence tuple -> base morphism


def _seq_homs(graph: PlainGraph, seq):
    return tuple(graph.hom(seq[i], seq[i + 1]) for i in range(len(seq) - 1))


def _assoc_instances(graph: PlainGraph, bound: int, total: int):
    """(outer sequence, refinement per step) pairs whose refined length is
    ``total``; refinements are vertex paths replacing single steps."""
    out = []
    for k in range(1, total + 1):
        for outer in graph.vertex_sequences(k):
            for mids in _refinements(graph, outer, total - k + 1, bound):
                out.append((outer, mids))
    return out


def _refinements(graph: PlainGraph, outer, extra_budget, bound):
    """All ways to refine each step of ``outer`` into a path, with the total
    refined length equal to len(outer)-1 + extra_budget - 1 ... enumerated
    directly by block lengths."""
    k = len(outer) - 1
    total = k + extra_budget - 1
    results = []
    for blocks in compositions(total):
        if len(blocks) != k:
            continue
        per_step = []
        for p in range(k):
            a, b = outer[p], outer[p + 1]
            paths = []
            for mid in itertools.product(graph.verts, repeat=blocks[p] - 1):
                paths.append((a,) + mid + (b,))
            per_step.append(paths)
        for choice in itertools.product(*per_step):
            results.append(choice)
    return results


def ecat_check(E: Multitensor, struct: ECategoryStructure) -> CheckReport:
    """Exhaustive unit and associativity check for a candidate structure."""
    cat = E.cat
    g = struct.graph
    problems = []
    stats = {"unit_instances": 0, "assoc_instances": 0}
    bound = E.arity_bound
    for seq, kap in struct.kappa.items():
        homs = _seq_homs(g, seq)
        if cat.obj_key(cat.dom(kap)) != cat.obj_key(E.obj(homs)) or \
                cat.obj_key(cat.cod(kap)) != cat.obj_key(g.hom(seq[0], seq[-1])):
            problems.append("kappa at %r has wrong endpoints" % (seq,))
    for a in g.verts:
        for b in g.verts:
            seq = (a, b)
            kap = struct.kappa.get(seq)
            if kap is None:
                problems.append("missing kappa at %r" % (seq,))
                continue
            lhs = cat.compose(E.unit(g.hom(a, b)), kap)
            if not cat.equal_mor(lhs, cat.identity(g.hom(a, b))):
                problems.append("unit law fails at %r" % (seq,))
            stats["unit_instances"] += 1
    for total in range(1, bound + 1):
        for outer, refinement in _assoc_instances(g, bound, total):
            k = len(outer) - 1
            refined = refinement[0]
            for q in refinement[1:]:
                refined = refined + q[1:]
            inner_kaps = tuple(struct.kappa[q] for q in refinement)
            lhs = cat.compose(E.mor(inner_kaps), struct.kappa[outer])
            nested = tuple(_seq_homs(g, q) for q in refinement)
            rhs = cat.compose(E.subst(nested), struct.kappa[refined])
            if not cat.equal_mor(lhs, rhs):
                problems.append("associativity fails at outer=%r refinement=%r"
                                % (outer, refinement))
            stats["assoc_instances"] += 1
    return CheckReport("e-category", not problems, problems, stats)


def ecat_enumerate(E: Multitensor, graph: PlainGraph, bound: int,
                   cap: int = 2 * 10 ** 6) -> list:
    """All E-category structures on the graph, by staged brute force.

    Candidates for the length-m composition maps are filtered by every
    axiom instance whose refined length is m, so higher stages only extend
    consistent partial families.  Raises when the candidate count would
    exceed the cap.
    """
    cat = E.cat
    families = [{}]
    for m in range(1, bound + 1):
        seqs = graph.vertex_sequences(m)
        cand_lists = []
        for seq in seqs:
            homs = _seq_homs(graph, seq)
            cands = list(cat.all_mors(E.obj(homs), graph.hom(seq[0], seq[-1])))
            cand_lists.append(cands)
        total_new = 1
        for c in cand_lists:
            total_new *= max(1, len(c))
        if total_new * max(1, len(families)) > cap:
            raise MtkError("enumeration bound exceeded")
        instances = _assoc_instances(graph, bound, m)
        new_families = []
        for fam in families:
            for choice in itertools.product(*cand_lists):
                cand = dict(fam)
                cand.update(dict(zip(seqs, choice)))
                ok = True
                if m == 1:
                    for seq in seqs:
                        lhs = cat.compose(E.unit(graph.hom(seq[0], seq[-1])),
                                          cand[seq])
                        if not cat.equal_mor(lhs, cat.identity(graph.hom(seq[0], seq[-1]))):
                            ok = False
                            break
                if ok:
                    for outer, refinement in instances:
                        refined = refinement[0]
                        for q in refinement[1:]:
                            refined = refined + q[1:]
                        inner_kaps = tuple(cand[q] for q in refinement)
                        lhs = cat.compose(E.mor(inner_kaps), cand[outer])
                        nested = tuple(_seq_homs(graph, q) for q in refinement)
                        rhs = cat.compose(E.subst(nested), cand[refined])
                        if not cat.equal_mor(lhs, rhs):
                            ok = False
                            break
                if ok:
                    new_families.append(cand)
        families = new_families
    return [ECategoryStructure(E, graph, fam) for fam in families]
