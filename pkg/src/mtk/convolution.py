"""Standard convolution on functors out of the linear part, via coends.

The convolution tensor at a target object is the quotient of the sum of
hom x values by the moves that slide linear maps between a multimap and
the arguments.  The identification with the lifted functor operad goes
through the common presentation: both sides are quotients of the plain
tensor of the underlying families, so the comparison is the induced map
between those quotients, and it must be a natural bijection compatible
with substitution.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .cat import CopresheafCat, iso_from_commutation
from .copresheaf import Copresheaf, all_copresheaves, check_functor_laws, copresheaf
from .errors import ArityError, MtkError
from .fin import FinSet, discrete_cat, finfn, finset, quotient_by
from .monad import Algebra, CoeqConfig, check_algebra
from .multicat import Multicat, linear_part
from .multitensor import (
    ECategoryStructure,
    Multitensor,
    PlainGraph,
    ecat_check,
    ecat_enumerate,
    mt_from_multicat,
    unary_part,
)
from .lifting import lift_object, lift_substitution
from .report import CheckReport


@dataclass
class CoendPresentation:
    """Generators, dinaturality relations, and the resulting quotient at one
    target object."""

    target: object
    generators: FinSet
    relations: list
    quotient: FinSet
    projection: object


def _linear_refs(mc: Multicat, tgt=None):
    for ref in mc.multimaps(arity=1):
        if tgt is None or ref[1] == tgt:
            yield ref


def _coend_at(mc: Multicat, xs, c) -> CoendPresentation:
    """Quotient of sum over source tuples of hom x values, at target c.

    Relations are generated exactly by one-variable linear moves: a linear
    map may act on the multimap or on the argument, with equal results.
    """
    n = len(xs)
    gens = []
    for ref in mc.multimaps(arity=n):
        if ref[1] != c:
            continue
        pools = [xs[i].at(ref[0][i]).labels for i in range(n)]
        for vals in itertools.product(*pools):
            gens.append((ref, vals))
    gen_set = finset(gens)
    relations = []
    for (ref, vals) in gens:
        for i in range(n):
            for g in _linear_refs(mc, tgt=None):
                if g[1] != ref[0][i]:
                    continue
                inners = tuple(mc.identity_ref(b) if t != i else g
                               for t, b in enumerate(ref[0]))
                moved = mc.substitute(ref, inners)
                d = g[0][0]
                for x in xs[i].at(d):
                    lhs = (moved,
                           vals[:i] + (x,) + vals[i + 1:])
                    gx = xs[i].act(d, ref[0][i], g[2])(x)
                    rhs = (ref, vals[:i] + (gx,) + vals[i + 1:])
                    relations.append((lhs, rhs))
    quot, proj = quotient_by(gen_set, relations)
    return CoendPresentation(c, gen_set, relations, quot, proj)


def coend_tensor(mc: Multicat, xs) -> Copresheaf:
    """The convolution tensor of functors on the linear part."""
    xs = tuple(xs)
    if not 1 <= len(xs) <= mc.arity_bound:
        raise ArityError("tuple length %d outside 1..%d" % (len(xs), mc.arity_bound))
    lp = linear_part(mc)
    for x in xs:
        if check_functor_laws(x):
            raise MtkError("input is not a functor on the linear part")
    pres = {c: _coend_at(mc, xs, c) for c in mc.objects}
    values = {c: pres[c].quotient for c in mc.objects}
    actions = {}
    for (a, b, g) in lp.mors():
        if a == b and g == lp.identities[a]:
            continue
        gref = ((a,), b, g)
        table = {}
        for lab in pres[a].generators:
            ref, vals = lab
            out = (mc.substitute(gref, (ref,)), vals)
            cls = pres[a].projection(lab)
            img = pres[b].projection(out)
            if table.setdefault(cls, img) != img:
                raise MtkError("linear action is not well defined on classes")
        actions[(a, b, g)] = finfn(values[a], values[b], table)
    return copresheaf(lp, values, actions)


def coend_presentations(mc: Multicat, xs) -> dict:
    return {c: _coend_at(mc, tuple(xs), c) for c in mc.objects}


def convolution_multitensor(mc: Multicat) -> Multitensor:
    """Convolution as a multitensor on functors out of the linear part."""
    lp = linear_part(mc)
    ccat = CopresheafCat(lp)

    def fobj(objs):
        return coend_tensor(mc, objs)

    def fmor(fs):
        srcs = tuple(f.src for f in fs)
        tgts = tuple(f.tgt for f in fs)
        dom, cod = fobj(srcs), fobj(tgts)
        src_pres = coend_presentations(mc, srcs)
        tgt_pres = coend_presentations(mc, tgts)
        table = {}
        for c in mc.objects:
            proj = tgt_pres[c].projection
            for lab in src_pres[c].generators:
                ref, vals = lab
                out = (ref, tuple(fs[i].at(ref[0][i])(v)
                                  for i, v in enumerate(vals)))
                cls = src_pres[c].projection(lab)
                img = proj(out)
                if table.setdefault((c, cls), (c, img)) != (c, img):
                    raise MtkError("tensor of maps is not well defined on classes")
        return ccat.make_mor(dom, cod, table)

    def funit(x):
        cod = fobj((x,))
        pres = coend_presentations(mc, (x,))
        return ccat.make_mor(x, cod, {
            (c, lab): (c, pres[c].projection((mc.identity_ref(c), (lab,))))
            for c in mc.objects for lab in x.at(c)
        })

    def fsubst(nested):
        inner = tuple(fobj(b) for b in nested)
        dom = fobj(inner)
        flat = tuple(x for b in nested for x in b)
        cod = fobj(flat)
        dom_pres = coend_presentations(mc, inner)
        cod_pres = coend_presentations(mc, flat)
        inner_pres = [coend_presentations(mc, b) for b in nested]
        table = {}
        for c in mc.objects:
            for lab in dom_pres[c].generators:
                outer_ref, classes = lab
                reps = []
                for i, cls in enumerate(classes):
                    pres_i = inner_pres[i][outer_ref[0][i]]
                    rep = next(lb for lb in pres_i.generators
                               if pres_i.projection(lb) == cls)
                    reps.append(rep)
                res = mc.substitute(outer_ref, tuple(r[0] for r in reps))
                vals = tuple(v for r in reps for v in r[1])
                cls_dom = dom_pres[c].projection(lab)
                img = cod_pres[c].projection((res, vals))
                key = (c, cls_dom)
                if table.setdefault(key, (c, img)) != (c, img):
                    raise MtkError("substitution is not well defined on classes")
        return ccat.make_mor(dom, cod, table)

    return Multitensor(ccat, mc.arity_bound, "conv[%d objs]" % len(mc.objects),
                       fobj, fmor, funit, fsubst)


def promonoidal_check(mc: Multicat, max_arity: int = None) -> CheckReport:
    """Bijectivity of the induced comparison out of the middle-objects coend.

    Nullary configurations are excluded globally, so this reports
    promonoidality for the inhabited arities up to the bound only.
    """
    bound = max_arity or mc.arity_bound
    problems = []
    checked = 0
    from .multitensor import compositions, split_by
    for total in range(1, bound + 1):
        for srcs in itertools.product(mc.objects, repeat=total):
            for comp in compositions(total):
                blocks = split_by(srcs, comp)
                k = len(blocks)
                for c in mc.objects:
                    gens = []
                    for outer in mc.multimaps(arity=k):
                        if outer[1] != c:
                            continue
                        pools = []
                        for i, b in enumerate(blocks):
                            pools.append([r for r in mc.multimaps(arity=len(b))
                                          if r[0] == b and r[1] == outer[0][i]])
                        for inners in itertools.product(*pools):
                            gens.append((outer, inners))
                    gen_set = finset(gens)
                    relations = []
                    for (outer, inners) in gens:
                        for i in range(k):
                            for g in _linear_refs(mc):
                                if g[1] != outer[0][i]:
                                    continue
                                slots = tuple(mc.identity_ref(b) if t != i else g
                                              for t, b in enumerate(outer[0]))
                                moved_outer = mc.substitute(outer, slots)
                                for rho in mc.multimaps(arity=len(blocks[i])):
                                    if rho[0] != blocks[i] or rho[1] != g[0][0]:
                                        continue
                                    lhs = (moved_outer,
                                           inners[:i] + (rho,) + inners[i + 1:])
                                    rhs_i = mc.substitute(g, (rho,))
                                    rhs = (outer,
                                           inners[:i] + (rhs_i,) + inners[i + 1:])
                                    if lhs in gen_set and rhs in gen_set:
                                        relations.append((lhs, rhs))
                    quot, proj = quotient_by(gen_set, relations)
                    target = finset(r for r in mc.multimaps(arity=total)
                                    if r[0] == srcs and r[1] == c)
                    table = {}
                    ok = True
                    for (outer, inners) in gens:
                        img = mc.substitute(outer, inners)
                        cls = proj((outer, inners))
                        if table.setdefault(cls, img) != img:
                            ok = False
                    image = set(table.values())
                    if not ok or len(image) != len(table) or \
                            len(image) != len(target):
                        problems.append("comparison not bijective at blocks=%r "
                                        "target=%r" % (blocks, c))
                    checked += 1
    note = "nullary configurations excluded; checked arities 1..%d" % bound
    return CheckReport("promonoidal", not problems, problems,
                       {"configurations": checked, "note": note})


# ---------------------------------------------------------------------------
# identification of functors on the linear part with unary-part algebras


def algebra_from_copresheaf(mc: Multicat, E: Multitensor, x: Copresheaf) -> Algebra:
    """A functor on the linear part as an algebra of the unary tensor."""
    base = discrete_cat(mc.objects)
    ccat = CopresheafCat(base)
    carrier = copresheaf(base, {c: x.at(c) for c in mc.objects})
    e1x = E.obj((carrier,))
    table = {}
    for c in mc.objects:
        for (ref, vals) in e1x.at(c):
            d = ref[0][0]
            table[(c, (ref, vals))] = (c, x.act(d, c, ref[2])(vals[0]))
    action = ccat.make_mor(e1x, carrier, table)
    alg = Algebra(carrier, action)
    bad = check_algebra(unary_part(E), alg)
    if bad:
        raise MtkError("functor does not give an algebra: %s" % bad)
    return alg


def copresheaf_from_algebra(mc: Multicat, E: Multitensor, alg: Algebra) -> Copresheaf:
    lp = linear_part(mc)
    cat = E.cat
    e1 = E.obj((alg.carrier,))
    actions = {}
    for (a, b, g) in lp.mors():
        if a == b and g == lp.identities[a]:
            continue
        gref = ((a,), b, g)
        table = {}
        for lab in alg.carrier.at(a):
            img = cat.apply(alg.action, (b, (gref, (lab,))))
            table[lab] = img[1]
        actions[(a, b, g)] = finfn(alg.carrier.at(a), alg.carrier.at(b), table)
    return copresheaf(lp, {c: alg.carrier.at(c) for c in mc.objects}, actions)


def convolution_vs_lift(mc: Multicat, size_bound: int = 2,
                        cfg: CoeqConfig = None, max_arity: int = None) -> CheckReport:
    """Convolution against the lift, on every tuple of functors with values
    up to the bound: a natural isomorphism compatible with the coequalising
    maps and with substitution, or a build-stopping failure."""
    cfg = cfg or CoeqConfig()
    E = mt_from_multicat(mc)
    cat = E.cat
    lp = linear_part(mc)
    lcat = CopresheafCat(lp)
    bound = min(max_arity or mc.arity_bound, mc.arity_bound)
    problems = []
    checked = {"tuples": 0, "substitution_squares": 0}
    pool = all_copresheaves(lp, size_bound)

    def compare(xs):
        """The induced isomorphism between the two quotients of the plain
        tensor of the underlying families; returns (iso tables, lift run)."""
        algs = tuple(algebra_from_copresheaf(mc, E, x) for x in xs)
        lifted_alg, run = lift_object(E, algs, cfg)
        q = run.q_less(E)
        f_val = coend_tensor(mc, xs)
        pres = coend_presentations(mc, xs)
        # generators of the coend are literally the elements of the tensor
        p_mor = cat.make_mor(
            cat.dom(q),
            copresheaf(discrete_cat(mc.objects),
                       {c: f_val.at(c) for c in mc.objects}),
            {(c, lab): (c, pres[c].projection(lab))
             for c in mc.objects for lab in cat.dom(q).at(c)})
        iso = iso_from_commutation(cat, q, p_mor)
        # naturality in the linear maps: transported action matches
        fo = copresheaf_from_algebra(mc, E, lifted_alg)
        for (a, b, g) in lp.mors():
            for lab in fo.at(a):
                lhs = f_val.act(a, b, g)(iso.at(a)(lab))
                rhs = iso.at(b)(fo.act(a, b, g)(lab))
                if lhs != rhs:
                    return None, None, "comparison not natural in the linear maps"
        return iso, (lifted_alg, run, q), None

    for n in range(1, bound + 1):
        for xs in itertools.product(pool, repeat=n):
            checked["tuples"] += 1
            iso, _, err = compare(xs)
            if err or iso is None:
                problems.append("%s at a %d-tuple" % (err or "no isomorphism", n))

    base = discrete_cat(mc.objects)

    def as_family(x):
        return copresheaf(base, {c: x.at(c) for c in mc.objects})

    def family_mor(nt):
        dom_f, cod_f = as_family(nt.src), as_family(nt.tgt)
        return cat.make_mor(dom_f, cod_f,
                            {(c, lab): (c, nt.at(c)(lab))
                             for c in mc.objects for lab in nt.src.at(c)})

    def coend_proj(xs, dom):
        """Projection from a tensor of families onto the coend classes."""
        pres = coend_presentations(mc, xs)
        cod = copresheaf(base, {c: pres[c].quotient for c in mc.objects})
        return cat.make_mor(dom, cod,
                            {(c, lab): (c, pres[c].projection(lab))
                             for c in mc.objects for lab in dom.at(c)})

    # substitution squares on nested tuples over a small deterministic pool
    fmt = convolution_multitensor(mc)
    square_pool = sorted(pool, key=lambda x: (sum(len(x.at(c)) for c in mc.objects),
                                              x.key()))[:3]
    for k in range(1, bound + 1):
        for shape in itertools.product(range(1, bound + 1), repeat=k):
            if sum(shape) > bound:
                continue
            for flat_choice in itertools.product(square_pool, repeat=sum(shape)):
                nested, idx = [], 0
                for s in shape:
                    nested.append(tuple(flat_choice[idx:idx + s]))
                    idx += s
                nested = tuple(nested)
                flat = tuple(x for b in nested for x in b)
                algs_nested = tuple(tuple(algebra_from_copresheaf(mc, E, x)
                                          for x in b) for b in nested)
                sig_prime, inner, outer, bounds = lift_substitution(
                    E, algs_nested, cfg, return_runs=True)
                iso_out, _, err = compare(flat)
                if err:
                    problems.append(err)
                    continue
                # left: through the staged lifts, the substitution, and the
                # comparison isomorphism of the concatenated tuple
                inner_qs = tuple(inner.q_less(E, iv) for iv in bounds)
                lhs = cat.compose(E.mor(inner_qs), outer.q_less(E))
                lhs = cat.compose(lhs, cat.compose(sig_prime.map, iso_out))
                # right: through the coend projections and the convolution's
                # own substitution
                block_projs = tuple(
                    coend_proj(b, E.obj(tuple(as_family(x2) for x2 in b)))
                    for b in nested)
                step1 = E.mor(block_projs)
                sig_f = fmt.subst(nested)
                f_blocks = tuple(coend_tensor(mc, b) for b in nested)
                step2 = coend_proj(tuple(f_blocks), cat.cod(step1))
                rhs = cat.compose(cat.compose(step1, step2), family_mor(sig_f))
                if not cat.equal_mor(lhs, rhs):
                    problems.append("substitution square fails at shape %r" % (shape,))
                checked["substitution_squares"] += 1

    return CheckReport("convolution-vs-lift", not problems, problems,
                       {"size_bound": size_bound, "arity_bound": bound, **checked})


def ecat_ef_agreement(mc: Multicat, graph: PlainGraph,
                      cfg: CoeqConfig = None) -> CheckReport:
    """Structures enriched in the plain tensor with matching unary data
    against structures enriched in the convolution: explicit bijection."""
    cfg = cfg or CoeqConfig()
    E = mt_from_multicat(mc)
    cat = E.cat
    fmt = convolution_multitensor(mc)
    lcat = fmt.cat
    base = discrete_cat(mc.objects)
    problems = []

    f_structs = ecat_enumerate(fmt, graph, mc.arity_bound)

    # underlying graph and the unary data carved out by the functors
    under = PlainGraph(cat, graph.verts,
                       {p: copresheaf(base, {c: graph.hom(*p).at(c)
                                             for c in mc.objects})
                        for p in graph.homs})
    e_structs = ecat_enumerate(E, under, mc.arity_bound)
    matching = []
    for st in e_structs:
        ok = True
        for a in graph.verts:
            for b in graph.verts:
                alg = algebra_from_copresheaf(mc, E, graph.hom(a, b))
                if not cat.equal_mor(st.kappa[(a, b)], alg.action):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            matching.append(st)

    if len(matching) != len(f_structs):
        problems.append("counts differ: %d matching plain structures, %d "
                        "convolution structures" % (len(matching), len(f_structs)))

    # bijection by descending each matching structure to the coend quotients
    sigs = set()
    for st in matching:
        kappa_f = {}
        ok = True
        for seq, kap in st.kappa.items():
            homs = [graph.hom(seq[t], seq[t + 1]) for t in range(len(seq) - 1)]
            pres = coend_presentations(mc, tuple(homs))
            dom_f = fmt.obj(tuple(homs))
            tgt = graph.hom(seq[0], seq[-1])
            table = {}
            for c in mc.objects:
                for lab in cat.dom(kap).at(c):
                    cls = (c, pres[c].projection(lab))
                    img = cat.apply(kap, (c, lab))
                    if table.setdefault(cls, img) != img:
                        problems.append("composition at %r does not descend "
                                        "to the coend" % (seq,))
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
            kappa_f[seq] = lcat.make_mor(dom_f, tgt, table)
        if not ok:
            continue
        cand = ECategoryStructure(fmt, graph, kappa_f)
        rep = ecat_check(fmt, cand)
        if not rep.ok:
            problems.append("descended structure fails the axioms")
            continue
        sig = tuple(sorted((seq, lcat.mor_key(m)) for seq, m in kappa_f.items()))
        if sig in sigs:
            problems.append("descent is not injective")
        sigs.add(sig)
    for st in f_structs:
        sig = tuple(sorted((seq, lcat.mor_key(m)) for seq, m in st.kappa.items()))
        if sig not in sigs:
            problems.append("a convolution structure is not in the image")

    return CheckReport("ecat-ef-agreement", not problems, problems,
                       {"matching_structures": len(matching),
                        "convolution_structures": len(f_structs)})
