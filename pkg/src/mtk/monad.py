"""Algebras of computable monads and their coequalisers.

Coequalisers of algebra maps are computed by the sequential construction:
coequalise in the base, then repeatedly coequalise the two ways of pushing
the monad's structure through the previous step, until two consecutive
connecting maps become isomorphisms.  A stabilisation witness (the two
bijections) is required before the engine ever reports success; a plain
congruence-closure oracle cross-checks every run.

The same engine computes the left adjoint to restriction along a monad
morphism, as the reflexive coequaliser of the morphism's two actions on a
free algebra, and from that the monad induced by the adjunction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cat import BaseCat, induce_along_epi, iso_from_commutation, mor_is_epi, mor_is_iso
from .errors import MtkError, NoStabilisation
from .fin import label_str
from .report import CheckReport


@dataclass
class ComputableMonad:
    """A monad with computable action on objects and morphisms.

    Finiteness certificate: objects of the base categories here are finite
    and the object map is computable, so applying the monad to a finite
    object always yields a finite, enumerable one.
    """

    cat: BaseCat
    name: str
    _on_obj: object
    _on_mor: object
    _unit: object
    _mult: object
    finitary: bool = True
    _memo: dict = field(default_factory=dict)

    def obj(self, x):
        key = ("obj", self.cat.obj_key(x))
        if key not in self._memo:
            self._memo[key] = self._on_obj(x)
        return self._memo[key]

    def mor(self, f):
        key = ("mor", self.cat.mor_key(f))
        if key not in self._memo:
            self._memo[key] = self._on_mor(f)
        return self._memo[key]

    def unit(self, x):
        key = ("unit", self.cat.obj_key(x))
        if key not in self._memo:
            self._memo[key] = self._unit(x)
        return self._memo[key]

    def mult(self, x):
        key = ("mult", self.cat.obj_key(x))
        if key not in self._memo:
            self._memo[key] = self._mult(x)
        return self._memo[key]


def identity_monad(cat: BaseCat) -> ComputableMonad:
    return ComputableMonad(cat, "Id", lambda x: x, lambda f: f,
                           lambda x: cat.identity(x), lambda x: cat.identity(x))


@dataclass
class Algebra:
    carrier: object
    action: object  # base morphism T(carrier) -> carrier

    def key(self, cat: BaseCat):
        return (cat.obj_key(self.carrier), cat.mor_key(self.action))


@dataclass
class AlgebraMor:
    src: Algebra
    tgt: Algebra
    map: object  # base morphism between the carriers


def free_algebra(T: ComputableMonad, x) -> Algebra:
    return Algebra(T.obj(x), T.mult(x))


def check_monad_laws(T: ComputableMonad, objs) -> CheckReport:
    objs = list(objs)
    cat = T.cat
    problems = []
    for x in objs:
        tx = T.obj(x)
        if not cat.equal_mor(cat.compose(T.unit(tx), T.mult(x)), cat.identity(tx)):
            problems.append("left unit law fails")
        if not cat.equal_mor(cat.compose(T.mor(T.unit(x)), T.mult(x)),
                             cat.identity(tx)):
            problems.append("right unit law fails")
        lhs = cat.compose(T.mult(tx), T.mult(x))
        rhs = cat.compose(T.mor(T.mult(x)), T.mult(x))
        if not cat.equal_mor(lhs, rhs):
            problems.append("associativity fails")
    return CheckReport("monad-laws", not problems, problems, {"objects": len(objs)})


def check_algebra(T: ComputableMonad, alg: Algebra) -> list:
    cat = T.cat
    problems = []
    if not cat.equal_mor(cat.compose(T.unit(alg.carrier), alg.action),
                         cat.identity(alg.carrier)):
        problems.append("algebra unit law fails")
    lhs = cat.compose(T.mor(alg.action), alg.action)
    rhs = cat.compose(T.mult(alg.carrier), alg.action)
    if not cat.equal_mor(lhs, rhs):
        problems.append("algebra associativity fails")
    return problems


def check_algebra_mor(T: ComputableMonad, f: AlgebraMor) -> list:
    cat = T.cat
    lhs = cat.compose(T.mor(f.map), f.tgt.action)
    rhs = cat.compose(f.src.action, f.map)
    if not cat.equal_mor(lhs, rhs):
        return ["map does not commute with the actions"]
    return []


@dataclass
class MonadMorphism:
    src: ComputableMonad
    tgt: ComputableMonad
    _component: object

    def at(self, x):
        return self._component(x)


def check_monad_morphism(phi: MonadMorphism, objs) -> CheckReport:
    """Naturality plus compatibility with units and multiplications."""
    M, S = phi.src, phi.tgt
    cat = M.cat
    problems = []
    for x in objs:
        if not cat.equal_mor(cat.compose(M.unit(x), phi.at(x)), S.unit(x)):
            problems.append("unit compatibility fails")
        lhs = cat.compose(M.mult(x), phi.at(x))
        rhs = cat.compose(cat.compose(phi.at(M.obj(x)), S.mor(phi.at(x))),
                          S.mult(x))
        if not cat.equal_mor(lhs, rhs):
            problems.append("multiplication compatibility fails")
        # naturality on a constant-collapse endomorphism when one exists
        elems = cat.elements(x)
        if elems:
            c = cat.make_mor(x, x, {e: elems[0] for e in elems})
            if not cat.equal_mor(cat.compose(M.mor(c), phi.at(x)),
                                 cat.compose(phi.at(x), S.mor(c))):
                problems.append("naturality fails on a sampled endomorphism")
    return CheckReport("monad-morphism", not problems, problems, {})


class AlgebraCat(BaseCat):
    """Eilenberg-Moore category of a computable monad."""

    def __init__(self, T: ComputableMonad, cfg: "CoeqConfig" = None):
        self.T = T
        self.base = T.cat
        self.cfg = cfg or CoeqConfig()

    def obj_key(self, x: Algebra):
        return x.key(self.base)

    def mor_key(self, f: AlgebraMor):
        return (f.src.key(self.base), f.tgt.key(self.base), self.base.mor_key(f.map))

    def dom(self, f):
        return f.src

    def cod(self, f):
        return f.tgt

    def identity(self, x):
        return AlgebraMor(x, x, self.base.identity(x.carrier))

    def compose(self, f, g):
        return AlgebraMor(f.src, g.tgt, self.base.compose(f.map, g.map))

    def elements(self, x):
        return self.base.elements(x.carrier)

    def apply(self, f, elem):
        return self.base.apply(f.map, elem)

    def make_mor(self, x, y, table):
        return AlgebraMor(x, y, self.base.make_mor(x.carrier, y.carrier, table))

    def initial(self):
        return free_algebra(self.T, self.base.initial())

    def from_initial(self, x):
        z = self.base.initial()
        free0 = self.initial()
        underlying = self.base.compose(self.T.mor(self.base.from_initial(x.carrier)),
                                       x.action)
        return AlgebraMor(free0, x, underlying)

    def coequalize(self, f, g):
        alg, proj, _ = alg_coeq_sequential(self.T, f, g, self.cfg)
        return alg, proj

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
        for m in self.base.all_mors(x.carrier, y.carrier):
            cand = AlgebraMor(x, y, m)
            if not check_algebra_mor(self.T, cand):
                yield cand

    def inverse(self, f):
        return AlgebraMor(f.tgt, f.src, self.base.inverse(f.map))

    def size_report(self, x):
        return self.base.size_report(x.carrier)


@dataclass
class CoeqConfig:
    """Budget and policy for the sequential construction.

    The step budget stands in for the regular cardinal of the abstract
    statement: the engine only reports success on a stabilisation witness,
    and after an exhausted budget it may attempt one truncated limit step
    before giving up.
    """

    budget: int = 16
    oracle_check: bool = True
    limit_step: bool = True
    fast_path: bool = True

    def __post_init__(self):
        if self.budget < 2:
            raise MtkError("budget must be at least 2")


@dataclass
class CoeqTrace:
    """Everything the construction produced, step by step."""

    objects: list  # Q_0, Q_1, ...
    qs: list  # q_m : Q_m -> Q_{m+1}
    vs: list  # v_m : T(Q_m) -> Q_{m+1}
    q_less: list  # q_{<m} : B -> Q_m
    stabilised_at: int
    policy: dict
    notes: list = field(default_factory=list)
    fast_path: bool = False

    def step_sizes(self, cat: BaseCat) -> list:
        return [cat.size(q) for q in self.objects]

    def to_json(self, cat: BaseCat) -> dict:
        def table(m):
            return sorted(
                [label_str(e), label_str(cat.apply(m, e))]
                for e in cat.elements(cat.dom(m)))

        return {
            "step_sizes": self.step_sizes(cat),
            "stabilised_at": self.stabilised_at,
            "fast_path": self.fast_path,
            "policy": dict(self.policy),
            "notes": list(self.notes),
            "q_tables": [table(q) for q in self.qs],
        }


def _underlying_pair(T: ComputableMonad, f: AlgebraMor, g: AlgebraMor):
    cat = T.cat
    if cat.obj_key(f.src.carrier) != cat.obj_key(g.src.carrier) or \
            cat.obj_key(f.tgt.carrier) != cat.obj_key(g.tgt.carrier):
        raise MtkError("maps are not parallel")
    for h in (f, g):
        bad = check_algebra_mor(T, h)
        if bad:
            raise MtkError("input is not an algebra map: %s" % bad)
    return f.map, g.map


def alg_coeq_sequential(T: ComputableMonad, f: AlgebraMor, g: AlgebraMor,
                        cfg: CoeqConfig = None):
    """Coequaliser of algebra maps by the sequential construction.

    Returns (algebra, projection, trace).  Success requires the witness:
    two consecutive connecting maps that are bijections; the quotient
    algebra is then the stabilised object with action v composed with the
    inverse of q.
    """
    cfg = cfg or CoeqConfig()
    cat = T.cat
    uf, ug = _underlying_pair(T, f, g)
    b = f.tgt.action
    B = f.tgt.carrier

    objects = [B]
    qs, vs, q_less = [], [], [cat.identity(B)]
    notes = []

    q1_obj, q0 = cat.coequalize(uf, ug)
    objects.append(q1_obj)
    qs.append(q0)
    vs.append(cat.compose(b, q0))
    q_less.append(q0)
    if not cat.equal_mor(cat.compose(T.unit(B), vs[0]), qs[0]):
        raise MtkError("defining equation q_0 = v_0 after the unit fails")

    def inductive_step(note=None):
        m = len(qs) - 1
        qm, vm = qs[m], vs[m]
        map_a = cat.compose(T.mult(objects[m]), T.mor(qm))
        map_b = T.mor(vm)
        nxt, proj = cat.coequalize(map_a, map_b)
        objects.append(nxt)
        vs.append(proj)
        qs.append(cat.compose(T.unit(objects[m + 1]), proj))
        q_less.append(cat.compose(q_less[-1], qs[-1]))
        # recorded maps must satisfy the defining equations of the construction
        if not cat.equal_mor(cat.compose(vm, qs[m + 1]),
                             cat.compose(T.mor(qm), vs[m + 1])):
            raise MtkError("trace equation q.v = v.Tq fails at step %d" % (m + 1,))
        if note:
            notes.append(note)

    def stabilised():
        for n in range(len(qs) - 1):
            if mor_is_iso(cat, qs[n]) and mor_is_iso(cat, qs[n + 1]):
                return n
        return None

    found = None
    while found is None and len(qs) <= cfg.budget:
        inductive_step()
        found = stabilised()
    if found is None and cfg.limit_step:
        # truncated limit step: the colimit of the finite chain is its last
        # object, the obstruction maps are identities, and the coequaliser
        # below reduces to one more inductive step, after which we re-test.
        colim, _ = cat.chain_colimit(objects[:-1], qs[:-1])
        o1 = cat.identity(T.obj(colim))
        if not mor_is_iso(cat, o1):
            raise MtkError("unreachable: truncated obstruction map not invertible")
        inductive_step(note="truncated-limit-step")
        found = stabilised()
    if found is None:
        raise NoStabilisation(cfg.budget)

    n = found
    act = cat.compose(vs[n], cat.inverse(qs[n]))
    alg = Algebra(objects[n], act)
    bad = check_algebra(T, alg)
    if bad:
        raise MtkError("stabilised object is not an algebra: %s" % bad)
    proj = AlgebraMor(f.tgt, alg, q_less[n])
    if check_algebra_mor(T, proj):
        raise MtkError("projection is not an algebra map")
    trace = CoeqTrace(objects, qs, vs, q_less, n,
                      {"budget": cfg.budget, "limit_step": cfg.limit_step},
                      notes)
    if cfg.oracle_check:
        oracle_alg, oracle_proj = alg_coeq_oracle(T, f, g)
        compare_coequalisers(T, proj, AlgebraMor(f.tgt, oracle_alg, oracle_proj.map))
    return alg, proj, trace


def alg_coeq_oracle(T: ComputableMonad, f: AlgebraMor, g: AlgebraMor):
    """Congruence-closure oracle for the same coequaliser.

    Builds the smallest quotient of the target carrier containing all
    (f a, g a) such that the action descends, by iterated union-find
    closure; always terminates on finite carriers.
    """
    cat = T.cat
    uf, ug = _underlying_pair(T, f, g)
    b = f.tgt.action
    B = f.tgt.carrier
    pairs = [(cat.apply(uf, e), cat.apply(ug, e))
             for e in cat.elements(f.src.carrier)]
    while True:
        Q, proj = cat.quotient_by(B, pairs)
        tproj = T.mor(proj)
        if not mor_is_epi(cat, tproj):
            raise MtkError("monad does not preserve surjections; oracle inapplicable")
        seen = {}
        new_pairs = []
        for u in cat.elements(T.obj(B)):
            key = cat.apply(tproj, u)
            img = cat.apply(b, u)
            if key in seen:
                prev = seen[key]
                if cat.apply(proj, prev) != cat.apply(proj, img):
                    new_pairs.append((prev, img))
            else:
                seen[key] = img
        if not new_pairs:
            break
        pairs.extend(new_pairs)
    act_table = {}
    for u in cat.elements(T.obj(B)):
        act_table[cat.apply(tproj, u)] = cat.apply(proj, cat.apply(b, u))
    act = cat.make_mor(T.obj(Q), Q, act_table)
    alg = Algebra(Q, act)
    bad = check_algebra(T, alg)
    if bad:
        raise MtkError("oracle produced a non-algebra: %s" % bad)
    return alg, AlgebraMor(f.tgt, alg, proj)


def compare_coequalisers(T: ComputableMonad, pa: AlgebraMor, pb: AlgebraMor):
    """The unique isomorphism commuting with the two projections.

    Disagreement between the sequential construction and the oracle is a
    build-stopping defect, so any failure here raises.
    """
    cat = T.cat
    iso = iso_from_commutation(cat, pa.map, pb.map)
    cand = AlgebraMor(pa.tgt, pb.tgt, iso)
    if check_algebra_mor(T, cand):
        raise MtkError("comparison isomorphism is not an algebra map")
    return cand


def check_simple_hypothesis(T: ComputableMonad, f: AlgebraMor, g: AlgebraMor) -> bool:
    """Do T and T.T preserve the coequaliser of the underlying pair?"""
    cat = T.cat
    uf, ug = _underlying_pair(T, f, g)
    q, proj = cat.coequalize(uf, ug)

    def preserved(power):
        pf, pg, pproj = uf, ug, proj
        for _ in range(power):
            pf, pg, pproj = T.mor(pf), T.mor(pg), T.mor(pproj)
        q2, proj2 = cat.coequalize(pf, pg)
        try:
            cmp_map = induce_along_epi(cat, proj2, pproj)
        except MtkError:
            return False
        return mor_is_iso(cat, cmp_map)

    return preserved(1) and preserved(2)


def phi_star(phi: MonadMorphism, alg: Algebra) -> Algebra:
    """Restriction of an algebra along a monad morphism."""
    cat = phi.src.cat
    out = Algebra(alg.carrier, cat.compose(phi.at(alg.carrier), alg.action))
    bad = check_algebra(phi.src, out)
    if bad:
        raise MtkError("restricted action is not an algebra: %s" % bad)
    return out


@dataclass
class PhiShriekResult:
    algebra: Algebra  # algebra of the target monad
    coeq_map: AlgebraMor  # from the free algebra on the carrier
    trace: CoeqTrace


def phi_shriek(phi: MonadMorphism, alg: Algebra, cfg: CoeqConfig = None) -> PhiShriekResult:
    """Left adjoint to restriction, computed as the reflexive coequaliser of
    the two actions on the free algebra, with a fast path when the target
    monad and its square preserve the underlying coequaliser."""
    cfg = cfg or CoeqConfig()
    M, S = phi.src, phi.tgt
    cat = S.cat
    x = alg.action
    X = alg.carrier
    free_mid = free_algebra(S, M.obj(X))
    free_x = free_algebra(S, X)
    uf = cat.compose(S.mor(phi.at(X)), S.mult(X))
    ug = S.mor(x)
    f = AlgebraMor(free_mid, free_x, uf)
    g = AlgebraMor(free_mid, free_x, ug)
    # the pair is reflexive: the free image of the unit is a common section
    section = S.mor(M.unit(X))
    for h in (uf, ug):
        if not cat.equal_mor(cat.compose(section, h), cat.identity(S.obj(X))):
            raise MtkError("common section fails; the pair is not reflexive")

    if cfg.fast_path and check_simple_hypothesis(S, f, g):
        q1, q0 = cat.coequalize(uf, ug)
        w = induce_along_epi(cat, S.mor(q0), cat.compose(S.mult(X), q0))
        out = Algebra(q1, w)
        bad = check_algebra(S, out)
        if bad:
            raise MtkError("fast-path algebra invalid: %s" % bad)
        proj = AlgebraMor(free_x, out, q0)
        if check_algebra_mor(S, proj):
            raise MtkError("fast-path projection is not an algebra map")
        trace = CoeqTrace([S.obj(X), q1], [q0], [cat.compose(S.mult(X), q0)],
                          [cat.identity(S.obj(X)), q0], 1,
                          {"budget": cfg.budget, "limit_step": cfg.limit_step},
                          ["fast-path: monad and its square preserve the coequaliser"],
                          fast_path=True)
        if cfg.oracle_check:
            oracle_alg, oracle_proj = alg_coeq_oracle(S, f, g)
            compare_coequalisers(S, proj, AlgebraMor(free_x, oracle_alg,
                                                     oracle_proj.map))
        return PhiShriekResult(out, proj, trace)

    out, proj, trace = alg_coeq_sequential(S, f, g, cfg)
    return PhiShriekResult(out, proj, trace)


def induced_monad(phi: MonadMorphism, cfg: CoeqConfig = None) -> ComputableMonad:
    """The monad on algebras of the source generated by the adjunction.

    The unit is the composite of the target monad's unit with the
    coequalising map (equivalently, the unique fill-in of the defining
    square, which is verified); the multiplication is computed by the
    step-indexed recursion along the trace of the second application.
    """
    cfg = cfg or CoeqConfig()
    M, S = phi.src, phi.tgt
    cat = S.cat
    acat = AlgebraCat(M, cfg)
    shrieks = {}

    def shriek(alg: Algebra) -> PhiShriekResult:
        key = alg.key(cat)
        if key not in shrieks:
            shrieks[key] = phi_shriek(phi, alg, cfg)
        return shrieks[key]

    def on_obj(alg: Algebra) -> Algebra:
        return phi_star(phi, shriek(alg).algebra)

    def on_mor(h: AlgebraMor) -> AlgebraMor:
        sx, sy = shriek(h.src), shriek(h.tgt)
        k = cat.compose(S.mor(h.map), sy.coeq_map.map)
        m = induce_along_epi(cat, sx.coeq_map.map, k)
        out = AlgebraMor(on_obj(h.src), on_obj(h.tgt), m)
        if check_algebra_mor(M, out):
            raise MtkError("induced map on quotients is not an algebra map")
        return out

    def unit(alg: Algebra) -> AlgebraMor:
        sx = shriek(alg)
        eta = cat.compose(S.unit(alg.carrier), sx.coeq_map.map)
        # defining square: the unit after the action equals the coequalising
        # map after the monad morphism's component
        lhs = cat.compose(alg.action, eta)
        rhs = cat.compose(phi.at(alg.carrier), sx.coeq_map.map)
        if not cat.equal_mor(lhs, rhs):
            raise MtkError("unit square of the induced monad fails")
        out = AlgebraMor(alg, on_obj(alg), eta)
        if check_algebra_mor(M, out):
            raise MtkError("induced unit is not an algebra map")
        return out

    def mult(alg: Algebra) -> AlgebraMor:
        sx = shriek(alg)
        t_alg = on_obj(alg)
        st = shriek(t_alg)
        a = sx.algebra.action  # S(Q) -> Q
        # mu^(1) through the first coequaliser, then one step per recorded v
        mu = induce_along_epi(cat, st.trace.qs[0], a)
        for m in range(st.trace.stabilised_at - 1):
            v_next = st.trace.vs[m + 1]
            mu = induce_along_epi(cat, v_next, cat.compose(S.mor(mu), a))
        out = AlgebraMor(on_obj(t_alg), t_alg, mu)
        if check_algebra_mor(M, out):
            raise MtkError("induced multiplication is not an algebra map")
        return out

    return ComputableMonad(acat, "induced(%s->%s)" % (M.name, S.name),
                           on_obj, on_mor, unit, mult)
