"""Finite, arity-bounded multicategories.

A multimap is referenced as ``(src, tgt, name)`` with ``src`` a nonempty
tuple of objects.  Nullary multimaps are excluded globally: every
substitution-indexing coproduct downstream stays finite because of this.
Hom-sets are stored sparsely; an absent key is the empty hom.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from .errors import ArityError, ValidationError
from .fin import FinCat, FinSet, check_fincat, finset


def mref(src, tgt, name):
    return (tuple(src), tgt, name)


@dataclass
class Multicat:
    objects: tuple
    arity_bound: int
    homs: dict  # (src tuple, tgt) -> tuple of element names
    identities: dict  # obj -> name, element of hom((obj,), obj)
    subst: dict  # (outer ref, tuple of inner refs) -> ref

    def hom(self, src, tgt) -> tuple:
        return self.homs.get((tuple(src), tgt), ())

    def multimaps(self, arity=None):
        for (src, tgt), elems in sorted(self.homs.items()):
            if arity is not None and len(src) != arity:
                continue
            for name in elems:
                yield mref(src, tgt, name)

    def identity_ref(self, obj):
        return mref((obj,), obj, self.identities[obj])

    def substitute(self, outer, inners):
        key = (outer, tuple(inners))
        if key not in self.subst:
            raise ValidationError("missing substitution entry for %r" % (key,))
        return self.subst[key]

    def to_json(self) -> dict:
        def ref_json(r):
            return {"src": list(r[0]), "tgt": r[1], "elem": r[2]}

        return {
            "objects": list(self.objects),
            "arity_bound": self.arity_bound,
            "multihoms": [
                {"src": list(src), "tgt": tgt, "elems": list(elems)}
                for (src, tgt), elems in sorted(self.homs.items())
            ],
            "identities": dict(sorted(self.identities.items())),
            "subst": [
                {"outer": ref_json(outer), "inners": [ref_json(i) for i in inners],
                 "result": ref_json(res)}
                for (outer, inners), res in sorted(self.subst.items())
            ],
        }


@dataclass
class ValidationReport:
    ok: bool
    violations: list
    gaps: list
    checked: dict

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": self.violations,
                "gaps": self.gaps, "checked": self.checked}


def _configurations(mc: Multicat, max_out):
    """All composable (outer, inners) with output arity <= max_out."""
    for outer in mc.multimaps():
        k = len(outer[0])
        # choose inner multimaps targeting the outer's source objects
        pools = []
        for b in outer[0]:
            pool = [r for r in mc.multimaps() if r[1] == b]
            pools.append(pool)
        for inners in itertools.product(*pools):
            out_arity = sum(len(i[0]) for i in inners)
            if out_arity <= max_out:
                yield outer, inners


def _con_src(inners):
    return tuple(x for i in inners for x in i[0])


def validate(mc: Multicat) -> ValidationReport:
    """Exhaustive unit/associativity check plus closure-gap report.

    The report is complete within the arity bound, not sampled.
    """
    violations, gaps = [], []
    n_unit = n_assoc = 0
    for (src, tgt), elems in mc.homs.items():
        if len(src) == 0:
            violations.append("nullary hom %r is excluded" % ((src, tgt),))
        if len(src) > mc.arity_bound:
            violations.append("hom %r exceeds the arity bound" % ((src, tgt),))
        if len(set(elems)) != len(elems):
            violations.append("duplicate names in hom %r" % ((src, tgt),))
    for obj in mc.objects:
        if mc.identities.get(obj) not in mc.hom((obj,), obj):
            violations.append("missing identity at %r" % (obj,))

    # closure: every composable configuration within bound needs an entry
    for outer, inners in _configurations(mc, mc.arity_bound):
        key = (outer, tuple(inners))
        if key not in mc.subst:
            gaps.append("no substitution entry for %s" % repr(key))
            continue
        res = mc.subst[key]
        want_src, want_tgt = _con_src(inners), outer[1]
        if res[0] != want_src or res[1] != want_tgt or res[2] not in mc.hom(res[0], res[1]):
            violations.append("substitution entry %r has bad result %r" % (key, res))

    def sub(outer, inners):
        return mc.subst.get((outer, tuple(inners)))

    # unit laws
    for r in mc.multimaps():
        n_unit += 1
        ids = tuple(mc.identity_ref(b) for b in r[0])
        if sub(r, ids) is not None and sub(r, ids) != r:
            violations.append("right unit fails for %r" % (r,))
        idt = mc.identity_ref(r[1])
        if sub(idt, (r,)) is not None and sub(idt, (r,)) != r:
            violations.append("left unit fails for %r" % (r,))

    # associativity: both evaluation orders of doubly-nested substitutions
    for outer, inners in _configurations(mc, mc.arity_bound):
        mid = sub(outer, inners)
        if mid is None:
            continue
        pools = []
        for i in inners:
            per_slot = []
            for b in i[0]:
                per_slot.append([r for r in mc.multimaps() if r[1] == b])
            per_inner = list(itertools.product(*per_slot))
            pools.append(per_inner)
        for deep in itertools.product(*pools):
            flat = tuple(d for group in deep for d in group)
            if sum(len(d[0]) for d in flat) > mc.arity_bound:
                continue
            n_assoc += 1
            lhs_inner = []
            ok = True
            for i, group in zip(inners, deep):
                r = sub(i, group)
                if r is None:
                    ok = False
                    break
                lhs_inner.append(r)
            if not ok:
                continue
            lhs = sub(outer, tuple(lhs_inner))
            rhs = sub(mid, flat)
            if lhs is None or rhs is None:
                continue
            if lhs != rhs:
                violations.append(
                    "associativity fails: outer=%r inners=%r deep=%r" % (outer, inners, deep))
    ok = not violations and not gaps
    return ValidationReport(ok, violations, gaps,
                            {"arity_bound": mc.arity_bound,
                             "unit_instances": n_unit,
                             "associativity_instances": n_assoc})


def linear_part(mc: Multicat) -> FinCat:
    """The category of objects and arity-1 multimaps."""
    report = validate(mc)
    if not report.ok:
        raise ValidationError("invalid multicategory: %s" % report.violations[:3])
    homs = {}
    for (src, tgt), elems in mc.homs.items():
        if len(src) == 1:
            homs[(src[0], tgt)] = finset(elems)
    identities = dict(mc.identities)
    comp = {}
    for (a, b) in list(homs):
        for (b2, c) in list(homs):
            if b2 != b:
                continue
            table = {}
            for f in homs[(a, b)]:
                for g in homs[(b2, c)]:
                    res = mc.substitute(mref((b,), c, g), (mref((a,), b, f),))
                    table[(f, g)] = res[2]
            comp[(a, b, c)] = table
    cat = FinCat(tuple(mc.objects), homs, identities, comp)
    problems = check_fincat(cat)
    if problems:
        raise ValidationError("linear part is not a category: %s" % problems[:3])
    return cat


# ---------------------------------------------------------------------------
# builders


def from_tables(objects, arity_bound, homs, identities, subst) -> Multicat:
    mc = Multicat(tuple(objects), arity_bound,
                  {(tuple(s), t): tuple(e) for (s, t), e in homs.items()},
                  dict(identities), dict(subst))
    report = validate(mc)
    if not report.ok:
        raise ValidationError("invalid multicategory: %s"
                              % (report.violations + report.gaps)[:5])
    return mc


def _close_singletons(objects, arity_bound, homs, identities, linear_comp):
    """Complete a table whose non-linear homs are all singletons.

    ``linear_comp[(a, b, c)][(f, g)]`` gives composites of linear maps; any
    configuration producing a non-linear output lands in a singleton hom, so
    all substitution entries are forced.  Homs are grown until every
    composable configuration within the bound has a nonempty target.
    """
    homs = {k: tuple(v) for k, v in homs.items()}
    changed = True
    while changed:
        changed = False
        mc = Multicat(tuple(objects), arity_bound, homs, dict(identities), {})
        for outer, inners in _configurations(mc, arity_bound):
            src, tgt = _con_src(inners), outer[1]
            if len(src) >= 2 and not homs.get((src, tgt)):
                homs[(src, tgt)] = ("m%d" % len(src),)
                changed = True
    subst = {}
    mc = Multicat(tuple(objects), arity_bound, homs, dict(identities), {})
    for outer, inners in _configurations(mc, arity_bound):
        src, tgt = _con_src(inners), outer[1]
        if all(i == mc.identity_ref(i[1]) for i in inners):
            res = outer
        elif outer == mc.identity_ref(outer[1]):
            res = inners[0]
        elif len(src) == 1:
            name = linear_comp[(src[0], outer[0][0], tgt)][(inners[0][2], outer[2])]
            res = mref(src, tgt, name)
        elif len(homs[(src, tgt)]) == 1:
            res = mref(src, tgt, homs[(src, tgt)][0])
        else:
            raise ValidationError(
                "cannot force a composite into multi-element hom %r" % ((src, tgt),))
        subst[(outer, tuple(inners))] = res
    mc = Multicat(tuple(objects), arity_bound, homs, dict(identities), subst)
    report = validate(mc)
    if not report.ok:
        raise ValidationError("singleton closure produced an invalid table: %s"
                              % (report.violations + report.gaps)[:5])
    return mc


def semigroup_operad(arity_bound: int) -> Multicat:
    """One object, a single multimap at each arity 1..A; all tables forced."""
    obj = "*"
    homs = {((obj,), obj): ("m1",)}
    for n in range(2, arity_bound + 1):
        homs[((obj,) * n, obj)] = ("m%d" % n,)
    identities = {obj: "m1"}
    linear_comp = {(obj, obj, obj): {("m1", "m1"): "m1"}}
    return _close_singletons((obj,), arity_bound, homs, identities, linear_comp)


def discrete(objects, arity_bound: int = 2) -> Multicat:
    homs = {((o,), o): ("id",) for o in objects}
    identities = {o: "id" for o in objects}
    subst = {}
    for o in objects:
        i = mref((o,), o, "id")
        subst[(i, (i,))] = i
    return Multicat(tuple(objects), arity_bound, homs, identities, subst)


def monoid_multicat(elements, table, arity_bound: int = 2, obj: str = "x") -> Multicat:
    """Linear-only multicategory from a monoid: one object, homs only at arity 1.

    ``table[(f, g)]`` is "f then g"; elements[0] must be the unit.
    """
    homs = {((obj,), obj): tuple(elements)}
    identities = {obj: elements[0]}
    subst = {}
    for f in elements:
        for g in elements:
            subst[(mref((obj,), obj, g), (mref((obj,), obj, f),))] = \
                mref((obj,), obj, table[(f, g)])
    mc = Multicat((obj,), arity_bound, homs, identities, subst)
    report = validate(mc)
    if not report.ok:
        raise ValidationError("monoid table invalid: %s" % report.violations[:3])
    return mc


def fixture_m1() -> Multicat:
    """The semigroup operad, truncated at arity 3."""
    return semigroup_operad(3)


def fixture_m3() -> Multicat:
    """Two objects c, d; identities; one binary multimap (c,c) -> d."""
    c, d = "c", "d"
    homs = {((c,), c): ("idc",), ((d,), d): ("idd",), ((c, c), d): ("m",)}
    identities = {c: "idc", d: "idd"}
    idc, idd, m = mref((c,), c, "idc"), mref((d,), d, "idd"), mref((c, c), d, "m")
    subst = {
        (idc, (idc,)): idc,
        (idd, (idd,)): idd,
        (m, (idc, idc)): m,
        (idd, (m,)): m,
    }
    return from_tables((c, d), 3, {k: v for k, v in homs.items()},
                       identities, subst)


def fixture_m4() -> Multicat:
    """One object; linear part {id, e} with e.e = e; one multimap per higher
    arity, absorbing every substitution.  Bound 3, so the ternary hom is the
    forced closure of the binary one."""
    c = "c"
    homs = {((c,), c): ("id", "e"), ((c, c), c): ("m2",)}
    identities = {c: "id"}
    linear_comp = {(c, c, c): {("id", "id"): "id", ("id", "e"): "e",
                               ("e", "id"): "e", ("e", "e"): "e"}}
    return _close_singletons((c,), 3, homs, identities, linear_comp)


def collapse_e_multicat() -> Multicat:
    """fixture_m4 with e collapsed onto the identity (trivial linear part)."""
    c = "c"
    homs = {((c,), c): ("id",), ((c, c), c): ("m2",)}
    identities = {c: "id"}
    linear_comp = {(c, c, c): {("id", "id"): "id"}}
    return _close_singletons((c,), 3, homs, identities, linear_comp)


def non_promonoidal_multicat() -> Multicat:
    """Two binary multimaps collapsing onto one ternary: factorisations of the
    ternary map through nested binaries are plentiful but not coend-related."""
    c = "c"
    homs = {((c,), c): ("id",), ((c, c), c): ("p", "q")}
    identities = {c: "id"}
    linear_comp = {(c, c, c): {("id", "id"): "id"}}
    return _close_singletons((c,), 3, homs, identities, linear_comp)


SMALL_MONOIDS = [
    (("1",), {("1", "1"): "1"}),
    (("1", "e"), {("1", "1"): "1", ("1", "e"): "e", ("e", "1"): "e", ("e", "e"): "e"}),
    (("1", "s"), {("1", "1"): "1", ("1", "s"): "s", ("s", "1"): "s", ("s", "s"): "1"}),
]


def random_multicat(rng, max_objects: int = 2, arity_bound: int = 3) -> Multicat:
    """A randomized *valid* multicategory: per-object monoid linear parts and
    singleton higher homs closed under composition, so all tables are forced."""
    n_obj = rng.randint(1, max_objects)
    objects = tuple("o%d" % i for i in range(n_obj))
    homs, identities = {}, {}
    linear_comp = {}
    for o in objects:
        elems, table = SMALL_MONOIDS[rng.randrange(len(SMALL_MONOIDS))]
        names = tuple("%s_%s" % (o, e) for e in elems)
        homs[((o,), o)] = names
        identities[o] = names[0]
        linear_comp[(o, o, o)] = {
            ("%s_%s" % (o, f), "%s_%s" % (o, g)): "%s_%s" % (o, table[(f, g)])
            for f in elems for g in elems}
    # sprinkle some generating higher multimaps
    for _ in range(rng.randint(1, 3)):
        k = rng.randint(2, arity_bound)
        src = tuple(objects[rng.randrange(n_obj)] for _ in range(k))
        tgt = objects[rng.randrange(n_obj)]
        homs.setdefault((src, tgt), ("m%d" % k,))
    return _close_singletons(objects, arity_bound, homs, identities, linear_comp)


# ---------------------------------------------------------------------------
# JSON schema


def _parse_ref(d) -> tuple:
    return mref(tuple(d["src"]), d["tgt"], d["elem"])


def multicat_from_json(data: dict) -> Multicat:
    """Parse the on-disk schema; unlisted homs are empty, missing required
    substitution entries surface as validation errors."""
    homs = {}
    for h in data.get("multihoms", []):
        homs[(tuple(h["src"]), h["tgt"])] = tuple(h["elems"])
    subst = {}
    for s in data.get("subst", []):
        subst[(_parse_ref(s["outer"]), tuple(_parse_ref(i) for i in s["inners"]))] = \
            _parse_ref(s["result"])
    return Multicat(tuple(data["objects"]), int(data["arity_bound"]),
                    homs, dict(data.get("identities", {})), subst)


def multicat_to_json_str(mc: Multicat) -> str:
    return json.dumps(mc.to_json(), indent=2, sort_keys=True)
