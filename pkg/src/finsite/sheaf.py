"""Presheaves as finite data: extensivity, descent, sheaf conditions,
right Kan extension, the pullback/pushforward adjunction, and the Yoneda
embedding into a finite presheaf-category fragment.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Any, Optional

from .fincat import (
    CheckReport,
    FunctorData,
    TableCategory,
    coproduct_is_disjoint_stable,
    is_extensive,
    is_full,
    is_faithful,
    _existing_binary_coproducts,
)
from . import site as _site


@dataclass(frozen=True)
class Presheaf:
    cat: Any
    values: dict  # obj -> tuple of elements
    restriction: dict  # mor -> dict mapping values(tgt) -> values(src)
    name: str = ""

    def value(self, x):
        return self.values[x]

    def res(self, m, a):
        return self.restriction[m][a]


@dataclass(frozen=True)
class PresheafMorphism:
    src: Presheaf
    tgt: Presheaf
    components: dict  # obj -> dict values_src(x) -> values_tgt(x)

    def at(self, x, a):
        return self.components[x][a]


@dataclass(frozen=True)
class DescentSet:
    pi: Any
    elements: tuple
    kernel_pair: Any


def validate_presheaf(F: Presheaf) -> CheckReport:
    cat = F.cat
    for x in cat.objects:
        if x not in F.values:
            raise ValueError(f"missing value set for {x!r}")
        i = cat.identity(x)
        if any(F.res(i, a) != a for a in F.values[x]):
            return CheckReport(False, "validate_presheaf", counterexample={"identity": x})
    for m in cat.morphisms():
        a, b = cat.src(m), cat.tgt(m)
        r = F.restriction.get(m)
        if r is None or set(r) != set(F.values[b]) or not set(r.values()) <= set(F.values[a]):
            return CheckReport(False, "validate_presheaf", counterexample={"restriction": m})
    for u in cat.morphisms():
        for v in cat.morphisms():
            if cat.src(v) != cat.tgt(u):
                continue
            w = cat.compose(v, u)
            for a in F.values[cat.tgt(v)]:
                if F.res(w, a) != F.res(u, F.res(v, a)):
                    return CheckReport(
                        False, "validate_presheaf", counterexample={"functoriality": (v, u)}
                    )
    return CheckReport(True, "validate_presheaf")


def validate_presheaf_morphism(phi: PresheafMorphism) -> CheckReport:
    F, G = phi.src, phi.tgt
    cat = F.cat
    for x in cat.objects:
        comp = phi.components.get(x)
        if comp is None or set(comp) != set(F.values[x]) or not set(comp.values()) <= set(G.values[x]):
            return CheckReport(False, "validate_presheaf_morphism", counterexample={"component": x})
    for m in cat.morphisms():
        a, b = cat.src(m), cat.tgt(m)
        for v in F.values[b]:
            if phi.at(a, F.res(m, v)) != G.res(m, phi.at(b, v)):
                return CheckReport(
                    False, "validate_presheaf_morphism", counterexample={"naturality": m}
                )
    return CheckReport(True, "validate_presheaf_morphism")


def is_presheaf_iso(phi: PresheafMorphism) -> bool:
    for x, comp in phi.components.items():
        if len(set(comp.values())) != len(comp) or len(comp) != len(phi.tgt.values[x]):
            return False
    return True


def compose_presheaf_morphisms(g: PresheafMorphism, f: PresheafMorphism) -> PresheafMorphism:
    return PresheafMorphism(
        f.src,
        g.tgt,
        {x: {a: g.at(x, f.at(x, a)) for a in f.src.values[x]} for x in f.src.cat.objects},
    )


# ---------------------------------------------------------------------------
# Extensivity of presheaves
# ---------------------------------------------------------------------------


def is_extensive_presheaf(F: Presheaf, mode: str = "literal") -> CheckReport:
    """Whether F sends existing coproducts to products of sets.

    mode 'literal' quantifies over every existing coproduct; mode
    'disjoint' only over the disjoint pullback-stable ones.
    """
    if mode not in ("literal", "disjoint"):
        raise ValueError(f"unknown extensivity mode {mode!r}")
    cat = F.cat
    init = cat.coproduct(())
    if init is not None and len(F.values[init.apex]) != 1:
        return CheckReport(
            False,
            "is_extensive_presheaf",
            counterexample={"initial": init.apex, "size": len(F.values[init.apex])},
        )
    for a, b, co in _existing_binary_coproducts(cat):
        if mode == "disjoint" and not coproduct_is_disjoint_stable(cat, co):
            continue
        i1, i2 = co.injections
        image = {(F.res(i1, x), F.res(i2, x)) for x in F.values[co.apex]}
        total = len(F.values[a]) * len(F.values[b])
        if len(image) != len(F.values[co.apex]) or len(image) != total:
            return CheckReport(
                False,
                "is_extensive_presheaf",
                counterexample={"coproduct": (a, b, co.apex)},
            )
    return CheckReport(True, "is_extensive_presheaf")


# ---------------------------------------------------------------------------
# Descent
# ---------------------------------------------------------------------------


def descent_set(F: Presheaf, pi) -> DescentSet:
    cat = F.cat
    kp = cat.pullback(pi, pi)
    if kp is None:
        raise ValueError("the double fibre product does not exist")
    y = cat.src(pi)
    elements = tuple(
        a for a in F.values[y] if F.res(kp.to_left, a) == F.res(kp.to_right, a)
    )
    return DescentSet(pi, elements, kp)


def satisfies_descent(F: Presheaf, pi) -> bool:
    cat = F.cat
    des = descent_set(F, pi)
    x = cat.tgt(pi)
    image = [F.res(pi, a) for a in F.values[x]]
    return len(set(image)) == len(image) and set(image) == set(des.elements)


def is_sheaf(F: Presheaf, T, mode: str = "literal") -> CheckReport:
    ext = is_extensive_presheaf(F, mode)
    if not ext.ok:
        return CheckReport(False, "is_sheaf", counterexample={"extensivity": ext.counterexample})
    for pi in sorted(_site.uni_class(T), key=repr):
        if not satisfies_descent(F, pi):
            return CheckReport(False, "is_sheaf", counterexample={"descent": pi})
    return CheckReport(True, "is_sheaf")


def is_traditional_sheaf(F: Presheaf, T) -> CheckReport:
    cat = F.cat
    for x in cat.objects:
        for cov in T.covering_families(x):
            members = cov.members
            squares = {}
            for i, mi in enumerate(members):
                for j, mj in enumerate(members):
                    if i <= j:
                        sq = cat.pullback(mi, mj)
                        if sq is None:
                            raise ValueError(
                                f"pairwise fibre product missing for {mi!r}, {mj!r}"
                            )
                        squares[(i, j)] = sq
            matching = []
            for combo in iproduct(*(F.values[cat.src(m)] for m in members)):
                ok = True
                for (i, j), sq in squares.items():
                    if F.res(sq.to_left, combo[i]) != F.res(sq.to_right, combo[j]):
                        ok = False
                        break
                if ok:
                    matching.append(combo)
            image = [tuple(F.res(m, s) for m in members) for s in F.values[x]]
            if len(set(image)) != len(image) or set(image) != set(matching):
                return CheckReport(
                    False,
                    "is_traditional_sheaf",
                    counterexample={"object": x, "family": members},
                )
    return CheckReport(True, "is_traditional_sheaf")


def comparison_sheaf_report(F: Presheaf, T, mode: str = "literal") -> CheckReport:
    """The three sheaf conditions and the implications between them that
    the detected hypotheses support."""
    cat = F.cat
    i_sheaf = is_sheaf(F, T, mode).ok
    trad = is_traditional_sheaf(F, T).ok
    ext = is_extensive_presheaf(F, mode).ok
    ii = ext and trad
    hyp_extensive = is_extensive(cat).ok
    hyp_superext = _site.is_superextensive(T)
    hyp_singletonizable = _site.is_singletonizable(T)
    failures = []
    if ii and not i_sheaf:
        failures.append("(ii) holds but (i) fails")
    if ii and not trad:
        failures.append("(ii) holds but (iii) fails")
    if hyp_extensive and hyp_superext and trad != ii:
        failures.append("(ii) and (iii) disagree despite extensive + superextensive")
    if hyp_singletonizable and i_sheaf != ii:
        failures.append("(i) and (ii) disagree despite singletonizability")
    report = {
        "i_sheaf": i_sheaf,
        "ii_extensive_traditional": ii,
        "iii_traditional": trad,
        "hypotheses": {
            "extensive_category": hyp_extensive,
            "superextensive": hyp_superext,
            "singletonizable": hyp_singletonizable,
        },
    }
    if failures:
        return CheckReport(
            False, "comparison_sheaf_report", counterexample={"failures": failures, **report}
        )
    return CheckReport(True, "comparison_sheaf_report", witness=report)


# ---------------------------------------------------------------------------
# Representables and subcanonicity
# ---------------------------------------------------------------------------


def representable(cat, x, name=None) -> Presheaf:
    values = {y: tuple(cat.hom(y, x)) for y in cat.objects}
    restriction = {
        m: {h: cat.compose(h, m) for h in values[cat.tgt(m)]} for m in cat.morphisms()
    }
    return Presheaf(cat, values, restriction, name=name or f"Yo_{x}")


def subcanonical_via_representables(T, mode: str = "literal") -> CheckReport:
    cat = T.cat
    lhs = _site.is_subcanonical(T)
    bad = None
    for x in cat.objects:
        rep = is_sheaf(representable(cat, x), T, mode)
        if not rep.ok:
            bad = (x, rep.counterexample)
            break
    rhs = bad is None
    detail = {"is_subcanonical": lhs, "all_representables_sheaves": rhs, "witness": bad}
    if lhs == rhs:
        return CheckReport(True, "subcanonical_via_representables", witness=detail)
    return CheckReport(False, "subcanonical_via_representables", counterexample=detail)


# ---------------------------------------------------------------------------
# Pre(T) coverings of presheaf morphisms
# ---------------------------------------------------------------------------


def is_pre_covering(phi: PresheafMorphism, T) -> CheckReport:
    """Element-wise local lifting through phi along T-coverings."""
    F, G = phi.src, phi.tgt
    cat = F.cat
    for x in cat.objects:
        for psi in G.values[x]:
            found = None
            for cov in T.covering_families(x):
                lifts = []
                for m in cov.members:
                    u = cat.src(m)
                    pick = None
                    for cand in F.values[u]:
                        if phi.at(u, cand) == G.res(m, psi):
                            pick = cand
                            break
                    if pick is None:
                        lifts = None
                        break
                    lifts.append(pick)
                if lifts is not None:
                    found = (cov, tuple(lifts))
                    break
            if found is None:
                return CheckReport(
                    False, "is_pre_covering", counterexample={"object": x, "element": psi}
                )
    return CheckReport(True, "is_pre_covering")


# ---------------------------------------------------------------------------
# Pullback and right Kan extension of presheaves
# ---------------------------------------------------------------------------


def pullback_presheaf(F: FunctorData, G: Presheaf) -> Presheaf:
    values = {x: G.values[F.on_obj(x)] for x in F.source.objects}
    restriction = {m: dict(G.restriction[F.on_mor(m)]) for m in F.source.morphisms()}
    return Presheaf(F.source, values, restriction, name=f"{F.name}*{G.name}")


def pullback_morphism(F: FunctorData, phi: PresheafMorphism) -> PresheafMorphism:
    return PresheafMorphism(
        pullback_presheaf(F, phi.src),
        pullback_presheaf(F, phi.tgt),
        {x: dict(phi.components[F.on_obj(x)]) for x in F.source.objects},
    )


def _slice_objects(F: FunctorData, y):
    out = []
    for x in F.source.objects:
        for psi in F.target.hom(F.on_obj(x), y):
            out.append((x, psi))
    out.sort(key=repr)
    return out


def _slice_constraints(F: FunctorData, slice_objs):
    """Triples (i, j, f) meaning res_P[f](s[j]) == s[i]."""
    src, tgt = F.source, F.target
    idx = {o: k for k, o in enumerate(slice_objs)}
    cons = []
    for (x1, p1) in slice_objs:
        for (x2, p2) in slice_objs:
            for f in src.hom(x1, x2):
                if tgt.compose(p2, F.on_mor(f)) == p1:
                    cons.append((idx[(x1, p1)], idx[(x2, p2)], f))
    return cons


def _kan_families(F: FunctorData, P: Presheaf, y):
    slice_objs = _slice_objects(F, y)
    cons = _slice_constraints(F, slice_objs)
    by_last = {}
    for (i, j, f) in cons:
        by_last.setdefault(max(i, j), []).append((i, j, f))
    n = len(slice_objs)
    families = []

    def rec(k, chosen):
        if k == n:
            families.append(tuple(chosen))
            return
        for v in P.values[slice_objs[k][0]]:
            chosen.append(v)
            ok = True
            for (i, j, f) in by_last.get(k, ()):
                if P.res(f, chosen[j]) != chosen[i]:
                    ok = False
                    break
            if ok:
                rec(k + 1, chosen)
            chosen.pop()

    rec(0, [])
    return slice_objs, families


def right_kan_extension(F: FunctorData, P: Presheaf) -> Presheaf:
    tgt = F.target
    slices = {}
    values = {}
    for y in tgt.objects:
        slice_objs, fams = _kan_families(F, P, y)
        slices[y] = {o: k for k, o in enumerate(slice_objs)}
        values[y] = tuple(sorted(fams, key=repr))
    restriction = {}
    for g in tgt.morphisms():
        y1, y2 = tgt.src(g), tgt.tgt(g)
        idx2 = slices[y2]
        r = {}
        for fam in values[y2]:
            entries = []
            for (x, phi) in sorted(slices[y1], key=repr):
                entries.append(fam[idx2[(x, tgt.compose(g, phi))]])
            r[fam] = tuple(entries)
        restriction[g] = r
    return Presheaf(tgt, values, restriction, name=f"{F.name}_*{P.name}")


def pushforward_morphism(F: FunctorData, phi: PresheafMorphism) -> PresheafMorphism:
    src_ext = right_kan_extension(F, phi.src)
    tgt_ext = right_kan_extension(F, phi.tgt)
    tgt = F.target
    comps = {}
    for y in tgt.objects:
        slice_objs = _slice_objects(F, y)
        comp = {}
        for fam in src_ext.values[y]:
            comp[fam] = tuple(phi.at(o[0], v) for o, v in zip(slice_objs, fam))
        comps[y] = comp
    return PresheafMorphism(src_ext, tgt_ext, comps)


def counit(F: FunctorData, P: Presheaf) -> PresheafMorphism:
    """Evaluation of a compatible family at (x, id): F* F_* P -> P."""
    ext = right_kan_extension(F, P)
    back = pullback_presheaf(F, ext)
    src_cat, tgt_cat = F.source, F.target
    comps = {}
    for x in src_cat.objects:
        fx = F.on_obj(x)
        slice_objs = _slice_objects(F, fx)
        k = slice_objs.index((x, tgt_cat.identity(fx)))
        comps[x] = {fam: fam[k] for fam in back.values[x]}
    return PresheafMorphism(back, P, comps)


def unit(F: FunctorData, Q: Presheaf) -> PresheafMorphism:
    """Restriction along every slice leg: Q -> F_* F* Q."""
    pulled = pullback_presheaf(F, Q)
    ext = right_kan_extension(F, pulled)
    tgt = F.target
    comps = {}
    for y in tgt.objects:
        slice_objs = _slice_objects(F, y)
        comp = {}
        for q in Q.values[y]:
            comp[q] = tuple(Q.res(psi, q) for (x, psi) in slice_objs)
        comps[y] = comp
    return PresheafMorphism(Q, ext, comps)


def _is_identity_morphism(phi: PresheafMorphism) -> bool:
    return all(
        all(phi.at(x, a) == a for a in phi.src.values[x]) for x in phi.src.cat.objects
    )


def verify_adjunction(F: FunctorData, source_samples, target_samples) -> CheckReport:
    """Both triangle identities, checked on the given sample presheaves."""
    for Q in target_samples:
        eta = unit(F, Q)
        tri = compose_presheaf_morphisms(counit(F, pullback_presheaf(F, Q)), pullback_morphism(F, eta))
        if not _is_identity_morphism(tri):
            return CheckReport(
                False, "verify_adjunction", counterexample={"triangle": "counit.F*unit", "sample": Q.name}
            )
    for P in source_samples:
        ext = right_kan_extension(F, P)
        tri = compose_presheaf_morphisms(pushforward_morphism(F, counit(F, P)), unit(F, ext))
        if not _is_identity_morphism(tri):
            return CheckReport(
                False, "verify_adjunction", counterexample={"triangle": "F_*counit.unit", "sample": P.name}
            )
    return CheckReport(True, "verify_adjunction")


def verify_comparison(F: FunctorData, T1, T2, source_samples=(), target_samples=(), mode="literal") -> CheckReport:
    """The comparison-lemma hypotheses plus sheaf and unit/counit checks
    on sample presheaves; refuses when a hypothesis fails."""
    from .fincat import preserves_coproducts, inverts_coproducts

    which = "disjoint" if mode == "disjoint" else "all"
    hyps = {
        "continuous": _site.is_continuous(F, T1, T2).ok,
        "cocontinuous": _site.is_cocontinuous(F, T1, T2).ok,
        "dense_image": _site.has_dense_image(F, T2).ok,
        "preserves_coproducts": preserves_coproducts(F, which),
        "inverts_coproducts": inverts_coproducts(F),
        "target_extensive": is_extensive(F.target).ok,
    }
    failed = [k for k, v in hyps.items() if not v]
    if failed:
        return CheckReport(
            False, "verify_comparison", counterexample={"hypotheses_failed": failed, **hyps}
        )
    results = {}
    for P in source_samples:
        ext = right_kan_extension(F, P)
        results[f"pushforward({P.name}) sheaf"] = is_sheaf(ext, T2, mode).ok
        results[f"counit({P.name}) iso"] = is_presheaf_iso(counit(F, P))
    for Q in target_samples:
        results[f"pullback({Q.name}) sheaf"] = is_sheaf(pullback_presheaf(F, Q), T1, mode).ok
        results[f"unit({Q.name}) iso"] = is_presheaf_iso(unit(F, Q))
    adj = verify_adjunction(F, source_samples, target_samples)
    results["triangle_identities"] = adj.ok
    if all(results.values()):
        return CheckReport(True, "verify_comparison", witness={**hyps, **results})
    return CheckReport(False, "verify_comparison", counterexample={**hyps, **results})


# ---------------------------------------------------------------------------
# The Yoneda embedding into a finite presheaf-category fragment
# ---------------------------------------------------------------------------


def presheaf_homs(F: Presheaf, G: Presheaf):
    """All natural transformations F -> G, enumerated with naturality pruning."""
    cat = F.cat
    objs = list(cat.objects)
    results = []

    def rec(k, comps):
        if k == len(objs):
            results.append({o: dict(c) for o, c in comps.items()})
            return
        x = objs[k]
        cands = []
        for values in iproduct(G.values[x], repeat=len(F.values[x])):
            cands.append(dict(zip(F.values[x], values)))
        for comp in cands:
            comps[x] = comp
            ok = True
            for m in cat.morphisms():
                a, b = cat.src(m), cat.tgt(m)
                if a not in comps or b not in comps:
                    continue
                if any(
                    comps[a][F.res(m, v)] != G.res(m, comps[b][v]) for v in F.values[b]
                ):
                    ok = False
                    break
            if ok:
                rec(k + 1, comps)
            del comps[x]

    rec(0, {})
    return results


def _freeze_components(comps):
    return tuple(
        (x, tuple(sorted(comps[x].items(), key=repr))) for x in sorted(comps, key=repr)
    )


def presheaf_fragment(presheaves):
    """The full subcategory of presheaves spanned by the given objects.

    Returns (TableCategory, dict name -> Presheaf, morphism decoder).
    """
    named = {p.name: p for p in presheaves}
    if len(named) != len(presheaves):
        raise ValueError("presheaf names must be unique")
    objects = sorted(named)
    morphisms = {}
    identity = {}
    decode = {}
    for a in objects:
        for b in objects:
            for comps in presheaf_homs(named[a], named[b]):
                mid = (a, b, _freeze_components(comps))
                morphisms[mid] = (a, b)
                decode[mid] = PresheafMorphism(named[a], named[b], comps)
                if a == b and all(
                    v == k for comp in comps.values() for k, v in comp.items()
                ):
                    identity[a] = mid
    comp_table = {}
    for f, (a, b) in morphisms.items():
        for g, (b2, c) in morphisms.items():
            if b2 != b:
                continue
            gf = compose_presheaf_morphisms(decode[g], decode[f])
            comp_table[(g, f)] = (a, c, _freeze_components(gf.components))
    cat = TableCategory(objects, morphisms, identity, comp_table, name="psh-fragment")
    return cat, named, decode


def yoneda_embedding(cat, extras=()):
    """The Yoneda functor into the fragment on representables plus extras."""
    reps = {x: representable(cat, x, name=f"Yo_{x}") for x in cat.objects}
    fragment, named, decode = presheaf_fragment(list(reps.values()) + list(extras))
    obj_map = {x: reps[x].name for x in cat.objects}
    mor_map = {}
    for m in cat.morphisms():
        a, b = cat.src(m), cat.tgt(m)
        comps = {
            y: {h: cat.compose(m, h) for h in reps[a].values[y]} for y in cat.objects
        }
        mor_map[m] = (reps[a].name, reps[b].name, _freeze_components(comps))
    yo = FunctorData(cat, fragment, obj_map, mor_map, name="Yo")
    return yo, fragment, named, decode


def _yoneda_element_morphism(cat, reps, G: Presheaf, y, g):
    """The presheaf morphism Yo_y -> G matching the element g of G(y)."""
    comps = {z: {h: G.res(h, g) for h in reps[y].values[z]} for z in cat.objects}
    return comps


def yoneda_continuity_report(cat, T, extras=()) -> CheckReport:
    """Continuity of Yo (Uni(T) maps to Pre(T)-coverings), the singleton
    cocontinuity lifting, and the Yoneda-extension identity on samples."""
    yo, fragment, named, decode = yoneda_embedding(cat, extras)
    reps = {x: named[f"Yo_{x}"] for x in cat.objects}
    report = {}
    for f in sorted(_site.uni_class(T), key=repr):
        phi = decode[yo.on_mor(f)]
        if not is_pre_covering(phi, T).ok:
            return CheckReport(
                False, "yoneda_continuity_report", counterexample={"clause": "continuity", "morphism": f}
            )
    report["continuity_checked"] = len(_site.uni_class(T))
    if T.is_singleton():
        uni = _site.uni_class(T)
        for x in cat.objects:
            yx = yo.on_obj(x)
            for mid in fragment.morphisms():
                if fragment.tgt(mid) != yx:
                    continue
                phi = decode[mid]
                if not is_pre_covering(phi, T).ok:
                    continue
                lifted = False
                for pi in uni:
                    if cat.tgt(pi) != x:
                        continue
                    for h in fragment.hom(yo.on_obj(cat.src(pi)), fragment.src(mid)):
                        if fragment.compose(mid, h) == yo.on_mor(pi):
                            lifted = True
                            break
                    if lifted:
                        break
                if not lifted:
                    return CheckReport(
                        False,
                        "yoneda_continuity_report",
                        counterexample={"clause": "cocontinuity", "object": x},
                    )
        report["cocontinuity"] = True
    # Yoneda extension: (Yo_* F)(G) is Hom(G, F) for sampled F among extras
    for F in extras:
        ext = right_kan_extension(yo, F)
        for gname in fragment.objects:
            G = named[gname]
            homs = presheaf_homs(G, F)
            fams = ext.values[gname]
            slice_objs = _slice_objects(yo, gname)
            idx = {o: k for k, o in enumerate(slice_objs)}
            seen = set()
            for fam in fams:
                comps = {}
                for y in cat.objects:
                    comp = {}
                    for g in G.values[y]:
                        mid = (f"Yo_{y}", gname, _freeze_components(
                            _yoneda_element_morphism(cat, reps, G, y, g)
                        ))
                        comp[g] = fam[idx[(y, mid)]]
                    comps[y] = comp
                frozen = _freeze_components(comps)
                if frozen in seen:
                    return CheckReport(
                        False,
                        "yoneda_continuity_report",
                        counterexample={"clause": "extension-injective", "at": gname},
                    )
                seen.add(frozen)
                if comps not in homs:
                    return CheckReport(
                        False,
                        "yoneda_continuity_report",
                        counterexample={"clause": "extension-natural", "at": gname},
                    )
            if len(seen) != len(homs):
                return CheckReport(
                    False,
                    "yoneda_continuity_report",
                    counterexample={
                        "clause": "extension-bijective",
                        "at": gname,
                        "families": len(seen),
                        "homs": len(homs),
                    },
                )
        report[f"extension({F.name})"] = True
    return CheckReport(True, "yoneda_continuity_report", witness=report)
