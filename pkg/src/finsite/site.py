"""Grothendieck pretopologies on finite categories.

Coverings on an explicit-table category are stored extensionally, one set
of covering families per object.  On the finite-sets ambient a topology is
an intensional descriptor ("all surjections", "all isomorphisms", "all
morphisms") together with certified classifiers for local splitness and
membership in the universal completion.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product as iproduct
from typing import Optional

from .fincat import (
    CheckReport,
    FinSetCat,
    FunctorData,
    SetMap,
    TableCategory,
    is_universal,
    universally_effective_epis,
    is_extensive,
    is_full as _full,
    is_faithful as _faithful,
)


@dataclass(frozen=True)
class CoveringFamily:
    target: object
    members: tuple


@dataclass(frozen=True)
class SplitWitness:
    covering: CoveringFamily
    sections: tuple


@dataclass(frozen=True)
class Refinement:
    source_family: CoveringFamily
    refining_family: CoveringFamily
    index_map: tuple
    connecting: tuple


class Pretopology:
    """Extensional pretopology on a TableCategory."""

    backend = "explicit-table"

    def __init__(self, cat, families, name=""):
        self.cat = cat
        self.name = name
        self.families = {}
        for x in cat.objects:
            fams = families.get(x, ())
            self.families[x] = frozenset(frozenset(s) for s in fams)

    def covering_families(self, x):
        out = []
        for s in self.families[x]:
            out.append(CoveringFamily(x, tuple(sorted(s, key=repr))))
        out.sort(key=repr)
        return out

    def has_family(self, x, members):
        return frozenset(members) in self.families[x]

    def is_singleton(self):
        return all(len(s) == 1 for fams in self.families.values() for s in fams)

    def __repr__(self):
        return f"Pretopology({self.name!r})"


class FinSetTopology:
    """Intensional topology on the finite-sets ambient.

    kind 'surjections': singleton coverings by surjections (canonical here).
    kind 'isos':        singleton coverings by bijections (indiscrete).
    kind 'all':         singleton coverings by arbitrary maps (discrete,
                        since every map of finite sets is universal).
    """

    backend = "finite-sets-ambient"
    KINDS = ("surjections", "isos", "all")

    def __init__(self, kind, cat=None):
        if kind not in self.KINDS:
            raise ValueError(f"unknown kind {kind!r}")
        self.kind = kind
        self.cat = cat if cat is not None else FinSetCat()
        self.name = f"finset-{kind}"

    def covers(self, f):
        if self.kind == "surjections":
            return f.is_surjective()
        if self.kind == "isos":
            return f.is_bijective()
        return True

    def is_singleton(self):
        return True

    def __repr__(self):
        return f"FinSetTopology({self.kind!r})"


def _choose_section(f):
    """A section of a surjective SetMap, by finite choice in sorted order."""
    pick = {}
    for x in sorted(f.src, key=repr):
        pick.setdefault(f(x), x)
    return SetMap(f.tgt, f.src, pick)


# ---------------------------------------------------------------------------
# Axiom validation
# ---------------------------------------------------------------------------


def validate_pretopology(T) -> CheckReport:
    if isinstance(T, FinSetTopology):
        return CheckReport(
            True,
            "validate_pretopology",
            witness={"note": f"intensional descriptor {T.kind!r} on finite sets"},
        )
    cat = T.cat
    # axiom 1: every isomorphism is a singleton covering
    for f in cat.isos():
        if not T.has_family(cat.tgt(f), (f,)):
            return CheckReport(
                False, "validate_pretopology", counterexample={"axiom": 1, "iso": f}
            )
    # axiom 2: coverings of coverings compose
    for x in cat.objects:
        for fam in T.families[x]:
            members = sorted(fam, key=repr)
            subfam_choices = [sorted(T.families[cat.src(m)], key=repr) for m in members]
            for choice in iproduct(*subfam_choices):
                composite = set()
                for m, sub in zip(members, choice):
                    for s in sub:
                        composite.add(cat.compose(m, s))
                if not T.has_family(x, composite):
                    return CheckReport(
                        False,
                        "validate_pretopology",
                        counterexample={"axiom": 2, "family": tuple(members)},
                    )
    # axiom 3: coverings pull back member-wise to coverings
    for x in cat.objects:
        for fam in T.families[x]:
            for g in cat.morphisms():
                if cat.tgt(g) != x:
                    continue
                pulled = set()
                failed = None
                for m in fam:
                    sq = cat.pullback(m, g)
                    if sq is None:
                        failed = m
                        break
                    pulled.add(sq.to_right)
                if failed is not None:
                    return CheckReport(
                        False,
                        "validate_pretopology",
                        counterexample={"axiom": 3, "member": failed, "along": g},
                    )
                if not T.has_family(cat.src(g), pulled):
                    return CheckReport(
                        False,
                        "validate_pretopology",
                        counterexample={"axiom": 3, "family": tuple(sorted(fam, key=repr)), "along": g},
                    )
    return CheckReport(True, "validate_pretopology")


# ---------------------------------------------------------------------------
# Standard topologies
# ---------------------------------------------------------------------------


def indiscrete_topology(cat):
    if isinstance(cat, FinSetCat):
        return FinSetTopology("isos", cat)
    fams = {x: set() for x in cat.objects}
    for f in cat.isos():
        fams[cat.tgt(f)].add(frozenset({f}))
    return Pretopology(cat, fams, name="T_indis")


def discrete_topology(cat):
    if isinstance(cat, FinSetCat):
        return FinSetTopology("all", cat)
    fams = {x: set() for x in cat.objects}
    for f in cat.morphisms():
        if is_universal(cat, f):
            fams[cat.tgt(f)].add(frozenset({f}))
    return Pretopology(cat, fams, name="T_dis")


def canonical_topology(cat):
    if isinstance(cat, FinSetCat):
        return FinSetTopology("surjections", cat)
    fams = {x: set() for x in cat.objects}
    for f in universally_effective_epis(cat):
        fams[cat.tgt(f)].add(frozenset({f}))
    return Pretopology(cat, fams, name="T_can")


def _extensive_families(cat):
    """Per object, all incoming-morphism sets forming a coproduct cocone."""
    out = {x: set() for x in cat.objects}
    incoming = {x: [] for x in cat.objects}
    for m in cat.morphisms():
        incoming[cat.tgt(m)].append(m)
    for x in cat.objects:
        ms = sorted(incoming[x], key=repr)
        for r in range(0, len(ms) + 1):
            for legs in combinations(ms, r):
                sources = tuple(cat.src(m) for m in legs)
                by_apex = {
                    q0: set(iproduct(*(cat.hom(o, q0) for o in sources)))
                    for q0 in cat.objects
                }
                if cat._is_initial_cocone(by_apex, x, legs):
                    out[x].add(frozenset(legs))
    return out


def extensive_topology(cat):
    rep = is_extensive(cat)
    if not rep.ok:
        raise ValueError(f"category is not extensive: {rep.counterexample}")
    return Pretopology(cat, _extensive_families(cat), name="T_ext")


# ---------------------------------------------------------------------------
# Locally split morphisms and the universal completion
# ---------------------------------------------------------------------------


def is_locally_split(T, f) -> Optional[SplitWitness]:
    cat = T.cat
    if isinstance(T, FinSetTopology):
        if T.kind in ("surjections", "all"):
            if T.covers(f):
                cov = CoveringFamily(f.tgt, (f,))
                return SplitWitness(cov, (SetMap.ident(f.src),))
            if T.kind == "all":
                cov = CoveringFamily(f.tgt, (f,))
                return SplitWitness(cov, (SetMap.ident(f.src),))
            return None
        # indiscrete: locally split means globally split
        if f.is_surjective():
            cov = CoveringFamily(f.tgt, (SetMap.ident(f.tgt),))
            return SplitWitness(cov, (_choose_section(f),))
        return None
    x = cat.tgt(f)
    y = cat.src(f)
    for cov in T.covering_families(x):
        sections = []
        for m in cov.members:
            found = None
            for rho in cat.hom(cat.src(m), y):
                if cat.compose(f, rho) == m:
                    found = rho
                    break
            if found is None:
                sections = None
                break
            sections.append(found)
        if sections is not None:
            return SplitWitness(cov, tuple(sections))
    return None


def uni_class(T) -> frozenset:
    """The universal T-locally split morphisms of an explicit-table site."""
    if isinstance(T, FinSetTopology):
        raise ValueError("intensional topologies classify membership, use uni_contains")
    cat = T.cat
    return frozenset(
        f
        for f in cat.morphisms()
        if is_universal(cat, f) and is_locally_split(T, f) is not None
    )


def uni_contains(T, f) -> bool:
    if isinstance(T, FinSetTopology):
        if T.kind == "all":
            return True
        return f.is_surjective()
    return is_universal(T.cat, f) and is_locally_split(T, f) is not None


def universal_completion(T):
    if isinstance(T, FinSetTopology):
        kind = {"surjections": "surjections", "isos": "surjections", "all": "all"}[T.kind]
        return FinSetTopology(kind, T.cat)
    cat = T.cat
    fams = {x: set() for x in cat.objects}
    for f in uni_class(T):
        fams[cat.tgt(f)].add(frozenset({f}))
    return Pretopology(cat, fams, name=f"Uni({T.name})")


# ---------------------------------------------------------------------------
# Comparing topologies
# ---------------------------------------------------------------------------


def _same_cat(T1, T2):
    if isinstance(T1, FinSetTopology) != isinstance(T2, FinSetTopology):
        raise ValueError("topologies live on different backends")
    if not isinstance(T1, FinSetTopology) and T1.cat is not T2.cat:
        raise ValueError("topologies live on different categories")


def is_coarser(T1, T2) -> bool:
    """Every universal T1-locally split morphism is T2-locally split."""
    _same_cat(T1, T2)
    if isinstance(T1, FinSetTopology):
        rank = {"surjections": 1, "isos": 1, "all": 2}
        return rank[T1.kind] <= rank[T2.kind]
    return uni_class(T1) <= uni_class(T2)


def are_equivalent(T1, T2) -> bool:
    return is_coarser(T1, T2) and is_coarser(T2, T1)


def find_refinement(family: CoveringFamily, T2) -> Optional[Refinement]:
    """A T2-covering of the same target refining the family, if one exists."""
    cat = T2.cat
    for cov in T2.covering_families(family.target):
        index_map = []
        connecting = []
        ok = True
        for psi in cov.members:
            hit = None
            for i, pi in enumerate(family.members):
                for rho in cat.hom(cat.src(psi), cat.src(pi)):
                    if cat.compose(pi, rho) == psi:
                        hit = (i, rho)
                        break
                if hit is not None:
                    break
            if hit is None:
                ok = False
                break
            index_map.append(hit[0])
            connecting.append(hit[1])
        if ok:
            return Refinement(family, cov, tuple(index_map), tuple(connecting))
    return None


# ---------------------------------------------------------------------------
# Singletonization
# ---------------------------------------------------------------------------


def _family_coproduct(T, x, fam):
    cat = T.cat
    members = tuple(sorted(fam, key=repr))
    co = cat.coproduct(tuple(cat.src(m) for m in members))
    if co is None:
        return members, None, None
    if members:
        induced = cat.from_coproduct(co, members)
    else:
        # empty family: the mediator is the unique map out of the initial object
        homs = cat.hom(co.apex, x)
        induced = homs[0] if len(homs) == 1 else None
    return members, co, induced


def is_singletonizable(T) -> bool:
    if isinstance(T, FinSetTopology):
        return True
    for x in T.cat.objects:
        for fam in T.families[x]:
            _, co, induced = _family_coproduct(T, x, fam)
            if co is None or induced is None:
                return False
    return True


def singletonize(T):
    if isinstance(T, FinSetTopology):
        return FinSetTopology(T.kind, T.cat)
    cat = T.cat
    rep = is_extensive(cat)
    if not rep.ok:
        raise ValueError(f"singletonize needs an extensive category: {rep.counterexample}")
    fams = {x: set() for x in cat.objects}
    for x in cat.objects:
        for fam in T.families[x]:
            members, co, induced = _family_coproduct(T, x, fam)
            if co is None or induced is None:
                raise ValueError(f"covering family without coproduct: {members}")
            fams[x].add(frozenset({induced}))
    return Pretopology(cat, fams, name=f"Sing({T.name})")


# ---------------------------------------------------------------------------
# Classification of topologies
# ---------------------------------------------------------------------------


def is_subcanonical(T) -> bool:
    return is_coarser(T, canonical_topology(T.cat))


def is_local(T) -> bool:
    """In every pullback square whose pulled-back leg and base leg are in
    Uni(T), the original morphism is in Uni(T) as well."""
    if isinstance(T, FinSetTopology):
        # pullbacks of maps of finite sets along surjections of finite sets
        # are surjective, and everything is universal
        return True
    cat = T.cat
    uni = uni_class(T)
    for pi in cat.morphisms():
        x = cat.tgt(pi)
        for g in cat.morphisms():
            if cat.tgt(g) != x:
                continue
            sq = cat.pullback(pi, g)
            if sq is None:
                continue
            if sq.to_right in uni and g in uni and pi not in uni:
                return False
    return True


def is_superextensive(T) -> bool:
    if isinstance(T, FinSetTopology):
        return T.kind in ("surjections", "all")
    cat = T.cat
    for x, fams in _extensive_families(cat).items():
        for fam in fams:
            if not T.has_family(x, fam):
                return False
    return True


def restrict_topology(T, incl: FunctorData):
    """Coverings of T lying in the subcategory whose members are universal there."""
    sub, amb = incl.source, incl.target
    if len(set(incl.obj_map.values())) != len(incl.obj_map):
        raise ValueError("restriction needs an inclusion functor")
    if len(set(incl.mor_map.values())) != len(incl.mor_map):
        raise ValueError("restriction needs an inclusion functor")
    mor_back = {v: k for k, v in incl.mor_map.items()}
    fams = {x: set() for x in sub.objects}
    for x in sub.objects:
        for fam in T.families[incl.on_obj(x)]:
            if not all(m in mor_back for m in fam):
                continue
            back = frozenset(mor_back[m] for m in fam)
            if all(is_universal(sub, m) for m in back):
                fams[x].add(back)
    return Pretopology(sub, fams, name=f"{T.name}|{sub.name}")


# ---------------------------------------------------------------------------
# Functors between sites
# ---------------------------------------------------------------------------


def is_continuous(F: FunctorData, T1, T2) -> CheckReport:
    """Sends Uni(T1) into Uni(T2) and preserves fibre products with Uni(T1)."""
    src, tgt = F.source, F.target
    for f in uni_class(T1):
        if not uni_contains(T2, F.on_mor(f)):
            return CheckReport(
                False, "is_continuous", counterexample={"clause": "image", "morphism": f}
            )
        x = src.tgt(f)
        for g in src.morphisms():
            if src.tgt(g) != x:
                continue
            sq = src.pullback(f, g)
            if sq is None:
                return CheckReport(
                    False,
                    "is_continuous",
                    counterexample={"clause": "source-pullback", "cospan": (f, g)},
                )
            if not tgt.is_cone_pullback(
                F.on_mor(f),
                F.on_mor(g),
                F.on_obj(sq.apex),
                F.on_mor(sq.to_left),
                F.on_mor(sq.to_right),
            ):
                return CheckReport(
                    False,
                    "is_continuous",
                    counterexample={"clause": "fibre-product", "cospan": (f, g)},
                )
    return CheckReport(True, "is_continuous")


def continuity_sufficient(F: FunctorData, T1, T2) -> CheckReport:
    """The stronger criterion: coverings map to coverings, universal
    morphisms stay universal, and their fibre products are preserved."""
    src, tgt = F.source, F.target
    for x in src.objects:
        for fam in T1.families[x]:
            image = frozenset(F.on_mor(m) for m in fam)
            if not T2.has_family(F.on_obj(x), image):
                return CheckReport(
                    False,
                    "continuity_sufficient",
                    counterexample={"clause": "covering", "family": tuple(sorted(fam, key=repr))},
                )
    for f in src.morphisms():
        if not is_universal(src, f):
            continue
        if not is_universal(tgt, F.on_mor(f)):
            return CheckReport(
                False, "continuity_sufficient", counterexample={"clause": "universal", "morphism": f}
            )
        x = src.tgt(f)
        for g in src.morphisms():
            if src.tgt(g) != x:
                continue
            sq = src.pullback(f, g)
            if sq is None or not tgt.is_cone_pullback(
                F.on_mor(f),
                F.on_mor(g),
                F.on_obj(sq.apex),
                F.on_mor(sq.to_left),
                F.on_mor(sq.to_right),
            ):
                return CheckReport(
                    False,
                    "continuity_sufficient",
                    counterexample={"clause": "fibre-product", "cospan": (f, g)},
                )
    return CheckReport(True, "continuity_sufficient")


def is_cocontinuous(F: FunctorData, T1, T2) -> CheckReport:
    """Every Uni(T2) morphism into an image object lifts to a Uni(T1)
    morphism up to a connecting morphism."""
    src, tgt = F.source, F.target
    uni2 = uni_class(T2)
    uni1 = uni_class(T1)
    witnesses = {}
    for x in src.objects:
        fx = F.on_obj(x)
        for pi in uni2:
            if tgt.tgt(pi) != fx:
                continue
            found = None
            for pi1 in uni1:
                if src.tgt(pi1) != x:
                    continue
                for h in tgt.hom(F.on_obj(src.src(pi1)), tgt.src(pi)):
                    if tgt.compose(pi, h) == F.on_mor(pi1):
                        found = (pi1, h)
                        break
                if found:
                    break
            if found is None:
                return CheckReport(
                    False, "is_cocontinuous", counterexample={"object": x, "morphism": pi}
                )
            witnesses[(x, pi)] = found
    return CheckReport(True, "is_cocontinuous", witness={"lifts": len(witnesses)})


def _multisets(items, max_size, max_mult):
    """All non-empty multisets over items with the given bounds."""
    items = list(items)

    def rec(i, size_left):
        if i == len(items):
            yield ()
            return
        for mult in range(0, min(max_mult, size_left) + 1):
            for rest in rec(i + 1, size_left - mult):
                yield (items[i],) * mult + rest

    return [m for m in rec(0, max_size)]


def has_dense_image(F: FunctorData, T2, max_mult: int = 4) -> CheckReport:
    src, tgt = F.source, F.target
    if not _full(F):
        return CheckReport(False, "has_dense_image", counterexample={"clause": "full"})
    if not _faithful(F):
        return CheckReport(False, "has_dense_image", counterexample={"clause": "faithful"})
    max_size = max(2, len(src.objects))
    families = _multisets(src.objects, max_size, max_mult)
    witnesses = {}
    for x in tgt.objects:
        found = None
        for fam in families:
            co = tgt.coproduct(tuple(F.on_obj(u) for u in fam))
            if co is None:
                continue
            if fam:
                hom_choices = [tgt.hom(F.on_obj(u), x) for u in fam]
                for phis in iproduct(*hom_choices):
                    induced = tgt.from_coproduct(co, phis)
                    if induced is not None and uni_contains(T2, induced):
                        found = (fam, induced)
                        break
            else:
                for h in tgt.hom(co.apex, x):
                    if uni_contains(T2, h):
                        found = (fam, h)
                        break
            if found:
                break
        if found is None:
            return CheckReport(
                False,
                "has_dense_image",
                counterexample={"object": x, "multiplicity_cap": max_mult},
            )
        witnesses[x] = found
    return CheckReport(True, "has_dense_image", witness={"families": {repr(k): repr(v[0]) for k, v in witnesses.items()}})
