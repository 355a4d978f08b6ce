"""Finite categories: explicit composition tables and the finite-sets ambient.

Two backends share one interface.  TableCategory stores everything as
explicit tables, so limits and colimits are found by exhaustive cone
enumeration and every classification is decidable.  FinSetCat is the
ambient category of extensional finite sets; its limits are constructed
directly and classifications like "every morphism is universal" hold as
meta-facts about finite sets rather than by enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Any, Iterable, Iterator, Optional

ObjId = Any
MorId = Any


@dataclass(frozen=True)
class CheckReport:
    ok: bool
    check: str
    witness: Optional[dict] = None
    counterexample: Optional[dict] = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class PullbackSquare:
    """A chosen fibre product of a cospan (f: A -> X, g: B -> X).

    to_left : apex -> A,  to_right : apex -> B, with f . to_left = g . to_right.
    """

    apex: ObjId
    to_left: MorId
    to_right: MorId
    f: MorId
    g: MorId


@dataclass(frozen=True)
class CoproductCocone:
    apex: ObjId
    injections: tuple


@dataclass(frozen=True)
class CoequalizerCocone:
    apex: ObjId
    quotient: MorId


class TableCategory:
    """A finite category given by explicit tables.

    morphisms: dict MorId -> (src, tgt)
    identity:  dict ObjId -> MorId
    comp:      dict (g, f) -> g.f  for every composable pair (f first)
    """

    backend = "explicit-table"

    def __init__(self, objects, morphisms, identity, comp, name=""):
        self.name = name
        self.objects = tuple(objects)
        self._mor = dict(morphisms)
        self._identity = dict(identity)
        self._comp = dict(comp)
        self._hom = {}
        for m, (a, b) in self._mor.items():
            self._hom.setdefault((a, b), []).append(m)
        for key in self._hom:
            self._hom[key].sort(key=repr)
        self._isos = None

    # -- structure access ------------------------------------------------

    def morphisms(self):
        return list(self._mor)

    def src(self, f):
        return self._mor[f][0]

    def tgt(self, f):
        return self._mor[f][1]

    def identity(self, x):
        return self._identity[x]

    def compose(self, g, f):
        """g after f."""
        if self.src(g) != self.tgt(f):
            raise ValueError(f"not composable: {g!r} after {f!r}")
        return self._comp[(g, f)]

    def hom(self, a, b):
        return list(self._hom.get((a, b), []))

    def is_identity(self, f):
        return self._identity.get(self.src(f)) == f and self.src(f) == self.tgt(f)

    def is_iso(self, f):
        a, b = self._mor[f]
        for g in self.hom(b, a):
            if self.compose(g, f) == self.identity(a) and self.compose(f, g) == self.identity(b):
                return True
        return False

    def inverse(self, f):
        a, b = self._mor[f]
        for g in self.hom(b, a):
            if self.compose(g, f) == self.identity(a) and self.compose(f, g) == self.identity(b):
                return g
        raise ValueError(f"not an isomorphism: {f!r}")

    def isos(self):
        if self._isos is None:
            self._isos = frozenset(f for f in self._mor if self.is_iso(f))
        return self._isos

    # -- limits / colimits by cone enumeration ---------------------------

    def _cospan_cones(self, f, g):
        """All cones (apex, p, q) with f.p = g.q, grouped by apex."""
        a, x = self._mor[f]
        b, _ = self._mor[g]
        by_apex = {}
        for q0 in self.objects:
            cones = set()
            for p in self.hom(q0, a):
                fp = self.compose(f, p)
                for q in self.hom(q0, b):
                    if fp == self.compose(g, q):
                        cones.add((p, q))
            by_apex[q0] = cones
        return by_apex

    def _is_terminal_cone(self, by_apex, apex, legs, leg_targets):
        # A cone is terminal iff, for every object Q, postcomposition with
        # the legs is a bijection hom(Q, apex) -> cones(Q).
        for q0 in self.objects:
            seen = set()
            for u in self.hom(q0, apex):
                c = tuple(self.compose(leg, u) for leg in legs)
                if c in seen:
                    return False
                seen.add(c)
            if seen != by_apex[q0]:
                return False
        return True

    def pullback(self, f, g):
        if self.tgt(f) != self.tgt(g):
            raise ValueError("pullback needs a cospan")
        by_apex = self._cospan_cones(f, g)
        for apex in self.objects:
            for p, q in sorted(by_apex[apex], key=repr):
                if self._is_terminal_cone(by_apex, apex, (p, q), None):
                    return PullbackSquare(apex, p, q, f, g)
        return None

    def into_pullback(self, square, a, b):
        """The unique u with to_left.u = a and to_right.u = b, or None."""
        z = self.src(a)
        if self.src(b) != z:
            raise ValueError("legs must share a source")
        for u in self.hom(z, square.apex):
            if self.compose(square.to_left, u) == a and self.compose(square.to_right, u) == b:
                return u
        return None

    def product(self, a, b):
        """Binary product as a PullbackSquare-shaped pair of projections."""
        by_apex = {}
        for q0 in self.objects:
            by_apex[q0] = set(iproduct(self.hom(q0, a), self.hom(q0, b)))
        for apex in self.objects:
            for p, q in sorted(by_apex[apex], key=repr):
                if self._is_terminal_cone(by_apex, apex, (p, q), None):
                    return PullbackSquare(apex, p, q, None, None)
        return None

    def into_product(self, square, a, b):
        z = self.src(a)
        for u in self.hom(z, square.apex):
            if self.compose(square.to_left, u) == a and self.compose(square.to_right, u) == b:
                return u
        return None

    def _is_initial_cocone(self, by_apex, apex, legs):
        for q0 in self.objects:
            seen = set()
            for u in self.hom(apex, q0):
                c = tuple(self.compose(u, leg) for leg in legs)
                if c in seen:
                    return False
                seen.add(c)
            if seen != by_apex[q0]:
                return False
        return True

    def coproduct(self, objs):
        objs = tuple(objs)
        by_apex = {}
        for q0 in self.objects:
            by_apex[q0] = set(iproduct(*(self.hom(o, q0) for o in objs)))
        for apex in self.objects:
            for legs in sorted(by_apex[apex], key=repr):
                if self._is_initial_cocone(by_apex, apex, legs):
                    return CoproductCocone(apex, legs)
        return None

    def initial_object(self):
        co = self.coproduct(())
        return co.apex if co else None

    def from_coproduct(self, cocone, legs):
        """The unique u with u . inj_i = legs[i], or None."""
        legs = tuple(legs)
        if cocone.injections:
            z = self.tgt(legs[0])
        else:
            # empty coproduct: any object works as codomain of the mediator,
            # caller must give at least a target via legs; fall back below
            raise ValueError("need a codomain for the empty cocone mediator")
        for u in self.hom(cocone.apex, z):
            if all(self.compose(u, i) == leg for i, leg in zip(cocone.injections, legs)):
                return u
        return None

    def coequalizer(self, f, g):
        if self._mor[f][0] != self._mor[g][0] or self._mor[f][1] != self._mor[g][1]:
            raise ValueError("coequalizer needs a parallel pair")
        b = self.tgt(f)
        by_apex = {}
        for q0 in self.objects:
            by_apex[q0] = set(
                (q,) for q in self.hom(b, q0) if self.compose(q, f) == self.compose(q, g)
            )
        for apex in self.objects:
            for (q,) in sorted(by_apex[apex], key=repr):
                if self._is_initial_cocone(by_apex, apex, (q,)):
                    return CoequalizerCocone(apex, q)
        return None

    def is_cocone_coequalizer(self, f, g, apex, q):
        """Whether (apex, q) is an initial cocone for the parallel pair."""
        if self.compose(q, f) != self.compose(q, g):
            return False
        by_apex = {}
        b = self.tgt(f)
        for q0 in self.objects:
            by_apex[q0] = set(
                (h,) for h in self.hom(b, q0) if self.compose(h, f) == self.compose(h, g)
            )
        return self._is_initial_cocone(by_apex, apex, (q,))

    def is_cone_pullback(self, f, g, apex, p, q):
        """Whether (apex, p, q) is a terminal cone over the cospan (f, g)."""
        if self.compose(f, p) != self.compose(g, q):
            return False
        by_apex = self._cospan_cones(f, g)
        return self._is_terminal_cone(by_apex, apex, (p, q), None)

    def has_all_pullbacks(self):
        return False


# ---------------------------------------------------------------------------
# Finite-sets ambient
# ---------------------------------------------------------------------------


class SetMap:
    """An extensional function between finite sets (frozensets)."""

    __slots__ = ("src", "tgt", "mapping", "_hash")

    def __init__(self, src, tgt, mapping):
        src = frozenset(src)
        tgt = frozenset(tgt)
        mapping = dict(mapping)
        if set(mapping) != set(src):
            raise ValueError("mapping domain mismatch")
        if not set(mapping.values()) <= set(tgt):
            raise ValueError("mapping codomain mismatch")
        object.__setattr__(self, "src", src)
        object.__setattr__(self, "tgt", tgt)
        object.__setattr__(self, "mapping", mapping)
        object.__setattr__(self, "_hash", hash((src, tgt, frozenset(mapping.items()))))

    def __setattr__(self, *a):
        raise AttributeError("SetMap is immutable")

    def __call__(self, x):
        return self.mapping[x]

    def __eq__(self, other):
        return (
            isinstance(other, SetMap)
            and self.src == other.src
            and self.tgt == other.tgt
            and self.mapping == other.mapping
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        items = sorted(self.mapping.items(), key=repr)
        return f"SetMap({items})"

    @staticmethod
    def ident(s):
        s = frozenset(s)
        return SetMap(s, s, {x: x for x in s})

    def after(self, other):
        if other.tgt != self.src:
            raise ValueError("not composable")
        return SetMap(other.src, self.tgt, {x: self.mapping[other.mapping[x]] for x in other.src})

    def is_surjective(self):
        return set(self.mapping.values()) == set(self.tgt)

    def is_injective(self):
        return len(set(self.mapping.values())) == len(self.mapping)

    def is_bijective(self):
        return self.is_surjective() and self.is_injective()

    def inverse(self):
        if not self.is_bijective():
            raise ValueError("not a bijection")
        return SetMap(self.tgt, self.src, {v: k for k, v in self.mapping.items()})


class FinSetCat:
    """The ambient category of finite sets and functions.

    Objects are frozensets, morphisms are SetMap values.  Limits and
    colimits are constructed directly; every morphism is universal here,
    and epi is the same as surjective.
    """

    backend = "finite-sets-ambient"
    name = "FinSet"

    def src(self, f):
        return f.src

    def tgt(self, f):
        return f.tgt

    def identity(self, x):
        return SetMap.ident(x)

    def compose(self, g, f):
        return g.after(f)

    def hom(self, a, b):
        a = sorted(a, key=repr)
        if len(b) == 0 and len(a) > 0:
            return
        if len(b) ** len(a) > 1_000_000:
            raise ValueError("hom set too large to enumerate")
        for values in iproduct(sorted(b, key=repr), repeat=len(a)):
            yield SetMap(frozenset(a), frozenset(b), dict(zip(a, values)))

    def is_identity(self, f):
        return f.src == f.tgt and all(f(x) == x for x in f.src)

    def is_iso(self, f):
        return f.is_bijective()

    def inverse(self, f):
        return f.inverse()

    def pullback(self, f, g):
        if f.tgt != g.tgt:
            raise ValueError("pullback needs a cospan")
        apex = frozenset((a, b) for a in f.src for b in g.src if f(a) == g(b))
        p = SetMap(apex, f.src, {x: x[0] for x in apex})
        q = SetMap(apex, g.src, {x: x[1] for x in apex})
        return PullbackSquare(apex, p, q, f, g)

    def into_pullback(self, square, a, b):
        pairs = {z: (a(z), b(z)) for z in a.src}
        if not all(p in square.apex for p in pairs.values()):
            raise ValueError("legs do not factor through the given apex")
        u = SetMap(a.src, square.apex, pairs)
        if square.to_left.after(u) != a or square.to_right.after(u) != b:
            raise ValueError("mediator construction failed")
        return u

    def product(self, a, b):
        apex = frozenset((x, y) for x in a for y in b)
        p = SetMap(apex, a, {t: t[0] for t in apex})
        q = SetMap(apex, b, {t: t[1] for t in apex})
        return PullbackSquare(apex, p, q, None, None)

    def into_product(self, square, a, b):
        return SetMap(a.src, square.apex, {z: (a(z), b(z)) for z in a.src})

    def coproduct(self, objs):
        objs = tuple(objs)
        apex = frozenset((i, x) for i, o in enumerate(objs) for x in o)
        injections = tuple(
            SetMap(o, apex, {x: (i, x) for x in o}) for i, o in enumerate(objs)
        )
        return CoproductCocone(apex, injections)

    def from_coproduct(self, cocone, legs):
        legs = tuple(legs)
        tgt = legs[0].tgt if legs else frozenset()
        mapping = {}
        for inj, leg in zip(cocone.injections, legs):
            for x in inj.src:
                mapping[inj(x)] = leg(x)
        return SetMap(cocone.apex, tgt, mapping)

    def coequalizer(self, f, g):
        if f.src != g.src or f.tgt != g.tgt:
            raise ValueError("coequalizer needs a parallel pair")
        # union-find over the codomain
        parent = {b: b for b in f.tgt}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a in f.src:
            ra, rb = find(f(a)), find(g(a))
            if ra != rb:
                parent[ra] = rb
        classes = {}
        for b in f.tgt:
            classes.setdefault(find(b), set()).add(b)
        apex = frozenset(frozenset(c) for c in classes.values())
        lookup = {b: c for c in apex for b in c}
        q = SetMap(f.tgt, apex, lookup)
        return CoequalizerCocone(apex, q)

    def has_all_pullbacks(self):
        return True


# ---------------------------------------------------------------------------
# Validation and classification
# ---------------------------------------------------------------------------


def validate_category(cat) -> CheckReport:
    if isinstance(cat, FinSetCat):
        return CheckReport(True, "validate_category", witness={"note": "function composition"})
    for x in cat.objects:
        i = cat._identity.get(x)
        if i is None or cat._mor.get(i) != (x, x):
            return CheckReport(False, "validate_category", counterexample={"identity": x})
    for m, (a, b) in cat._mor.items():
        if a not in cat.objects or b not in cat.objects:
            raise ValueError(f"malformed table: dangling endpoint on {m!r}")
    for (g, f), gf in cat._comp.items():
        if f not in cat._mor or g not in cat._mor or gf not in cat._mor:
            raise ValueError(f"malformed table: dangling entry {(g, f)!r}")
    # totality on composable pairs, endpoints of composites
    for f, (a, b) in cat._mor.items():
        for g in cat.morphisms():
            if cat.src(g) != b:
                continue
            gf = cat._comp.get((g, f))
            if gf is None:
                return CheckReport(False, "validate_category", counterexample={"missing": (g, f)})
            if cat._mor[gf] != (a, cat.tgt(g)):
                return CheckReport(
                    False, "validate_category", counterexample={"endpoints": (g, f)}
                )
    # identity laws
    for f in cat.morphisms():
        a, b = cat._mor[f]
        if cat.compose(f, cat.identity(a)) != f or cat.compose(cat.identity(b), f) != f:
            return CheckReport(False, "validate_category", counterexample={"identity_law": f})
    # associativity over composable triples
    by_src = {}
    for m, (a, b) in cat._mor.items():
        by_src.setdefault(a, []).append(m)
    for f in cat.morphisms():
        for g in by_src.get(cat.tgt(f), ()):
            gf = cat.compose(g, f)
            for h in by_src.get(cat.tgt(g), ()):
                if cat.compose(cat.compose(h, g), f) != cat.compose(h, gf):
                    return CheckReport(
                        False, "validate_category", counterexample={"associativity": (h, g, f)}
                    )
    return CheckReport(True, "validate_category")


def pullback(cat, f, g):
    return cat.pullback(f, g)


def coproduct(cat, objs):
    return cat.coproduct(objs)


def coequalizer(cat, f, g):
    return cat.coequalizer(f, g)


def is_universal(cat, f) -> bool:
    """Whether the pullback of f along every morphism with the same target exists."""
    if cat.has_all_pullbacks():
        return True
    x = cat.tgt(f)
    for g in cat.morphisms():
        if cat.tgt(g) == x and cat.pullback(f, g) is None:
            return False
    return True


def is_epi(cat, f) -> bool:
    if isinstance(cat, FinSetCat):
        return f.is_surjective()
    b = cat.tgt(f)
    for z in cat.objects:
        homs = cat.hom(b, z)
        for h1 in homs:
            for h2 in homs:
                if h1 != h2 and cat.compose(h1, f) == cat.compose(h2, f):
                    return False
    return True


def is_effective_epi(cat, f) -> bool:
    """Whether the kernel pair exists and f coequalizes it."""
    kp = cat.pullback(f, f)
    if kp is None:
        return False
    if isinstance(cat, FinSetCat):
        co = cat.coequalizer(kp.to_left, kp.to_right)
        # f is effective iff the mediator from the quotient is a bijection
        mediator = SetMap(co.apex, f.tgt, {c: f(next(iter(c))) for c in co.apex})
        return mediator.is_bijective()
    return cat.is_cocone_coequalizer(kp.to_left, kp.to_right, cat.tgt(f), f)


def universally_effective_epis(cat) -> frozenset:
    """Greatest fixed point: universal effective epis all of whose pullbacks stay in the class."""
    if isinstance(cat, FinSetCat):
        raise ValueError("enumerate only on explicit tables; surjectivity classifies here")
    current = {
        f for f in cat.morphisms() if is_universal(cat, f) and is_effective_epi(cat, f)
    }
    changed = True
    while changed:
        changed = False
        for f in list(current):
            x = cat.tgt(f)
            for g in cat.morphisms():
                if cat.tgt(g) != x:
                    continue
                sq = cat.pullback(f, g)
                if sq is None or sq.to_right not in current:
                    current.discard(f)
                    changed = True
                    break
    return frozenset(current)


def is_universally_effective_epi(cat, f) -> bool:
    if isinstance(cat, FinSetCat):
        return f.is_surjective()
    return f in universally_effective_epis(cat)


# ---------------------------------------------------------------------------
# Functors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FunctorData:
    source: Any
    target: Any
    obj_map: dict
    mor_map: dict
    name: str = ""

    def on_obj(self, x):
        return self.obj_map[x]

    def on_mor(self, f):
        return self.mor_map[f]


def identity_functor(cat, name="id"):
    return FunctorData(
        cat,
        cat,
        {x: x for x in cat.objects},
        {f: f for f in cat.morphisms()},
        name=name,
    )


def compose_functors(g: FunctorData, f: FunctorData) -> FunctorData:
    return FunctorData(
        f.source,
        g.target,
        {x: g.on_obj(f.on_obj(x)) for x in f.obj_map},
        {m: g.on_mor(f.on_mor(m)) for m in f.mor_map},
        name=f"{g.name}.{f.name}",
    )


def validate_functor(F: FunctorData) -> CheckReport:
    src, tgt = F.source, F.target
    for x in src.objects:
        if x not in F.obj_map:
            raise ValueError(f"dangling object map entry: {x!r}")
        if F.on_mor(src.identity(x)) != tgt.identity(F.on_obj(x)):
            return CheckReport(False, "validate_functor", counterexample={"identity": x})
    for m in src.morphisms():
        if m not in F.mor_map:
            raise ValueError(f"dangling morphism map entry: {m!r}")
        im = F.on_mor(m)
        if tgt.src(im) != F.on_obj(src.src(m)) or tgt.tgt(im) != F.on_obj(src.tgt(m)):
            return CheckReport(False, "validate_functor", counterexample={"endpoints": m})
    for f in src.morphisms():
        for g in src.morphisms():
            if src.src(g) != src.tgt(f):
                continue
            if F.on_mor(src.compose(g, f)) != tgt.compose(F.on_mor(g), F.on_mor(f)):
                return CheckReport(False, "validate_functor", counterexample={"composition": (g, f)})
    return CheckReport(True, "validate_functor")


def is_faithful(F: FunctorData) -> bool:
    src = F.source
    for a in src.objects:
        for b in src.objects:
            seen = {}
            for f in src.hom(a, b):
                im = F.on_mor(f)
                if im in seen:
                    return False
                seen[im] = f
    return True


def is_full(F: FunctorData) -> bool:
    src, tgt = F.source, F.target
    for a in src.objects:
        for b in src.objects:
            images = {F.on_mor(f) for f in src.hom(a, b)}
            for g in tgt.hom(F.on_obj(a), F.on_obj(b)):
                if g not in images:
                    return False
    return True


def _existing_binary_coproducts(cat):
    """All (a, b, cocone) with a chosen existing coproduct, pairs unordered."""
    out = []
    seen = set()
    for a in cat.objects:
        for b in cat.objects:
            key = frozenset({a, b}) if a != b else (a, a)
            if key in seen:
                continue
            seen.add(key)
            co = cat.coproduct((a, b))
            if co is not None:
                out.append((a, b, co))
    return out


def coproduct_is_disjoint_stable(cat, co) -> bool:
    """Whether the given binary coproduct cocone is disjoint and stable
    under the pullbacks that exist."""
    i1, i2 = co.injections
    init = cat.initial_object()
    if init is None:
        return False
    sq = cat.pullback(i1, i2)
    if sq is None or not _isomorphic_objects(cat, sq.apex, init):
        return False
    for f in cat.morphisms():
        if cat.tgt(f) != co.apex:
            continue
        s1, s2 = cat.pullback(i1, f), cat.pullback(i2, f)
        if s1 is None or s2 is None:
            return False
        parts = cat.coproduct((s1.apex, s2.apex))
        if parts is None:
            return False
        u = cat.from_coproduct(parts, (s1.to_right, s2.to_right))
        if u is None or not cat.is_iso(u):
            return False
    return True


def preserves_coproducts(F: FunctorData, which: str = "all") -> bool:
    """Existing source coproducts map to coproduct cocones in the target.

    which='disjoint' quantifies only over the disjoint pullback-stable
    source coproducts, matching the disjoint extensivity mode.
    """
    if which not in ("all", "disjoint"):
        raise ValueError(f"unknown coproduct scope {which!r}")
    src, tgt = F.source, F.target
    init = src.coproduct(())
    if init is not None:
        im = F.on_obj(init.apex)
        by_apex = {q0: {()} for q0 in tgt.objects}
        if not tgt._is_initial_cocone(by_apex, im, ()):
            return False
    for a, b, co in _existing_binary_coproducts(src):
        if which == "disjoint" and not coproduct_is_disjoint_stable(src, co):
            continue
        fa, fb = F.on_obj(a), F.on_obj(b)
        legs = tuple(F.on_mor(i) for i in co.injections)
        by_apex = {
            q0: set(iproduct(tgt.hom(fa, q0), tgt.hom(fb, q0))) for q0 in tgt.objects
        }
        if not tgt._is_initial_cocone(by_apex, F.on_obj(co.apex), legs):
            return False
    return True


def _isomorphic_objects(cat, a, b):
    return a == b or any(cat.is_iso(f) for f in cat.hom(a, b))


def inverts_coproducts(F: FunctorData) -> bool:
    """Full and faithful, and components of target decompositions of images
    are isomorphic to images of source objects."""
    if not (is_full(F) and is_faithful(F)):
        return False
    src, tgt = F.source, F.target
    images = {F.on_obj(x) for x in src.objects}

    def component_ok(c):
        return any(_isomorphic_objects(tgt, c, im) for im in images)

    for x in src.objects:
        fx = F.on_obj(x)
        for a, b, co in _existing_binary_coproducts(tgt):
            if _isomorphic_objects(tgt, co.apex, fx):
                if not (component_ok(a) and component_ok(b)):
                    return False
    return True


def is_extensive(cat) -> CheckReport:
    """Initial object; existing binary coproducts disjoint and pullback-stable."""
    if isinstance(cat, FinSetCat):
        return CheckReport(True, "is_extensive", witness={"note": "finite sets"})
    init = cat.coproduct(())
    if init is None:
        return CheckReport(False, "is_extensive", counterexample={"initial_object": None})
    initial = init.apex
    for a, b, co in _existing_binary_coproducts(cat):
        i1, i2 = co.injections
        sq = cat.pullback(i1, i2)
        if sq is None or not _isomorphic_objects(cat, sq.apex, initial):
            return CheckReport(
                False,
                "is_extensive",
                counterexample={"coproduct": (a, b, co.apex), "reason": "not disjoint"},
            )
        for f in cat.morphisms():
            if cat.tgt(f) != co.apex:
                continue
            s1 = cat.pullback(i1, f)
            s2 = cat.pullback(i2, f)
            if s1 is None or s2 is None:
                return CheckReport(
                    False,
                    "is_extensive",
                    counterexample={"coproduct": (a, b, co.apex), "pullback_along": f},
                )
            parts = cat.coproduct((s1.apex, s2.apex))
            if parts is None:
                return CheckReport(
                    False,
                    "is_extensive",
                    counterexample={"coproduct": (a, b, co.apex), "decomposition_along": f},
                )
            u = cat.from_coproduct(parts, (s1.to_right, s2.to_right))
            if u is None or not cat.is_iso(u):
                return CheckReport(
                    False,
                    "is_extensive",
                    counterexample={"coproduct": (a, b, co.apex), "stability_along": f},
                )
    return CheckReport(True, "is_extensive")


# ---------------------------------------------------------------------------
# Slice categories
# ---------------------------------------------------------------------------


def slice_category(F: FunctorData, y):
    """The category F/y of pairs (x, psi: F(x) -> y), with its projection."""
    src, tgt = F.source, F.target
    objects = []
    for x in src.objects:
        for psi in tgt.hom(F.on_obj(x), y):
            objects.append((x, psi))
    morphisms = {}
    identity = {}
    for (x1, p1) in objects:
        for (x2, p2) in objects:
            for f in src.hom(x1, x2):
                if tgt.compose(p2, F.on_mor(f)) == p1:
                    morphisms[((x1, p1), (x2, p2), f)] = ((x1, p1), (x2, p2))
    for o in objects:
        identity[o] = (o, o, src.identity(o[0]))
    comp = {}
    for m1, (a1, b1) in morphisms.items():
        for m2, (a2, b2) in morphisms.items():
            if a2 == b1:
                comp[(m2, m1)] = (a1, b2, src.compose(m2[2], m1[2]))
    cat = TableCategory(objects, morphisms, identity, comp, name=f"{F.name}/{y!r}")
    projection = FunctorData(
        cat,
        src,
        {o: o[0] for o in objects},
        {m: m[2] for m in morphisms},
        name="slice-projection",
    )
    return cat, projection
