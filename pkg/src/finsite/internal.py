"""Groupoids, actions, principal bundles, bibundles and anafunctors
internal to an ambient category.

Structures are constructed elementwise in the finite-sets ambient, while
all validation goes through the ambient interface (composition, pullbacks,
mediating morphisms) so that images under ambient functors revalidate in
explicit-table ambients as well.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Any, Optional

from .fincat import CheckReport, FinSetCat, PullbackSquare, SetMap, is_universal
from . import site as _site


def _is_fibre_product(amb, square) -> bool:
    """Whether the square is a terminal cone over its cospan (f, g)."""
    f, g = square.f, square.g
    if amb.compose(f, square.to_left) != amb.compose(g, square.to_right):
        return False
    if isinstance(amb, FinSetCat):
        can = amb.pullback(f, g)
        pairs = {z: (square.to_left(z), square.to_right(z)) for z in square.apex}
        if set(pairs.values()) - set(can.apex):
            return False
        u = SetMap(square.apex, can.apex, pairs)
        return u.is_bijective()
    return amb.is_cone_pullback(f, g, square.apex, square.to_left, square.to_right)


class InternalGroupoid:
    """A groupoid object: X1 over X0 with unit, composition and inverse.

    comp is defined on the chosen fibre product X2 = X1 x_{s,t} X1 whose
    left leg carries the outer factor (pairs (g, h) with s(g) = t(h),
    composite "g after h").
    """

    def __init__(self, ambient, X0, X1, s, t, i, comp, inv, X2=None, name=""):
        self.ambient = ambient
        self.X0 = X0
        self.X1 = X1
        self.s = s
        self.t = t
        self.i = i
        self.comp = comp
        self.inv = inv
        self.name = name
        if X2 is None:
            X2 = ambient.pullback(s, t)
        self.X2 = X2

    def __repr__(self):
        return f"InternalGroupoid({self.name!r})"


def make_groupoid(ambient, X0, X1, s, t, i, comp, inv, name=""):
    """Build a finite-sets groupoid from elementwise python functions."""
    X0, X1 = frozenset(X0), frozenset(X1)
    s_m = SetMap(X1, X0, {g: s(g) for g in X1})
    t_m = SetMap(X1, X0, {g: t(g) for g in X1})
    i_m = SetMap(X0, X1, {x: i(x) for x in X0})
    X2 = ambient.pullback(s_m, t_m)
    comp_m = SetMap(X2.apex, X1, {(g, h): comp(g, h) for (g, h) in X2.apex})
    inv_m = SetMap(X1, X1, {g: inv(g) for g in X1})
    return InternalGroupoid(ambient, X0, X1, s_m, t_m, i_m, comp_m, inv_m, X2, name=name)


def _pair(amb, square, a, b):
    u = amb.into_pullback(square, a, b)
    if u is None:
        raise ValueError("mediating morphism into fibre product not found")
    return u


def validate_groupoid(G, check_universality=True) -> CheckReport:
    amb = G.ambient

    def fail(axiom, **data):
        return CheckReport(False, "validate_groupoid", counterexample={"axiom": axiom, **data})

    c = amb.compose
    if amb.src(G.s) != G.X1 or amb.tgt(G.s) != G.X0:
        return fail("source-endpoints")
    if amb.src(G.t) != G.X1 or amb.tgt(G.t) != G.X0:
        return fail("target-endpoints")
    if check_universality:
        if not (is_universal(amb, G.s) and is_universal(amb, G.t)):
            return fail("source-target-universal")
    if not _is_fibre_product(amb, G.X2):
        return fail("X2")
    pr1, pr2 = G.X2.to_left, G.X2.to_right
    if amb.src(G.comp) != G.X2.apex or amb.tgt(G.comp) != G.X1:
        return fail("comp-endpoints")
    X3 = amb.pullback(c(G.s, pr2), G.t)
    if X3 is None:
        return fail("X3")
    id0, id1 = amb.identity(G.X0), amb.identity(G.X1)
    if c(G.s, G.i) != id0 or c(G.t, G.i) != id0:
        return fail("unit-section")
    if c(G.s, G.comp) != c(G.s, pr2) or c(G.t, G.comp) != c(G.t, pr1):
        return fail("comp-endpoints-compat")
    if c(G.comp, _pair(amb, G.X2, c(G.i, G.t), id1)) != id1:
        return fail("left-unit")
    if c(G.comp, _pair(amb, G.X2, id1, c(G.i, G.s))) != id1:
        return fail("right-unit")
    q12, q3 = X3.to_left, X3.to_right
    left = c(G.comp, _pair(amb, G.X2, c(G.comp, q12), q3))
    inner = _pair(amb, G.X2, c(pr2, q12), q3)
    right = c(G.comp, _pair(amb, G.X2, c(pr1, q12), c(G.comp, inner)))
    if left != right:
        return fail("associativity")
    if c(G.s, G.inv) != G.t or c(G.t, G.inv) != G.s:
        return fail("inverse-endpoints")
    if c(G.comp, _pair(amb, G.X2, G.inv, id1)) != c(G.i, G.s):
        return fail("left-inverse")
    if c(G.comp, _pair(amb, G.X2, id1, G.inv)) != c(G.i, G.t):
        return fail("right-inverse")
    return CheckReport(True, "validate_groupoid")


def opposite_groupoid(G) -> InternalGroupoid:
    amb = G.ambient
    X2op = amb.pullback(G.t, G.s)
    comp_op = amb.compose(G.comp, _pair(amb, G.X2, X2op.to_right, X2op.to_left))
    return InternalGroupoid(
        amb, G.X0, G.X1, G.t, G.s, G.i, comp_op, G.inv, X2op, name=f"{G.name}^op"
    )


# ---------------------------------------------------------------------------
# Internal functors and weak equivalences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InternalFunctor:
    src_gpd: InternalGroupoid
    tgt_gpd: InternalGroupoid
    F0: Any
    F1: Any
    name: str = ""


def validate_internal_functor(F: InternalFunctor) -> CheckReport:
    G, H = F.src_gpd, F.tgt_gpd
    amb = G.ambient
    c = amb.compose

    def fail(what):
        return CheckReport(False, "validate_internal_functor", counterexample={"axiom": what})

    if amb.src(F.F0) != G.X0 or amb.tgt(F.F0) != H.X0:
        return fail("F0-endpoints")
    if amb.src(F.F1) != G.X1 or amb.tgt(F.F1) != H.X1:
        return fail("F1-endpoints")
    if c(H.s, F.F1) != c(F.F0, G.s) or c(H.t, F.F1) != c(F.F0, G.t):
        return fail("source-target")
    if c(F.F1, G.i) != c(H.i, F.F0):
        return fail("unit")
    both = _pair(amb, H.X2, c(F.F1, G.X2.to_left), c(F.F1, G.X2.to_right))
    if c(F.F1, G.comp) != c(H.comp, both):
        return fail("composition")
    return CheckReport(True, "validate_internal_functor")


def compose_internal_functors(G2: InternalFunctor, G1: InternalFunctor) -> InternalFunctor:
    amb = G1.src_gpd.ambient
    return InternalFunctor(
        G1.src_gpd,
        G2.tgt_gpd,
        amb.compose(G2.F0, G1.F0),
        amb.compose(G2.F1, G1.F1),
        name=f"{G2.name}.{G1.name}",
    )


def identity_internal_functor(G) -> InternalFunctor:
    amb = G.ambient
    return InternalFunctor(G, G, amb.identity(G.X0), amb.identity(G.X1), name="id")


def is_fully_faithful(F: InternalFunctor) -> bool:
    """The square over the pairs of endpoints is a pullback."""
    G, H = F.src_gpd, F.tgt_gpd
    amb = G.ambient
    c = amb.compose
    gg = amb.product(G.X0, G.X0)
    hh = amb.product(H.X0, H.X0)
    if gg is None or hh is None:
        raise ValueError("ambient lacks the products needed for fully-faithfulness")
    ts_h = amb.into_product(hh, H.t, H.s)
    f0f0 = amb.into_product(hh, c(F.F0, gg.to_left), c(F.F0, gg.to_right))
    q = amb.pullback(f0f0, ts_h)
    if q is None:
        return False
    ts_g = amb.into_product(gg, G.t, G.s)
    u = amb.into_pullback(q, ts_g, F.F1)
    return u is not None and amb.is_iso(u)


def essential_surjectivity_map(F: InternalFunctor):
    G, H = F.src_gpd, F.tgt_gpd
    amb = G.ambient
    e = amb.pullback(F.F0, H.t)
    return amb.compose(H.s, e.to_right)


def is_essentially_surjective(F: InternalFunctor, T) -> bool:
    return _site.uni_contains(T, essential_surjectivity_map(F))


def is_weak_equivalence(F: InternalFunctor, T) -> bool:
    return is_fully_faithful(F) and is_essentially_surjective(F, T)


# ---------------------------------------------------------------------------
# Refinement groupoids G^pi
# ---------------------------------------------------------------------------


def refine_groupoid(G, pi) -> InternalGroupoid:
    """The groupoid G^pi on objects Y along pi: Y -> G0 (finite-sets ambient)."""
    amb = G.ambient
    if not isinstance(amb, FinSetCat):
        raise ValueError("refinement groupoids are constructed in the finite-sets ambient")
    Y = pi.src
    A = amb.pullback(pi, G.t)
    B = amb.pullback(amb.compose(G.s, A.to_right), pi)
    arrows = B.apex  # elements ((y1, g), y2) with pi(y1) = t(g), s(g) = pi(y2)
    s1 = SetMap(arrows, Y, {m: m[1] for m in arrows})
    t1 = SetMap(arrows, Y, {m: m[0][0] for m in arrows})
    i1 = SetMap(Y, arrows, {y: ((y, G.i(pi(y))), y) for y in Y})
    inv1 = SetMap(arrows, arrows, {m: ((m[1], G.inv(m[0][1])), m[0][0]) for m in arrows})
    X2 = amb.pullback(s1, t1)
    comp1 = SetMap(
        X2.apex,
        arrows,
        {
            (m1, m2): ((m1[0][0], G.comp((m1[0][1], m2[0][1]))), m2[1])
            for (m1, m2) in X2.apex
        },
    )
    return InternalGroupoid(amb, Y, arrows, s1, t1, i1, comp1, inv1, X2, name=f"{G.name}^pi")


def refine_functor(F: InternalFunctor, Gpi: InternalGroupoid, pi) -> InternalFunctor:
    """Precompose a functor out of G with the projection G^pi -> G."""
    amb = F.src_gpd.ambient
    F0 = amb.compose(F.F0, pi)
    F1 = SetMap(Gpi.X1, F.tgt_gpd.X1, {m: F.F1(m[0][1]) for m in Gpi.X1})
    return InternalFunctor(Gpi, F.tgt_gpd, F0, F1, name=f"{F.name}^pi")


def refinement_to_base(G, Gpi: InternalGroupoid, pi) -> InternalFunctor:
    """The canonical weak equivalence G^pi -> G (object part pi)."""
    F1 = SetMap(Gpi.X1, G.X1, {m: m[0][1] for m in Gpi.X1})
    return InternalFunctor(Gpi, G, pi, F1, name="to-base")


def refinement_functor(G, rho, pi_prime) -> InternalFunctor:
    """For the triangle pi = pi' . rho, the functor G^pi -> G^{pi'}."""
    amb = G.ambient
    pi = amb.compose(pi_prime, rho)
    Gpi = refine_groupoid(G, pi)
    Gpi2 = refine_groupoid(G, pi_prime)
    F1 = SetMap(
        Gpi.X1, Gpi2.X1, {m: ((rho(m[0][0]), m[0][1]), rho(m[1])) for m in Gpi.X1}
    )
    return InternalFunctor(Gpi, Gpi2, rho, F1, name="refinement")


# ---------------------------------------------------------------------------
# Actions and principal bundles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RightAction:
    gpd: InternalGroupoid
    carrier: Any
    anchor: Any
    act: Any
    dom: PullbackSquare  # fibre product of (anchor, t)


@dataclass(frozen=True)
class LeftAction:
    gpd: InternalGroupoid
    carrier: Any
    anchor: Any
    act: Any
    dom: PullbackSquare  # fibre product of (s, anchor); elements (g, x)


def validate_action(a: RightAction, G=None) -> CheckReport:
    G = G or a.gpd
    amb = G.ambient
    c = amb.compose

    def fail(what):
        return CheckReport(False, "validate_action", counterexample={"axiom": what})

    if a.dom.f != a.anchor or a.dom.g != G.t:
        return fail("domain-cospan")
    if not _is_fibre_product(amb, a.dom):
        return fail("domain")
    pr1, pr2 = a.dom.to_left, a.dom.to_right
    if amb.src(a.act) != a.dom.apex or amb.tgt(a.act) != a.carrier:
        return fail("act-endpoints")
    if c(a.anchor, a.act) != c(G.s, pr2):
        return fail("anchor-square")
    d = amb.pullback(c(G.s, pr2), G.t)
    d12, d3 = d.to_left, d.to_right
    rho_then = _pair(amb, a.dom, c(a.act, d12), d3)
    inner = _pair(amb, G.X2, c(pr2, d12), d3)
    comp_then = _pair(amb, a.dom, c(pr1, d12), c(G.comp, inner))
    if c(a.act, rho_then) != c(a.act, comp_then):
        return fail("associativity-square")
    return CheckReport(True, "validate_action")


def left_action_as_right(a: LeftAction):
    """A left action is a right action of the opposite groupoid."""
    amb = a.gpd.ambient
    gop = opposite_groupoid(a.gpd)
    dom = amb.pullback(a.anchor, gop.t)  # pairs (x, g) with anchor(x) = s(g)
    act = SetMap(dom.apex, a.carrier, {(x, g): a.act((g, x)) for (x, g) in dom.apex})
    return RightAction(gop, a.carrier, a.anchor, act, dom)


def validate_left_action(a: LeftAction) -> CheckReport:
    G = a.gpd
    amb = G.ambient
    if a.dom.f != G.s or a.dom.g != a.anchor:
        return CheckReport(False, "validate_action", counterexample={"axiom": "domain-cospan"})
    if not _is_fibre_product(amb, a.dom):
        return CheckReport(False, "validate_action", counterexample={"axiom": "domain"})
    return validate_action(left_action_as_right(a))


@dataclass(frozen=True)
class Bundle:
    gpd: InternalGroupoid
    action: RightAction
    base: Any
    p: Any
    designated_pb: Optional[PullbackSquare] = None


def shear_map(B: Bundle):
    """The mediator (pr1, rho) into the chosen fibre product P x_X P."""
    amb = B.gpd.ambient
    rep = B.designated_pb
    pr1, act = B.action.dom.to_left, B.action.act
    if rep is not None:
        if rep.apex == B.action.dom.apex and rep.to_left == pr1 and rep.to_right == act:
            # the designated representative is the shear cone itself
            return amb.identity(rep.apex)
        return _pair(amb, rep, pr1, act)
    rep = amb.pullback(B.p, B.p)
    if rep is None:
        raise ValueError("the fibre product P x_X P does not exist")
    return _pair(amb, rep, pr1, act)


def validate_principal_bundle(B: Bundle, G=None) -> CheckReport:
    G = G or B.gpd
    amb = G.ambient
    c = amb.compose

    def fail(what):
        return CheckReport(False, "validate_principal_bundle", counterexample={"axiom": what})

    rep = validate_action(B.action, G)
    if not rep.ok:
        return rep
    if amb.src(B.p) != B.action.carrier or amb.tgt(B.p) != B.base:
        return fail("projection-endpoints")
    if c(B.p, B.action.act) != c(B.p, B.action.dom.to_left):
        return fail("invariance")
    if not is_universal(amb, B.p):
        return fail("projection-universal")
    if B.designated_pb is not None:
        d = B.designated_pb
        if d.f != B.p or d.g != B.p or not _is_fibre_product(amb, d):
            return fail("designated-fibre-product")
    try:
        sh = shear_map(B)
    except ValueError:
        return fail("shear-domain")
    if sh is None or not amb.is_iso(sh):
        return fail("shear-not-iso")
    return CheckReport(True, "validate_principal_bundle")


def trivial_bundle(G, psi) -> Bundle:
    """The trivial bundle I_psi = U x_{psi,t} G1 over U = src(psi)."""
    amb = G.ambient
    U = amb.src(psi)
    Q = amb.pullback(psi, G.t)
    P = Q.apex
    p = Q.to_left
    anchor = amb.compose(G.s, Q.to_right)
    dom = amb.pullback(anchor, G.t)
    inner = _pair(amb, G.X2, amb.compose(Q.to_right, dom.to_left), dom.to_right)
    act = _pair(amb, Q, amb.compose(p, dom.to_left), amb.compose(G.comp, inner))
    action = RightAction(G, P, anchor, act, dom)
    designated = PullbackSquare(dom.apex, dom.to_left, act, p, p)
    return Bundle(G, action, U, p, designated)


def groupoid_as_bundle(G) -> Bundle:
    """The target map t: G1 -> G0 with right translation is principal."""
    action = RightAction(G, G.X1, G.s, G.comp, G.X2)
    return Bundle(G, action, G.X0, G.t)


def pullback_bundle(f, B: Bundle) -> Bundle:
    amb = B.gpd.ambient
    if not isinstance(amb, FinSetCat):
        raise ValueError("bundle pullbacks are constructed in the finite-sets ambient")
    Q = amb.pullback(f, B.p)
    carrier = Q.apex
    anchor = amb.compose(B.action.anchor, Q.to_right)
    dom = amb.pullback(anchor, B.gpd.t)
    act = SetMap(
        dom.apex,
        carrier,
        {((z, y), g): (z, B.action.act((y, g))) for ((z, y), g) in dom.apex},
    )
    action = RightAction(B.gpd, carrier, anchor, act, dom)
    return Bundle(B.gpd, action, f.src, Q.to_left)


def bundle_morphisms(B1: Bundle, B2: Bundle):
    """All equivariant morphisms over the common base (finite-sets ambient)."""
    amb = B1.gpd.ambient
    out = []
    for h in amb.hom(B1.action.carrier, B2.action.carrier):
        if amb.compose(B2.p, h) != B1.p:
            continue
        if amb.compose(B2.action.anchor, h) != B1.action.anchor:
            continue
        if all(
            h(B1.action.act((x, g))) == B2.action.act((h(x), g))
            for (x, g) in B1.action.dom.apex
        ):
            out.append(h)
    return out


def bundles_isomorphic(B1: Bundle, B2: Bundle) -> bool:
    return any(h.is_bijective() for h in bundle_morphisms(B1, B2))


# ---------------------------------------------------------------------------
# Local triviality, sections and trivializations
# ---------------------------------------------------------------------------


def is_locally_trivial(B: Bundle, T) -> CheckReport:
    w = _site.is_locally_split(T, B.p)
    if w is None:
        return CheckReport(False, "is_locally_trivial", counterexample={"projection": repr(B.p)})
    return CheckReport(True, "is_locally_trivial", witness={"covering": w.covering})


def sections_over(B: Bundle, pi):
    amb = B.gpd.ambient
    return [
        sigma
        for sigma in amb.hom(amb.src(pi), B.action.carrier)
        if amb.compose(B.p, sigma) == pi
    ]


@dataclass(frozen=True)
class Trivialization:
    psi: Any  # anchor U -> G0
    phi: Any  # I_psi carrier -> pulled-back carrier, over U and equivariant


def section_to_trivialization(B: Bundle, sigma, pi) -> Trivialization:
    amb = B.gpd.ambient
    G = B.gpd
    psi = amb.compose(B.action.anchor, sigma)
    I = trivial_bundle(G, psi)
    pulled = amb.pullback(pi, B.p)
    phi = SetMap(
        I.action.carrier,
        pulled.apex,
        {(u, g): (u, B.action.act((sigma(u), g))) for (u, g) in I.action.carrier},
    )
    return Trivialization(psi, phi)


def trivialization_to_section(B: Bundle, triv: Trivialization, pi):
    amb = B.gpd.ambient
    G = B.gpd
    U = amb.src(pi)
    return SetMap(U, B.action.carrier, {u: triv.phi((u, G.i(triv.psi(u))))[1] for u in U})


def validate_trivialization(B: Bundle, triv: Trivialization, pi) -> bool:
    amb = B.gpd.ambient
    G = B.gpd
    if not triv.phi.is_bijective():
        return False
    I = trivial_bundle(G, triv.psi)
    pulled = pullback_bundle(pi, B)
    phi = triv.phi
    if any(phi((u, g))[0] != u for (u, g) in I.action.carrier):
        return False
    return all(
        phi(I.action.act(((u, g), h))) == pulled.action.act((phi((u, g)), h))
        for ((u, g), h) in I.action.dom.apex
    )


# ---------------------------------------------------------------------------
# Bibundles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Bibundle:
    left_gpd: InternalGroupoid
    right_gpd: InternalGroupoid
    carrier: Any
    left: LeftAction
    right: RightAction
    designated_pb: Optional[PullbackSquare] = None


def right_bundle(P: Bibundle) -> Bundle:
    """The right structure as a principal bundle over G0 via the left anchor."""
    return Bundle(P.right_gpd, P.right, P.left_gpd.X0, P.left.anchor, P.designated_pb)


def validate_bibundle(P: Bibundle) -> CheckReport:
    amb = P.left_gpd.ambient

    def fail(what):
        return CheckReport(False, "validate_bibundle", counterexample={"axiom": what})

    rep = validate_left_action(P.left)
    if not rep.ok:
        return rep
    rep = validate_action(P.right, P.right_gpd)
    if not rep.ok:
        return rep
    # the anchors ignore the opposite actions
    c = amb.compose
    if c(P.left.anchor, P.right.act) != c(P.left.anchor, P.right.dom.to_left):
        return fail("left-anchor-right-invariant")
    la_act = P.left.act
    if not all(
        P.right.anchor(la_act((g, x))) == P.right.anchor(x) for (g, x) in P.left.dom.apex
    ):
        return fail("right-anchor-left-invariant")
    # the two actions commute
    for (g, x) in P.left.dom.apex:
        for h in P.right_gpd.X1:
            if P.right_gpd.t(h) != P.right.anchor(x):
                continue
            lhs = P.right.act((la_act((g, x)), h))
            rhs = la_act((g, P.right.act((x, h))))
            if lhs != rhs:
                return fail("actions-commute")
    return validate_principal_bundle(right_bundle(P))


def bibundle_from_functor(F: InternalFunctor) -> Bibundle:
    """P_F = G0 x_{F0,t} H1, the trivial right H-bundle with anchor F0."""
    G, H = F.src_gpd, F.tgt_gpd
    amb = G.ambient
    if not isinstance(amb, FinSetCat):
        raise ValueError("bibundles are constructed in the finite-sets ambient")
    tb = trivial_bundle(H, F.F0)  # carrier {(a, h): F0(a) = t(h)}, base G0
    carrier = tb.action.carrier
    left_anchor = tb.p  # pr1: P -> G0
    ldom = amb.pullback(G.s, left_anchor)  # pairs (g, (a, h)) with s(g) = a
    lact = SetMap(
        ldom.apex,
        carrier,
        {(g, (a, h)): (G.t(g), H.comp((F.F1(g), h))) for (g, (a, h)) in ldom.apex},
    )
    left = LeftAction(G, carrier, left_anchor, lact, ldom)
    return Bibundle(G, H, carrier, left, tb.action, tb.designated_pb)


# ---------------------------------------------------------------------------
# Anafunctors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Anafunctor:
    gpd_src: InternalGroupoid
    gpd_tgt: InternalGroupoid
    pi: Any  # Y -> G0, a member of Uni(T)
    functor: InternalFunctor  # G^pi -> H
    name: str = ""


def validate_anafunctor(A: Anafunctor, T) -> CheckReport:
    if not _site.uni_contains(T, A.pi):
        return CheckReport(
            False, "validate_anafunctor", counterexample={"axiom": "pi-not-in-Uni"}
        )
    return validate_internal_functor(A.functor)


def anafunctor_from_functor(F: InternalFunctor) -> Anafunctor:
    G = F.src_gpd
    amb = G.ambient
    pi = amb.identity(G.X0)
    Gid = refine_groupoid(G, pi)
    return Anafunctor(G, F.tgt_gpd, pi, refine_functor(F, Gid, pi), name=f"ana({F.name})")


def _shear_inverse(B: Bundle):
    """The inverse of the shear map onto the canonical pair-set fibre product."""
    amb = B.gpd.ambient
    can = amb.pullback(B.p, B.p)
    sh = _pair(amb, can, B.action.dom.to_left, B.action.act)
    return sh.inverse()


def anafunctor_from_bibundle(P: Bibundle, T) -> Anafunctor:
    """Ana(P): the anafunctor of a locally trivial bibundle."""
    G, H = P.left_gpd, P.right_gpd
    amb = G.ambient
    pi = P.left.anchor
    if not _site.uni_contains(T, pi):
        raise ValueError("the bibundle is not locally trivial for this topology")
    Gpi = refine_groupoid(G, pi)
    inv = _shear_inverse(right_bundle(P))
    mapping = {}
    for m in Gpi.X1:
        ((x1, g), x2) = m
        moved = P.left.act((g, x2))
        mapping[m] = inv((x1, moved))[1]
    F1 = SetMap(Gpi.X1, H.X1, mapping)
    F = InternalFunctor(Gpi, H, P.right.anchor, F1, name="Ana")
    return Anafunctor(G, H, pi, F, name="Ana")


def is_weakly_invertible_anafunctor(A: Anafunctor, T) -> bool:
    return is_weak_equivalence(A.functor, T)


def anafunctor_transformations(A1: Anafunctor, A2: Anafunctor):
    """All natural transformations between two anafunctors G -> H,
    enumerated over the common refinement Y x_{G0} Y'."""
    G = A1.gpd_src
    H = A1.gpd_tgt
    amb = G.ambient
    z_sq = amb.pullback(A1.pi, A2.pi)
    Z = z_sq.apex  # pairs (y, y')
    F0_1, F1_1 = A1.functor.F0, A1.functor.F1
    F0_2, F1_2 = A2.functor.F0, A2.functor.F1
    candidates = {}
    for z in Z:
        y, y2 = z
        candidates[z] = [
            h for h in H.X1 if H.t(h) == F0_1(y) and H.s(h) == F0_2(y2)
        ]
        if not candidates[z]:
            return []
    zs = sorted(Z, key=repr)
    out = []
    for values in iproduct(*(candidates[z] for z in zs)):
        eta = dict(zip(zs, values))
        ok = True
        for z1 in Z:
            for z2 in Z:
                for g in G.X1:
                    if G.t(g) != A1.pi(z1[0]) or G.s(g) != A1.pi(z2[0]):
                        continue
                    if A2.pi(z1[1]) != G.t(g) or G.s(g) != A2.pi(z2[1]):
                        continue
                    m1 = ((z1[0], g), z2[0])
                    m2 = ((z1[1], g), z2[1])
                    lhs = H.comp((F1_1(m1), eta[z2]))
                    rhs = H.comp((eta[z1], F1_2(m2)))
                    if lhs != rhs:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            out.append(SetMap(frozenset(Z), H.X1, eta))
    return out


def are_isomorphic_anafunctors(A1: Anafunctor, A2: Anafunctor) -> bool:
    return bool(anafunctor_transformations(A1, A2))


# ---------------------------------------------------------------------------
# Images under ambient functors
# ---------------------------------------------------------------------------


def _map_square(F, sq: PullbackSquare) -> PullbackSquare:
    return PullbackSquare(
        F.on_obj(sq.apex),
        F.on_mor(sq.to_left),
        F.on_mor(sq.to_right),
        F.on_mor(sq.f) if sq.f is not None else None,
        F.on_mor(sq.g) if sq.g is not None else None,
    )


def map_groupoid(F, G: InternalGroupoid) -> InternalGroupoid:
    """Apply an ambient functor to a groupoid, carrying the fibre product."""
    return InternalGroupoid(
        F.target,
        F.on_obj(G.X0),
        F.on_obj(G.X1),
        F.on_mor(G.s),
        F.on_mor(G.t),
        F.on_mor(G.i),
        F.on_mor(G.comp),
        F.on_mor(G.inv),
        _map_square(F, G.X2),
        name=f"{F.name}({G.name})",
    )


def map_internal_functor(F, fun: InternalFunctor, src_img=None, tgt_img=None) -> InternalFunctor:
    src_img = src_img or map_groupoid(F, fun.src_gpd)
    tgt_img = tgt_img or map_groupoid(F, fun.tgt_gpd)
    return InternalFunctor(src_img, tgt_img, F.on_mor(fun.F0), F.on_mor(fun.F1))


def map_bundle(F, B: Bundle, gpd_img=None) -> Bundle:
    gpd_img = gpd_img or map_groupoid(F, B.gpd)
    action = RightAction(
        gpd_img,
        F.on_obj(B.action.carrier),
        F.on_mor(B.action.anchor),
        F.on_mor(B.action.act),
        _map_square(F, B.action.dom),
    )
    designated = _map_square(F, B.designated_pb) if B.designated_pb else None
    return Bundle(gpd_img, action, F.on_obj(B.base), F.on_mor(B.p), designated)


def map_anafunctor(F, A: Anafunctor, src_img=None, tgt_img=None) -> Anafunctor:
    src_img = src_img or map_groupoid(F, A.gpd_src)
    tgt_img = tgt_img or map_groupoid(F, A.gpd_tgt)
    refined_img = map_groupoid(F, A.functor.src_gpd)
    fun = InternalFunctor(refined_img, tgt_img, F.on_mor(A.functor.F0), F.on_mor(A.functor.F1))
    return Anafunctor(src_img, tgt_img, F.on_mor(A.pi), fun, name=A.name)
