"""Independent brute-force oracle for the diamond poset of opens of the
two-point discrete space.

Deliberately separate from the main code path: the poset is rebuilt from
raw subset data, morphisms are (src, tgt) pairs, and every universal
property is decided by the textbook definition (existence and uniqueness
of mediating morphisms), not by the bijection method the package uses.
"""

from itertools import product as iproduct

E, U, V, X = frozenset(), frozenset({0}), frozenset({1}), frozenset({0, 1})
OPENS = [E, U, V, X]

# morphisms are inclusion pairs (a, b) with a <= b
MORPHISMS = [(a, b) for a in OPENS for b in OPENS if a <= b]


def src(m):
    return m[0]


def tgt(m):
    return m[1]


def compose(g, f):
    assert f[1] == g[0]
    return (f[0], g[1])


def hom(a, b):
    return [(a, b)] if a <= b else []


def is_iso(m):
    return m[0] == m[1]


def cones(f, g):
    """All cones over the cospan (f, g): apex plus commuting legs."""
    out = []
    for q in OPENS:
        for p, r in iproduct(hom(q, src(f)), hom(q, src(g))):
            if compose(f, p) == compose(g, r):
                out.append((q, p, r))
    return out


def is_pullback(cone, f, g):
    apex, p, r = cone
    for other in cones(f, g):
        q, p2, r2 = other
        mediators = [
            u for u in hom(q, apex) if compose(p, u) == p2 and compose(r, u) == r2
        ]
        if len(mediators) != 1:
            return False
    return True


def pullback(f, g):
    for cone in cones(f, g):
        if is_pullback(cone, f, g):
            return cone
    return None


def is_universal(f):
    return all(
        pullback(f, g) is not None for g in MORPHISMS if tgt(g) == tgt(f)
    )


def coverings(x):
    """Open-cover families of x: subsets of incoming inclusions joining to x."""
    incoming = [m for m in MORPHISMS if tgt(m) == x]
    fams = []
    for r in range(1 << len(incoming)):
        sel = frozenset(m for i, m in enumerate(incoming) if r >> i & 1)
        join = frozenset().union(*(src(m) for m in sel)) if sel else frozenset()
        if join == x:
            fams.append(sel)
    return fams


def is_locally_split(pi, fams_of=coverings):
    for fam in fams_of(tgt(pi)):
        ok = True
        for m in fam:
            if not any(compose(pi, s) == m for s in hom(src(m), src(pi))):
                ok = False
                break
        if ok:
            return True
    return False


def is_globally_split(pi):
    return any(compose(pi, s) == (tgt(pi), tgt(pi)) for s in hom(tgt(pi), src(pi)))


def uni_open_cover():
    return frozenset(
        m for m in MORPHISMS if is_universal(m) and is_locally_split(m)
    )


def uni_indiscrete():
    return frozenset(
        m for m in MORPHISMS if is_universal(m) and is_globally_split(m)
    )


def is_effective_epi(f):
    kp = pullback(f, f)
    if kp is None:
        return False
    _, p1, p2 = kp
    # f coequalizes its kernel pair: check the cocone is initial
    for q in OPENS:
        forks = [
            h
            for h in hom(src(f), q)
            if compose(h, p1) == compose(h, p2)
        ]
        for h in forks:
            mediators = [u for u in hom(tgt(f), q) if compose(u, f) == h]
            if len(mediators) != 1:
                return False
    return True


def universally_effective_epis():
    cls = {
        f
        for f in MORPHISMS
        if is_universal(f)
        and is_effective_epi(f)
        and all(
            pullback(f, g) is None or is_effective_epi(pullback(f, g)[2])
            for g in MORPHISMS
            if tgt(g) == tgt(f)
        )
    }
    return frozenset(cls)


def classification():
    """The four verdicts of the open-cover site on the diamond poset."""
    isos = frozenset(m for m in MORPHISMS if is_iso(m))
    uni = uni_open_cover()
    uee = universally_effective_epis()
    return {
        "uni_equals_isos": uni == isos,
        "equivalent_to_indiscrete": uni == uni_indiscrete(),
        "subcanonical": uni <= uee,
        "canonical_equals_isos": uee == isos,
    }
