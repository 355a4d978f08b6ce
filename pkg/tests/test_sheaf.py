import itertools

import pytest

from finsite import catalog, sheaf
from finsite.fincat import identity_functor, is_full, is_faithful
from finsite.site import (
    canonical_topology,
    discrete_topology,
    extensive_topology,
    indiscrete_topology,
    is_coarser,
    uni_class,
)


@pytest.fixture(scope="module")
def v():
    shv, cat, T_op = catalog.shv()
    return cat, T_op, shv


@pytest.fixture(scope="module")
def fs012():
    return catalog.fix_fs012()


def fs_presheaves(cat):
    out = [sheaf.representable(cat, x) for x in cat.objects]
    out.append(catalog.k2(cat))
    out.append(catalog.constant_presheaf(cat, ("a",), name="K"))
    return out


def test_fixture_presheaves_validate(v, fs012):
    cat, T_op, shv = v
    assert sheaf.validate_presheaf(shv).ok
    for P in fs_presheaves(fs012):
        assert sheaf.validate_presheaf(P).ok


def test_extensivity_modes(v, fs012):
    cat, T_op, shv = v
    # poset self-coproducts kill literal extensivity for any 2-element value
    assert not sheaf.is_extensive_presheaf(shv, "literal").ok
    assert sheaf.is_extensive_presheaf(shv, "disjoint").ok
    # representables on a poset have singleton values, both modes pass
    rep = sheaf.representable(cat, "oU")
    assert sheaf.is_extensive_presheaf(rep, "literal").ok
    k2 = catalog.k2(fs012)
    r = sheaf.is_extensive_presheaf(k2)
    assert not r.ok and r.counterexample["initial"] == "n0"
    with pytest.raises(ValueError):
        sheaf.is_extensive_presheaf(k2, "bogus")


def test_descent_basics(v):
    cat, T_op, shv = v
    # descent along isomorphisms is automatic for every presheaf
    for P in (shv, catalog.k2(cat), sheaf.representable(cat, "oX")):
        for m in cat.isos():
            assert sheaf.satisfies_descent(P, m)
    # restriction along oE -> oU collapses the two sections over oU
    assert not sheaf.satisfies_descent(shv, "oE_to_oU")


def test_sheaf_verdicts(v, fs012):
    cat, T_op, shv = v
    assert sheaf.is_sheaf(shv, T_op, "disjoint").ok
    assert not sheaf.is_sheaf(catalog.k2(cat), T_op).ok
    T_ext = extensive_topology(fs012)
    for x in fs012.objects:
        assert sheaf.is_sheaf(sheaf.representable(fs012, x), T_ext).ok
    assert not sheaf.is_sheaf(catalog.k2(fs012), T_ext).ok


def test_constant_presheaf_traditional_but_never_a_sheaf(fs012):
    k2 = catalog.k2(fs012)
    Ti = indiscrete_topology(fs012)
    assert sheaf.is_traditional_sheaf(k2, Ti).ok
    for T in (
        extensive_topology(fs012),
        Ti,
        discrete_topology(fs012),
        canonical_topology(fs012),
    ):
        assert not sheaf.is_sheaf(k2, T).ok, T.name


def test_extensive_iff_traditional_on_extensive_site(fs012):
    T_ext = extensive_topology(fs012)
    for P in fs_presheaves(fs012):
        ext = sheaf.is_extensive_presheaf(P).ok
        trad = sheaf.is_traditional_sheaf(P, T_ext).ok
        assert ext == trad, P.name


def test_traditional_implies_uni_descent(fs012):
    tops = [
        extensive_topology(fs012),
        indiscrete_topology(fs012),
        discrete_topology(fs012),
        canonical_topology(fs012),
    ]
    for P in fs_presheaves(fs012):
        for T in tops:
            if sheaf.is_traditional_sheaf(P, T).ok:
                for pi in uni_class(T):
                    assert sheaf.satisfies_descent(P, pi), (P.name, T.name, pi)


def test_comparison_report_consistency(fs012):
    T_ext = extensive_topology(fs012)
    for P in fs_presheaves(fs012):
        assert sheaf.comparison_sheaf_report(P, T_ext).ok, P.name


def test_sheaf_antitone_in_topology(fs012):
    tops = [
        extensive_topology(fs012),
        indiscrete_topology(fs012),
        discrete_topology(fs012),
        canonical_topology(fs012),
    ]
    for P in fs_presheaves(fs012):
        verdicts = {T.name: sheaf.is_sheaf(P, T).ok for T in tops}
        for T1, T2 in itertools.product(tops, repeat=2):
            if is_coarser(T1, T2) and verdicts[T2.name]:
                assert verdicts[T1.name], (P.name, T1.name, T2.name)


def test_subcanonical_via_representables(v, fs012):
    cat, T_op, _ = v
    cases = [
        T_op,
        indiscrete_topology(cat),
        discrete_topology(cat),
        extensive_topology(fs012),
        indiscrete_topology(fs012),
        discrete_topology(fs012),
    ]
    for T in cases:
        assert sheaf.subcanonical_via_representables(T).ok, T.name


def test_pre_covering(fs012):
    T_ext = extensive_topology(fs012)
    surj = "n2>n1:0,0"
    inj = "n1>n2:0"

    def yo_morphism(m):
        a, b = fs012.src(m), fs012.tgt(m)
        A, B = sheaf.representable(fs012, a), sheaf.representable(fs012, b)
        comps = {
            y: {h: fs012.compose(m, h) for h in A.values[y]} for y in fs012.objects
        }
        phi = sheaf.PresheafMorphism(A, B, comps)
        assert sheaf.validate_presheaf_morphism(phi).ok
        return phi

    assert sheaf.is_pre_covering(yo_morphism(surj), T_ext).ok
    assert not sheaf.is_pre_covering(yo_morphism(inj), T_ext).ok


def test_kan_extension_identity_is_evaluation(v):
    cat, T_op, shv = v
    idf = identity_functor(cat)
    ext = sheaf.right_kan_extension(idf, shv)
    assert sheaf.validate_presheaf(ext).ok
    eps = sheaf.counit(idf, shv)
    assert sheaf.validate_presheaf_morphism(eps).ok
    assert sheaf.is_presheaf_iso(eps)


def test_kan_extension_along_skeleton_inclusion():
    small, big, incl = catalog.skeleton_inclusion()
    rep = sheaf.pullback_presheaf(incl, sheaf.representable(big, "n1"))
    ext = sheaf.right_kan_extension(incl, rep)
    assert sheaf.validate_presheaf(ext).ok
    # three slice objects over n2, each with a singleton value set
    assert {x: len(ext.values[x]) for x in big.objects} == {"n0": 1, "n1": 1, "n2": 1}


def test_kan_families_ignore_redundant_identity_constraints():
    small, big, incl = catalog.skeleton_inclusion()
    rep = sheaf.pullback_presheaf(incl, sheaf.representable(big, "n2"))
    for y in big.objects:
        slice_objs, fams = sheaf._kan_families(incl, rep, y)
        cons = sheaf._slice_constraints(incl, slice_objs)
        generating = [c for c in cons if not small.is_identity(c[2])]
        surviving = [
            fam
            for fam in itertools.product(*(rep.values[o[0]] for o in slice_objs))
            if all(rep.res(f, fam[j]) == fam[i] for (i, j, f) in generating)
        ]
        assert sorted(map(repr, fams)) == sorted(map(repr, surviving))


def test_kan_extension_along_poset_inclusion(v):
    cat, T_op, shv = v
    sub, incl = catalog.fix_b()
    pulled = sheaf.pullback_presheaf(incl, shv)
    ext = sheaf.right_kan_extension(incl, pulled)
    # sections over oU and oV glue freely since SHV(oE) is a point
    assert len(ext.values["oX"]) == 4
    eta = sheaf.unit(incl, shv)
    assert sheaf.validate_presheaf_morphism(eta).ok
    assert sheaf.is_presheaf_iso(eta)


def test_adjunction_triangles(v, fs012):
    cat, T_op, shv = v
    sub, incl = catalog.fix_b()
    pulled = sheaf.pullback_presheaf(incl, shv)
    assert sheaf.verify_adjunction(incl, [pulled], [shv]).ok
    idf = identity_functor(fs012)
    samples = fs_presheaves(fs012)
    assert sheaf.verify_adjunction(idf, samples, samples).ok


def test_counit_iso_for_full_and_faithful(v):
    cat, T_op, shv = v
    small, big, incl2 = catalog.skeleton_inclusion()
    sub, incl = catalog.fix_b()
    for F, P in [
        (incl, sheaf.pullback_presheaf(incl, shv)),
        (incl2, sheaf.pullback_presheaf(incl2, sheaf.representable(big, "n2"))),
    ]:
        assert is_full(F) and is_faithful(F)
        assert sheaf.is_presheaf_iso(sheaf.counit(F, P))


def test_verify_comparison_accepts_skeleton_inclusion():
    small, big, incl = catalog.skeleton_inclusion()
    reps_small = [sheaf.representable(small, x) for x in small.objects]
    reps_big = [sheaf.representable(big, x) for x in big.objects]
    r = sheaf.verify_comparison(
        incl,
        indiscrete_topology(small),
        indiscrete_topology(big),
        reps_small,
        reps_big,
        mode="disjoint",
    )
    assert r.ok, r.counterexample


def test_verify_comparison_refuses_non_extensive_target(v):
    cat, T_op, _ = v
    sub, incl = catalog.fix_b()
    r = sheaf.verify_comparison(
        incl, indiscrete_topology(sub), indiscrete_topology(cat)
    )
    assert not r.ok
    assert "target_extensive" in r.counterexample["hypotheses_failed"]


def test_yoneda_continuity_fix_v(v):
    cat, T_op, _ = v
    k1 = catalog.constant_presheaf(cat, ("a",), name="K")
    r = sheaf.yoneda_continuity_report(cat, indiscrete_topology(cat), extras=(k1,))
    assert r.ok, r.counterexample


def test_yoneda_continuity_fs012(fs012):
    r = sheaf.yoneda_continuity_report(fs012, extensive_topology(fs012))
    assert r.ok, r.counterexample


def test_presheaf_fragment_is_a_category(fs012):
    from finsite.fincat import validate_category

    reps = [sheaf.representable(fs012, x, name=f"Yo_{x}") for x in fs012.objects]
    frag, named, decode = sheaf.presheaf_fragment(reps)
    assert validate_category(frag).ok
    # Yoneda: hom(Yo_a, Yo_b) is in bijection with hom(a, b)
    for a in fs012.objects:
        for b in fs012.objects:
            assert len(frag.hom(f"Yo_{a}", f"Yo_{b}")) == len(fs012.hom(a, b))
