import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finsite import catalog
from finsite.fincat import (
    FinSetCat,
    SetMap,
    TableCategory,
    compose_functors,
    coproduct_is_disjoint_stable,
    identity_functor,
    inverts_coproducts,
    is_effective_epi,
    is_epi,
    is_extensive,
    is_faithful,
    is_full,
    is_universal,
    preserves_coproducts,
    slice_category,
    universally_effective_epis,
    validate_category,
    validate_functor,
)

FS = FinSetCat()


@pytest.fixture(scope="module")
def fix_v():
    cat, _ = catalog.fix_v()
    return cat


@pytest.fixture(scope="module")
def fs012():
    return catalog.fix_fs012()


def test_validate_category_accepts_fixtures(fix_v, fs012):
    assert validate_category(fix_v).ok
    assert validate_category(fs012).ok
    assert validate_category(catalog.fix_s()[0]).ok


def test_validate_category_catches_broken_composition(fix_v):
    comp = dict(fix_v._comp)
    comp[("oU_to_oX", "oE_to_oU")] = "oX_to_oX"  # wrong source
    broken = TableCategory(fix_v.objects, fix_v._mor, fix_v._identity, comp)
    assert not validate_category(broken).ok


def test_validate_category_rejects_missing_identity(fix_v):
    ident = dict(fix_v._identity)
    del ident["oU"]
    report = validate_category(TableCategory(fix_v.objects, fix_v._mor, ident, fix_v._comp))
    assert not report.ok
    assert report.counterexample == {"identity": "oU"}


def test_validate_category_raises_on_dangling_table_entry(fix_v):
    comp = dict(fix_v._comp)
    comp[("oU_to_oX", "oE_to_oU")] = "no-such-morphism"
    with pytest.raises(ValueError):
        validate_category(TableCategory(fix_v.objects, fix_v._mor, fix_v._identity, comp))


def test_iso_detection(fix_v, fs012):
    isos = set(fix_v.isos())
    assert isos == {fix_v.identity(x) for x in fix_v.objects}
    # in the skeleton, the swap on n2 is a non-identity iso
    assert set(fs012.isos()) == {fs012.identity(x) for x in fs012.objects} | {"n2>n2:1,0"}


def test_pullback_poset_is_intersection(fix_v):
    sq = fix_v.pullback("oU_to_oX", "oV_to_oX")
    assert sq is not None
    assert sq.apex == "oE"


def test_pullback_absent_in_skeleton(fs012):
    # pulling the surjection 2->1 back along itself needs a 4-element set
    surj = "n2>n1:0,0"
    assert fs012.pullback(surj, surj) is None
    assert not is_universal(fs012, surj)


def test_coproduct_in_skeleton(fs012):
    co = fs012.coproduct(("n1", "n1"))
    assert co is not None and co.apex == "n2"


def test_coproduct_is_join_in_poset(fix_v):
    co = fix_v.coproduct(("oU", "oV"))
    assert co is not None and co.apex == "oX"


def test_table_limits_match_finite_sets_on_small_carriers():
    sets = [frozenset(), frozenset({0}), frozenset({1}), frozenset({0, 1})]
    cat, obj_of, mor_of = catalog.table_copy(sets)
    for f in cat.morphisms():
        for g in cat.morphisms():
            if cat.tgt(f) != cat.tgt(g):
                continue
            fs_sq = FS.pullback(cat.map_of_mor[f], cat.map_of_mor[g])
            t_sq = cat.pullback(f, g)
            available = any(len(s) == len(fs_sq.apex) for s in sets)
            assert (t_sq is not None) == available
            if t_sq is not None:
                apex_set = cat.set_of_obj[t_sq.apex]
                assert len(apex_set) == len(fs_sq.apex)


def test_finset_limits_are_universal():
    a, b, c = frozenset({0, 1}), frozenset({0, 1, 2}), frozenset({0})
    f = SetMap(a, c, {0: 0, 1: 0})
    g = SetMap(b, c, {0: 0, 1: 0, 2: 0})
    sq = FS.pullback(f, g)
    assert len(sq.apex) == 6
    assert FS.compose(f, sq.to_left).mapping == FS.compose(g, sq.to_right).mapping
    pr = FS.product(a, b)
    assert len(pr.apex) == 6
    co = FS.coproduct((a, b))
    assert len(co.apex) == 5
    u = SetMap(a, b, {0: 1, 1: 1})
    v = SetMap(a, b, {0: 2, 1: 1})
    ce = FS.coequalizer(u, v)
    assert len(ce.apex) == 2  # classes {0}, {1,2}


def test_into_pullback_mediator():
    a = frozenset({0, 1})
    f = SetMap(a, a, {0: 0, 1: 0})
    sq = FS.pullback(f, f)
    ident = FS.identity(a)
    m = FS.into_pullback(sq, ident, ident)
    assert all(m(x) == (x, x) for x in a)


def test_epi_is_surjective_on_finite_sets():
    a, b = frozenset({0, 1, 2}), frozenset({0, 1})
    surj = SetMap(a, b, {0: 0, 1: 1, 2: 1})
    nonsurj = SetMap(b, a, {0: 0, 1: 1})
    assert is_epi(FS, surj) and is_effective_epi(FS, surj)
    assert not is_epi(FS, nonsurj) and not is_effective_epi(FS, nonsurj)


def test_injection_not_effective_epi_in_skeleton(fs012):
    inj = "n1>n2:0"
    assert not is_effective_epi(fs012, inj)


def test_universally_effective_epis_are_isos_on_fix_v(fix_v):
    assert universally_effective_epis(fix_v) == frozenset(fix_v.isos())


def test_functor_validation(fix_v):
    idf = identity_functor(fix_v)
    assert validate_functor(idf).ok
    assert is_full(idf) and is_faithful(idf)
    assert validate_functor(compose_functors(idf, idf)).ok


def test_collapsing_functor_faithfulness(fix_v, fs012):
    from finsite.fincat import FunctorData

    # collapsing a poset stays faithful: hom sets have at most one element
    F = FunctorData(
        fix_v,
        fix_v,
        {x: "oE" for x in fix_v.objects},
        {m: "oE_to_oE" for m in fix_v.morphisms()},
    )
    assert validate_functor(F).ok
    assert is_faithful(F)
    # collapsing the skeleton merges the two maps n1 -> n2
    G = FunctorData(
        fs012,
        fs012,
        {x: "n1" for x in fs012.objects},
        {m: "n1>n1:0" for m in fs012.morphisms()},
    )
    assert validate_functor(G).ok
    assert not is_faithful(G)


def test_inclusion_preserves_and_inverts(fix_v):
    sub, incl = catalog.fix_b()
    assert validate_functor(incl).ok
    assert preserves_coproducts(incl)
    assert inverts_coproducts(incl)


def test_skeleton_inclusion_coproduct_scopes():
    small, big, incl = catalog.skeleton_inclusion()
    # n1 + n1 = n1 inside the small skeleton, but n2 in the big one
    assert not preserves_coproducts(incl, "all")
    assert preserves_coproducts(incl, "disjoint")
    assert inverts_coproducts(incl)
    co = small.coproduct(("n1", "n1"))
    assert co.apex == "n1"
    assert not coproduct_is_disjoint_stable(small, co)


def test_extensivity_verdicts(fix_v, fs012):
    assert not is_extensive(fix_v).ok
    assert is_extensive(fs012).ok
    assert is_extensive(FS).ok


def test_slice_category_of_skeleton_inclusion():
    small, big, incl = catalog.skeleton_inclusion()
    sl, proj = slice_category(incl, "n2")
    # one map n0 -> n2, two maps n1 -> n2
    assert len(sl.objects) == 3
    assert validate_category(sl).ok
    assert validate_functor(proj).ok


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_setmap_composition_associative(n, m, data):
    a = frozenset(range(n))
    b = frozenset(range(m))
    f = SetMap(a, b, {i: data.draw(st.sampled_from(sorted(b))) for i in a})
    g = SetMap(b, a, {i: data.draw(st.sampled_from(sorted(a))) for i in b})
    h = SetMap(a, b, {i: data.draw(st.sampled_from(sorted(b))) for i in a})
    lhs = h.after(g).after(f)
    rhs = h.after(g.after(f))
    assert lhs.mapping == rhs.mapping


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_finset_pullback_square_commutes(n, m, data):
    a = frozenset(range(n))
    b = frozenset(range(m))
    c = frozenset({0})
    f = SetMap(a, c, {i: 0 for i in a})
    g = SetMap(b, c, {i: 0 for i in b})
    sq = FS.pullback(f, g)
    assert len(sq.apex) == n * m
    assert FS.compose(f, sq.to_left).mapping == FS.compose(g, sq.to_right).mapping
