"""Batch front door: parse bundle files, run named checks, run the law
suite, and emit right Kan extensions.

Bundle file format: one JSON document with named sections (categories,
topologies, functors, presheaves, groupoids, bundles).  Mappings are
arrays of [key, value] pairs, compositions arrays of [g, f, gf] meaning
compose(g, f) = gf, and elements are JSON scalars or arrays (arrays
decode to tuples).  Reports go to stdout as JSON; a human summary goes
to stderr.  Exit codes: 0 verdict-true, 1 verdict-false, 2 usage or
parse error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import catalog, internal, sheaf, site
from .fincat import (
    CheckReport,
    FunctorData,
    SetMap,
    TableCategory,
    is_effective_epi,
    is_epi,
    is_extensive,
    is_universal,
    validate_category,
    validate_functor,
)


# ---------------------------------------------------------------------------
# Encoding
# ---------------------------------------------------------------------------


def _encode(v):
    if isinstance(v, (tuple, list)):
        return [_encode(x) for x in v]
    if isinstance(v, (set, frozenset)):
        return sorted((_encode(x) for x in v), key=repr)
    return v


def _decode(v):
    if isinstance(v, list):
        return tuple(_decode(x) for x in v)
    return v


def _pairs(mapping):
    return sorted(([_encode(k), _encode(v)] for k, v in mapping.items()), key=repr)


def _unpairs(pairs):
    return {_decode(k): _decode(v) for k, v in pairs}


@dataclass
class BundleDoc:
    categories: dict = field(default_factory=dict)
    topologies: dict = field(default_factory=dict)
    functors: dict = field(default_factory=dict)
    presheaves: dict = field(default_factory=dict)
    groupoids: dict = field(default_factory=dict)
    bundles: dict = field(default_factory=dict)
    topology_cat: dict = field(default_factory=dict)  # topology name -> category name


class BundleError(Exception):
    pass


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def serialize_category(cat) -> dict:
    morphisms = sorted(
        ([_encode(m), _encode(cat.src(m)), _encode(cat.tgt(m))] for m in cat.morphisms()),
        key=repr,
    )
    composition = []
    for f in cat.morphisms():
        for g in cat.morphisms():
            if cat.src(g) == cat.tgt(f):
                composition.append([_encode(g), _encode(f), _encode(cat.compose(g, f))])
    composition.sort(key=repr)
    return {
        "objects": [_encode(x) for x in cat.objects],
        "morphisms": morphisms,
        "identity": _pairs({x: cat.identity(x) for x in cat.objects}),
        "composition": composition,
    }


def serialize_topology(T, cat_name) -> dict:
    fams = sorted(
        (
            [_encode(x), sorted((sorted((_encode(m) for m in fam), key=repr) for fam in fs), key=repr)]
            for x, fs in T.families.items()
        ),
        key=repr,
    )
    return {"category": cat_name, "families": fams}


def serialize_functor(F: FunctorData, src_name, tgt_name) -> dict:
    return {
        "source": src_name,
        "target": tgt_name,
        "on_objects": _pairs(F.obj_map),
        "on_morphisms": _pairs(F.mor_map),
    }


def serialize_presheaf(P: sheaf.Presheaf, cat_name) -> dict:
    return {
        "category": cat_name,
        "values": sorted(([_encode(x), [_encode(v) for v in vs]] for x, vs in P.values.items()), key=repr),
        "restriction": sorted(
            ([_encode(m), _pairs(r)] for m, r in P.restriction.items()), key=repr
        ),
    }


def serialize_groupoid(G) -> dict:
    comp = sorted(
        ([_encode(g), _encode(h), _encode(G.comp((g, h)))] for (g, h) in G.X2.apex),
        key=repr,
    )
    return {
        "X0": _encode(G.X0),
        "X1": _encode(G.X1),
        "s": _pairs(G.s.mapping),
        "t": _pairs(G.t.mapping),
        "i": _pairs(G.i.mapping),
        "comp": comp,
        "inv": _pairs(G.inv.mapping),
    }


def serialize_bundle(B: internal.Bundle, gpd_name) -> dict:
    action = sorted(
        ([_encode(x), _encode(g), _encode(B.action.act((x, g)))] for (x, g) in B.action.dom.apex),
        key=repr,
    )
    return {
        "groupoid": gpd_name,
        "carrier": _encode(B.action.carrier),
        "anchor": _pairs(B.action.anchor.mapping),
        "action": action,
        "base": _encode(B.base),
        "projection": _pairs(B.p.mapping),
    }


def serialize_bundle_doc(doc: BundleDoc) -> dict:
    out = {}
    if doc.categories:
        out["categories"] = {n: serialize_category(c) for n, c in doc.categories.items()}
    if doc.topologies:
        out["topologies"] = {
            n: serialize_topology(T, doc.topology_cat[n]) for n, T in doc.topologies.items()
        }
    if doc.functors:
        out["functors"] = {}
        names = {id(c): n for n, c in doc.categories.items()}
        for n, F in doc.functors.items():
            out["functors"][n] = serialize_functor(F, names[id(F.source)], names[id(F.target)])
    if doc.presheaves:
        names = {id(c): n for n, c in doc.categories.items()}
        out["presheaves"] = {
            n: serialize_presheaf(P, names[id(P.cat)]) for n, P in doc.presheaves.items()
        }
    if doc.groupoids:
        out["groupoids"] = {n: serialize_groupoid(G) for n, G in doc.groupoids.items()}
    if doc.bundles:
        gnames = {id(g): n for n, g in doc.groupoids.items()}
        out["bundles"] = {
            n: serialize_bundle(B, gnames[id(B.gpd)]) for n, B in doc.bundles.items()
        }
    return out


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def parse_category(sec, name) -> TableCategory:
    try:
        objects = [_decode(x) for x in sec["objects"]]
        morphisms = {_decode(m): (_decode(a), _decode(b)) for m, a, b in sec["morphisms"]}
        identity = _unpairs(sec["identity"])
        comp = {(_decode(g), _decode(f)): _decode(gf) for g, f, gf in sec["composition"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise BundleError(f"malformed category {name!r}: {exc}") from exc
    return TableCategory(objects, morphisms, identity, comp, name=name)


def parse_topology(sec, cats, name) -> site.Pretopology:
    try:
        cat = cats[sec["category"]]
        fams = {
            _decode(x): {frozenset(_decode(m) for m in fam) for fam in fs}
            for x, fs in sec["families"]
        }
    except (KeyError, TypeError, ValueError) as exc:
        raise BundleError(f"malformed topology {name!r}: {exc}") from exc
    return site.Pretopology(cat, fams, name=name)


def parse_functor(sec, cats, name) -> FunctorData:
    try:
        src = cats[sec["source"]]
        tgt = cats[sec["target"]]
        return FunctorData(src, tgt, _unpairs(sec["on_objects"]), _unpairs(sec["on_morphisms"]), name=name)
    except (KeyError, TypeError, ValueError) as exc:
        raise BundleError(f"malformed functor {name!r}: {exc}") from exc


def parse_presheaf(sec, cats, name) -> sheaf.Presheaf:
    try:
        cat = cats[sec["category"]]
        values = {_decode(x): tuple(_decode(v) for v in vs) for x, vs in sec["values"]}
        restriction = {_decode(m): _unpairs(r) for m, r in sec["restriction"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise BundleError(f"malformed presheaf {name!r}: {exc}") from exc
    return sheaf.Presheaf(cat, values, restriction, name=name)


def parse_groupoid(sec, name) -> internal.InternalGroupoid:
    try:
        s = _unpairs(sec["s"])
        t = _unpairs(sec["t"])
        i = _unpairs(sec["i"])
        inv = _unpairs(sec["inv"])
        comp = {(_decode(g), _decode(h)): _decode(gh) for g, h, gh in sec["comp"]}
        return internal.make_groupoid(
            catalog.finite_sets_ambient(),
            X0=frozenset(_decode(x) for x in sec["X0"]),
            X1=frozenset(_decode(x) for x in sec["X1"]),
            s=s.__getitem__,
            t=t.__getitem__,
            i=i.__getitem__,
            comp=lambda g, h: comp[(g, h)],
            inv=inv.__getitem__,
            name=name,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise BundleError(f"malformed groupoid {name!r}: {exc}") from exc


def parse_bundle(sec, gpds, name) -> internal.Bundle:
    try:
        G = gpds[sec["groupoid"]]
        amb = G.ambient
        carrier = frozenset(_decode(x) for x in sec["carrier"])
        base = frozenset(_decode(x) for x in sec["base"])
        anchor = SetMap(carrier, G.X0, _unpairs(sec["anchor"]))
        dom = amb.pullback(anchor, G.t)
        act_table = {(_decode(x), _decode(g)): _decode(xg) for x, g, xg in sec["action"]}
        act = SetMap(dom.apex, carrier, {e: act_table[e] for e in dom.apex})
        action = internal.RightAction(G, carrier, anchor, act, dom)
        p = SetMap(carrier, base, _unpairs(sec["projection"]))
        return internal.Bundle(G, action, base, p)
    except (KeyError, TypeError, ValueError) as exc:
        raise BundleError(f"malformed bundle {name!r}: {exc}") from exc


def parse_bundle_doc(doc: dict) -> BundleDoc:
    if not isinstance(doc, dict):
        raise BundleError("top-level document must be a JSON object")
    out = BundleDoc()
    for n, sec in doc.get("categories", {}).items():
        out.categories[n] = parse_category(sec, n)
    for n, sec in doc.get("topologies", {}).items():
        out.topologies[n] = parse_topology(sec, out.categories, n)
        out.topology_cat[n] = sec["category"]
    for n, sec in doc.get("functors", {}).items():
        out.functors[n] = parse_functor(sec, out.categories, n)
    for n, sec in doc.get("presheaves", {}).items():
        out.presheaves[n] = parse_presheaf(sec, out.categories, n)
    for n, sec in doc.get("groupoids", {}).items():
        out.groupoids[n] = parse_groupoid(sec, n)
    for n, sec in doc.get("bundles", {}).items():
        out.bundles[n] = parse_bundle(sec, out.groupoids, n)
    return out


def load_bundle(path) -> BundleDoc:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise BundleError(f"cannot read bundle file: {exc}") from exc
    return parse_bundle_doc(doc)


# ---------------------------------------------------------------------------
# The catalog as a bundle
# ---------------------------------------------------------------------------


def catalog_bundle() -> BundleDoc:
    out = BundleDoc()
    shv_presheaf, fv, t_op = catalog.shv()
    out.categories["FIX-V"] = fv
    out.topologies["T_op"] = t_op
    out.topology_cat["T_op"] = "FIX-V"
    out.topologies["T_indis_V"] = site.indiscrete_topology(fv)
    out.topology_cat["T_indis_V"] = "FIX-V"
    out.topologies["T_dis_V"] = site.discrete_topology(fv)
    out.topology_cat["T_dis_V"] = "FIX-V"
    out.presheaves["SHV"] = shv_presheaf
    out.presheaves["K2_V"] = catalog.k2(fv)

    fs012 = catalog.fix_fs012()
    out.categories["FIX-FS012"] = fs012
    out.topologies["T_ext"] = site.extensive_topology(fs012)
    out.topology_cat["T_ext"] = "FIX-FS012"
    out.presheaves["K2_FS"] = catalog.k2(fs012)

    small, _, incl = catalog.skeleton_inclusion()
    out.categories["FIX-FS01"] = small
    incl = FunctorData(small, fs012, incl.obj_map, incl.mor_map, name=incl.name)
    out.functors["skel01-into-fs012"] = incl
    out.presheaves["Yo_n1_small"] = sheaf.pullback_presheaf(
        incl, sheaf.representable(fs012, "n1", name="Yo_n1_small")
    )

    gpds = catalog.standard_groupoids()
    out.groupoids["FIX-PAIR2"] = gpds["FIX-PAIR2"]
    out.groupoids["FIX-Z2GPD"] = gpds["FIX-Z2GPD"]
    out.groupoids["FIX-TRIV1"] = gpds["FIX-TRIV1"]
    out.bundles["FIX-Z2BUNDLE"] = gpds["FIX-Z2BUNDLE"]
    return out


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def _jsonable(v):
    if isinstance(v, CheckReport):
        return {
            "ok": v.ok,
            "check": v.check,
            "witness": _jsonable(v.witness),
            "counterexample": _jsonable(v.counterexample),
        }
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, set, frozenset)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (bool, int, float, str)) or v is None:
        return v
    return repr(v)


def _report(check, inputs, result, started):
    if isinstance(result, CheckReport):
        verdict = result.ok
        witness = result.witness
        counterexample = result.counterexample
    else:
        verdict = bool(result)
        witness = None
        counterexample = None
    return {
        "check": check,
        "inputs": list(inputs),
        "verdict": verdict,
        "witness": _jsonable(witness),
        "counterexample": _jsonable(counterexample),
        "wall_time": round(time.monotonic() - started, 6),
    }


def _emit(report, human):
    print(json.dumps(report, indent=2, sort_keys=True))
    print(human, file=sys.stderr)


# ---------------------------------------------------------------------------
# Argument resolution and the check dispatch table
# ---------------------------------------------------------------------------


class _Resolver:
    def __init__(self, doc: BundleDoc):
        self.doc = doc

    def topology(self, ref):
        if ref not in self.doc.topologies:
            raise BundleError(f"unknown topology {ref!r}")
        return self.doc.topologies[ref]

    def category(self, ref):
        if ref not in self.doc.categories:
            raise BundleError(f"unknown category {ref!r}")
        return self.doc.categories[ref]

    def functor(self, ref):
        if ref not in self.doc.functors:
            raise BundleError(f"unknown functor {ref!r}")
        return self.doc.functors[ref]

    def presheaf(self, ref):
        if ref not in self.doc.presheaves:
            raise BundleError(f"unknown presheaf {ref!r}")
        return self.doc.presheaves[ref]

    def groupoid(self, ref):
        if ref not in self.doc.groupoids:
            raise BundleError(f"unknown groupoid {ref!r}")
        return self.doc.groupoids[ref]

    def bundle(self, ref):
        if ref not in self.doc.bundles:
            raise BundleError(f"unknown bundle {ref!r}")
        return self.doc.bundles[ref]

    def morphism(self, ref):
        # "category:morphism-id"
        cat_name, _, mid = ref.partition(":")
        cat = self.category(cat_name)
        decoded = mid
        if decoded not in cat._mor:
            raise BundleError(f"unknown morphism {mid!r} in category {cat_name!r}")
        return cat, decoded


def _dispatch_table(mode):
    return {
        "validate_category": (("category",), lambda c: validate_category(c)),
        "validate_pretopology": (("topology",), site.validate_pretopology),
        "validate_functor": (("functor",), validate_functor),
        "validate_presheaf": (("presheaf",), sheaf.validate_presheaf),
        "validate_groupoid": (("groupoid",), internal.validate_groupoid),
        "validate_principal_bundle": (("bundle",), internal.validate_principal_bundle),
        "are_equivalent": (("topology", "topology"), site.are_equivalent),
        "is_coarser": (("topology", "topology"), site.is_coarser),
        "is_subcanonical": (("topology",), site.is_subcanonical),
        "is_singletonizable": (("topology",), site.is_singletonizable),
        "is_superextensive": (("topology",), site.is_superextensive),
        "is_local": (("topology",), site.is_local),
        "is_extensive": (("category",), is_extensive),
        "is_continuous": (("functor", "topology", "topology"), site.is_continuous),
        "is_cocontinuous": (("functor", "topology", "topology"), site.is_cocontinuous),
        "has_dense_image": (("functor", "topology"), site.has_dense_image),
        "is_sheaf": (("presheaf", "topology"), lambda P, T: sheaf.is_sheaf(P, T, mode)),
        "is_traditional_sheaf": (("presheaf", "topology"), sheaf.is_traditional_sheaf),
        "is_extensive_presheaf": (("presheaf",), lambda P: sheaf.is_extensive_presheaf(P, mode)),
        "comparison_sheaf_report": (
            ("presheaf", "topology"),
            lambda P, T: sheaf.comparison_sheaf_report(P, T, mode),
        ),
        "subcanonical_via_representables": (
            ("topology",),
            lambda T: sheaf.subcanonical_via_representables(T, mode),
        ),
        "is_universal": (("morphism",), lambda cm: is_universal(cm[0], cm[1])),
        "is_epi": (("morphism",), lambda cm: is_epi(cm[0], cm[1])),
        "is_effective_epi": (("morphism",), lambda cm: is_effective_epi(cm[0], cm[1])),
        "is_locally_split": (
            ("morphism", "topology"),
            lambda cm, T: site.is_locally_split(T, cm[1]) is not None,
        ),
    }


def cmd_check(path, op, args, mode="literal") -> int:
    started = time.monotonic()
    try:
        doc = load_bundle(path)
        table = _dispatch_table(mode)
        if op not in table:
            raise BundleError(f"unknown check {op!r}")
        kinds, fn = table[op]
        if len(args) != len(kinds):
            raise BundleError(f"check {op!r} takes {len(kinds)} argument(s), got {len(args)}")
        resolver = _Resolver(doc)
        resolved = [getattr(resolver, kind)(a) for kind, a in zip(kinds, args)]
    except BundleError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    result = fn(*resolved)
    report = _report(op, args, result, started)
    _emit(report, f"{op}({', '.join(args)}): {'true' if report['verdict'] else 'false'}")
    return 0 if report["verdict"] else 1


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------


def _validate_all(doc: BundleDoc):
    checks = []
    for n, c in doc.categories.items():
        checks.append((f"category {n}", lambda c=c: validate_category(c)))
    for n, T in doc.topologies.items():
        checks.append((f"topology {n}", lambda T=T: site.validate_pretopology(T)))
    for n, F in doc.functors.items():
        checks.append((f"functor {n}", lambda F=F: validate_functor(F)))
    for n, P in doc.presheaves.items():
        checks.append((f"presheaf {n}", lambda P=P: sheaf.validate_presheaf(P)))
    for n, G in doc.groupoids.items():
        checks.append((f"groupoid {n}", lambda G=G: internal.validate_groupoid(G)))
    for n, B in doc.bundles.items():
        checks.append((f"bundle {n}", lambda B=B: internal.validate_principal_bundle(B)))
    return checks


def _run_checks(checks):
    jobs = max(1, int(os.environ.get("FINSITE_JOBS", "1")))
    if jobs == 1:
        return [(name, fn()) for name, fn in checks]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = [(name, pool.submit(fn)) for name, fn in checks]
        return [(name, fut.result()) for name, fut in futures]


def cmd_validate(path) -> int:
    started = time.monotonic()
    try:
        doc = load_bundle(path)
        checks = _validate_all(doc)
    except BundleError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"invalid structure: {exc}", file=sys.stderr)
        return 2
    for name, result in _run_checks(checks):
        if not result.ok:
            report = _report(f"validate: {name}", [path], result, started)
            _emit(report, f"INVALID {name}")
            return 1
    report = _report("validate", [path], CheckReport(True, "validate"), started)
    _emit(report, f"all {len(checks)} structures valid")
    return 0


# ---------------------------------------------------------------------------
# laws
# ---------------------------------------------------------------------------


def _catalog_sites():
    _, fv, t_op_v = catalog.shv()
    fs, t_op_s = catalog.fix_s()
    fs012 = catalog.fix_fs012()
    pairs = []
    for cat, T in ((fv, t_op_v), (fs, t_op_s)):
        pairs.append((cat, T))
        pairs.append((cat, site.indiscrete_topology(cat)))
        pairs.append((cat, site.discrete_topology(cat)))
        pairs.append((cat, site.canonical_topology(cat)))
    pairs.append((fs012, site.extensive_topology(fs012)))
    pairs.append((fs012, site.indiscrete_topology(fs012)))
    pairs.append((fs012, site.discrete_topology(fs012)))
    pairs.append((fs012, site.canonical_topology(fs012)))
    return pairs


def law_suite(extra_doc: BundleDoc = None):
    """(name, callable) pairs covering the per-module invariants."""
    laws = []
    pairs = _catalog_sites()
    if extra_doc is not None:
        for n, T in extra_doc.topologies.items():
            pairs.append((T.cat, T))

    for cat, T in pairs:
        tag = f"{T.name}@{cat.name}"
        laws.append((f"pretopology axioms [{tag}]", lambda T=T: site.validate_pretopology(T)))
        laws.append(
            (
                f"T equivalent to Uni(T) [{tag}]",
                lambda T=T: site.are_equivalent(T, site.universal_completion(T)),
            )
        )
        laws.append(
            (
                f"Uni idempotent [{tag}]",
                lambda T=T: site.uni_class(site.universal_completion(T)) == site.uni_class(T),
            )
        )
        laws.append(
            (
                f"indiscrete coarsest, discrete finest [{tag}]",
                lambda cat=cat, T=T: site.is_coarser(site.indiscrete_topology(cat), T)
                and site.is_coarser(T, site.discrete_topology(cat)),
            )
        )
        laws.append(
            (
                f"subcanonical iff representables are sheaves [{tag}]",
                lambda T=T: sheaf.subcanonical_via_representables(T),
            )
        )

    def _presheaf_laws():
        shv_presheaf, fv, t_op = catalog.shv()
        r = []
        r.append(sheaf.validate_presheaf(shv_presheaf))
        # self-coproducts in a poset rule out literal extensivity for SHV
        r.append(sheaf.is_sheaf(shv_presheaf, t_op, mode="disjoint"))
        r.append(CheckReport(not sheaf.is_sheaf(catalog.k2(fv), t_op).ok, "K2 is not a sheaf"))
        return CheckReport(all(x.ok for x in r), "presheaf fixtures")

    laws.append(("presheaf fixtures behave [catalog]", _presheaf_laws))

    def _groupoid_laws():
        gpds = catalog.standard_groupoids()
        r = [
            internal.validate_groupoid(gpds["FIX-PAIR2"]),
            internal.validate_groupoid(gpds["FIX-Z2GPD"]),
            internal.validate_groupoid(gpds["FIX-TRIV1"]),
            internal.validate_principal_bundle(gpds["FIX-Z2BUNDLE"]),
        ]
        return CheckReport(all(x.ok for x in r), "groupoid fixtures")

    laws.append(("groupoid fixtures validate [catalog]", _groupoid_laws))

    if extra_doc is not None:
        for name, fn in _validate_all(extra_doc):
            laws.append((f"user {name} validates", fn))
    return laws


def cmd_laws(path=None) -> int:
    started = time.monotonic()
    try:
        extra = load_bundle(path) if path else None
        laws = law_suite(extra)
    except BundleError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    reports = []
    for name, result in _run_checks(laws):
        reports.append(_report(name, [], result, started))
    ok = all(r["verdict"] for r in reports)
    print(json.dumps(reports, indent=2, sort_keys=True))
    failed = [r["check"] for r in reports if not r["verdict"]]
    if failed:
        print(f"{len(failed)}/{len(reports)} laws FAILED: {failed}", file=sys.stderr)
    else:
        print(f"all {len(reports)} laws hold", file=sys.stderr)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# kan
# ---------------------------------------------------------------------------


def cmd_kan(path, functor, presheaf) -> int:
    try:
        doc = load_bundle(path)
        resolver = _Resolver(doc)
        F = resolver.functor(functor)
        P = resolver.presheaf(presheaf)
        if P.cat is not F.source:
            raise BundleError(
                f"presheaf {presheaf!r} does not live on the source of functor {functor!r}"
            )
    except BundleError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    ext = sheaf.right_kan_extension(F, P)
    names = {id(c): n for n, c in doc.categories.items()}
    out = {"presheaves": {ext.name: serialize_presheaf(ext, names[id(F.target)])}}
    print(json.dumps(out, indent=2, sort_keys=True))
    sizes = {str(x): len(ext.values[x]) for x in F.target.objects}
    print(f"right Kan extension {ext.name}: value sizes {sizes}", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="finsite", description="checks for sites on finite categories"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="validate every structure in a bundle file")
    p_validate.add_argument("file")

    p_check = sub.add_parser("check", help="run one named check on bundle structures")
    p_check.add_argument("file")
    p_check.add_argument("--op", required=True)
    p_check.add_argument("--args", nargs="*", default=[])
    p_check.add_argument(
        "--extensivity-mode", choices=("literal", "disjoint"), default="literal"
    )

    p_laws = sub.add_parser("laws", help="run the law suite on the catalog plus an optional bundle")
    p_laws.add_argument("file", nargs="?")

    p_kan = sub.add_parser("kan", help="emit the right Kan extension of a presheaf")
    p_kan.add_argument("file")
    p_kan.add_argument("--functor", required=True)
    p_kan.add_argument("--presheaf", required=True)

    ns = parser.parse_args(argv)
    if ns.command == "validate":
        return cmd_validate(ns.file)
    if ns.command == "check":
        return cmd_check(ns.file, ns.op, ns.args, ns.extensivity_mode)
    if ns.command == "laws":
        return cmd_laws(ns.file)
    return cmd_kan(ns.file, ns.functor, ns.presheaf)


if __name__ == "__main__":
    sys.exit(main())
