"""Property suites behind the CLI verify subcommand and the acceptance tests.

Each suite sweeps enumerated or seeded instances of one family of facts and
returns a SuiteReport; a failure entry pinpoints the first bad instance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import algebra as alg_mod
from . import frames as fr_mod
from . import gen as gen_mod
from . import filtration as flt_mod
from . import scr as scr_mod
from . import companions as cmp_mod
from .algebra import check_class, validates, find_isomorphism, fronton_expand
from .corpus import CORPUS, CORPUS_GL
from .domains import DomainSpec, to_geometric
from .frames import dual_algebra, dual_frame, make_frame, km_from_poset, skeleton_frame
from .gen import Lcg, enumerate_frames, enumerate_frames_upto
from .syntax import Sig, subformula_closure, var, bot, top, conj, disj, imp, coimp, neg, box, boxf, diap, boxdot

POSET_COUNTS = {1: 1, 2: 2, 3: 5, 4: 16, 5: 63}


@dataclass
class SuiteReport:
    name: str
    checks: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures

    def run(self, label, fn):
        self.checks += 1
        try:
            good = fn()
        except Exception as e:  # a crash is a failure with its message
            good = False
            label = f"{label}: {e}"
        if not good:
            self.failures.append(label)

    def summary(self):
        state = "ok" if self.ok else f"{len(self.failures)} FAILED"
        return f"suite {self.name}: {self.checks} checks, {state}"


# ---------------------------------------------------------------------------
# duality

def suite_duality(max_size=5):
    rep = SuiteReport("duality")
    pmax = min(max_size, 5)
    qmax = min(max_size, 4)
    for n in range(1, pmax + 1):
        frames = enumerate_frames(n, "POSET")
        rep.run(f"poset count at {n}",
                lambda fs=frames, k=n: len(fs) == POSET_COUNTS[k])
        rep.run(f"strict count at {n}",
                lambda k=n: len(enumerate_frames(k, "STRICT")) == POSET_COUNTS[k])
        for f in frames:
            ha = dual_algebra(f)
            rep.run(f"HA axioms {f.rel}", lambda a=ha: check_class(a, "HA").ok)
            rep.run(f"poset round trip {f.rel}",
                    lambda a=ha, g=f: gen_mod.canonical_matrix(dual_frame(a).rel)
                    == gen_mod.canonical_matrix(g.rel))
            rep.run(f"algebra round trip {f.rel}",
                    lambda a=ha: find_isomorphism(a, dual_algebra(dual_frame(a))) is not None)
            bi = dual_algebra(make_frame("BI", f.rel))
            rep.run(f"BIHA axioms {f.rel}", lambda a=bi: check_class(a, "BIHA").ok)
            frt = dual_algebra(km_from_poset(f.rel))
            rep.run(f"FRT axioms {f.rel}", lambda a=frt: check_class(a, "FRT").ok)
    for n in range(1, qmax + 1):
        for f in enumerate_frames(n, "PREORDER"):
            a = dual_algebra(f)
            rep.run(f"S4 axioms {f.rel}", lambda x=a: check_class(x, "S4").ok)
            rep.run(f"preorder round trip {f.rel}",
                    lambda x=a, g=f: gen_mod.canonical_matrix(dual_frame(x).rel)
                    == gen_mod.canonical_matrix(g.rel))
            is_poset = all(not (f.rel[x][y] and f.rel[y][x])
                           for x in range(n) for y in range(n) if x != y)
            rep.run(f"GRZ iff poset {f.rel}",
                    lambda x=a, p=is_poset: check_class(x, "GRZ").ok == p)
            rep.run(f"MAG fails on reflexive {f.rel}",
                    lambda x=a: not check_class(x, "MAG").ok)
            t = dual_algebra(make_frame("TENSE", f.rel))
            rep.run(f"TEN axioms {f.rel}", lambda x=t: check_class(x, "TEN").ok)
        for f in enumerate_frames(n, "STRICT"):
            a = dual_algebra(f)
            rep.run(f"MAG axioms {f.rel}", lambda x=a: check_class(x, "MAG").ok)
            rep.run(f"K4 axioms {f.rel}", lambda x=a: check_class(x, "K4").ok)
            rep.run(f"strict round trip {f.rel}",
                    lambda x=a, g=f: gen_mod.canonical_matrix(dual_frame(x).rel)
                    == gen_mod.canonical_matrix(g.rel))
    # heyting_expand residuation over sublattice-expanded duals
    for n in range(1, min(max_size, 4) + 1):
        for f in enumerate_frames(n, "POSET"):
            ha = dual_algebra(f)
            again = alg_mod.heyting_expand(
                alg_mod.sub_lattice_algebra(ha, tuple(ha.elements())), "both")
            rep.run(f"re-expansion matches {f.rel}",
                    lambda a=ha, b=again: b.imp == a.imp and check_class(b, "BIHA").ok)
    return rep


# ---------------------------------------------------------------------------
# filtration

_SIG_CONNECTIVES = {
    Sig.SI: ((2, conj), (2, disj), (2, imp)),
    Sig.BSI: ((2, conj), (2, disj), (2, imp), (2, coimp)),
    Sig.MD: ((2, conj), (2, disj), (1, neg), (1, box)),
    Sig.TEN: ((2, conj), (2, disj), (1, neg), (1, boxf), (1, diap)),
    Sig.MSI: ((2, conj), (2, disj), (2, imp), (1, boxdot)),
}


def random_formula(sig, rng, budget):
    """A random formula with at most budget connective/leaf nodes."""
    if budget <= 1 or rng.below(4) == 0:
        k = rng.below(4)
        if k == 0:
            return bot(sig)
        if k == 1:
            return top(sig)
        return var(rng.below(2) + 1, sig)
    ops = _SIG_CONNECTIVES[sig]
    arity, op = ops[rng.below(len(ops))]
    if arity == 1:
        return op(random_formula(sig, rng, budget - 1))
    half = (budget - 1) // 2
    return op(random_formula(sig, rng, half + 1), random_formula(sig, rng, budget - 1 - half))


_METHOD_SOURCES = {
    "SI": (Sig.SI, "HA"), "BSI": (Sig.BSI, "BIHA"), "S4": (Sig.MD, "MA"),
    "TENSE": (Sig.TEN, "TEN"), "FRT_WEAK": (Sig.MSI, "FRT"), "MAG_WEAK": (Sig.MD, "MAG"),
}

_OUTPUT_CLASS = {"SI": "HA", "BSI": "BIHA", "S4": "S4", "TENSE": "TEN",
                 "FRT_WEAK": "FRT", "MAG_WEAK": "K4"}


def _filtration_sources(method, size_cap=8):
    out = []
    if method in ("SI", "BSI", "FRT_WEAK"):
        for n in range(1, 5):
            for f in enumerate_frames(n, "POSET"):
                ha = dual_algebra(f)
                if ha.size > size_cap:
                    continue
                if method == "SI":
                    out.append(ha)
                elif method == "BSI":
                    out.append(dual_algebra(make_frame("BI", f.rel)))
                else:
                    out.append(dual_algebra(km_from_poset(f.rel)))
    elif method in ("S4", "TENSE"):
        for n in range(1, 4):
            for f in enumerate_frames(n, "PREORDER"):
                if method == "S4":
                    out.append(dual_algebra(f))
                else:
                    out.append(dual_algebra(make_frame("TENSE", f.rel)))
    else:
        for n in range(1, 4):
            for f in enumerate_frames(n, "STRICT"):
                out.append(dual_algebra(f))
    return out


def suite_filtration(instances=500, seed=2024):
    rep = SuiteReport("filtration")
    rng = Lcg(seed)
    methods = list(flt_mod.METHODS)
    pools = {m: _filtration_sources(m) for m in methods}
    done = 0
    while done < instances:
        m = methods[done % len(methods)]
        sig, _cls = _METHOD_SOURCES[m]
        a = pools[m][rng.below(len(pools[m]))]
        f = random_formula(sig, rng, 6)
        theta = subformula_closure(f)
        if len(theta) > 6:
            continue
        v = {p: rng.below(a.size) for p in sorted(f.atoms())} or {1: rng.below(a.size)}
        res = flt_mod.filtrate(a, v, theta, m)
        ok, bad = flt_mod.check_filtration_theorem(a, v, res, theta)
        if not ok:
            rep.failures.append(f"{m}: V-bar mismatch on {bad} "
                                f"(algebra size {a.size}, seed state {done})")
        rep.checks += 1
        out_ok = check_class(res.algebra, _OUTPUT_CLASS[m]).ok
        if not out_ok:
            rep.failures.append(f"{m}: output fails {_OUTPUT_CLASS[m]} (instance {done})")
        rep.checks += 1
        if not _inclusion_conditions(a, res, m):
            rep.failures.append(f"{m}: inclusion conditions fail (instance {done})")
        rep.checks += 1
        done += 1
        if rep.failures and len(rep.failures) > 10:
            break
    return rep


def _inclusion_conditions(src, res, method):
    """Stability / pre-stability of the inclusion, per method."""
    inc = res.inclusion
    a, b = res.algebra, src
    if method in ("SI", "BSI", "FRT_WEAK"):
        for x in range(a.size):
            for y in range(a.size):
                got = inc[a.imp[x][y]]
                if not b.leq(got, b.imp[inc[x]][inc[y]]):
                    return False
        if method == "FRT_WEAK":
            # the augmented domain pairs hold exactly
            for (x, y) in res.domains.pairs:
                if inc[a.imp[x][y]] != b.imp[inc[x]][inc[y]]:
                    return False
            for x in res.domains.elems:
                if inc[a.boxdot[x]] != b.boxdot[inc[x]]:
                    return False
        return True
    if method == "S4":
        return all(b.leq(inc[a.box[x]], b.box[inc[x]]) for x in range(a.size))
    if method == "TENSE":
        return (all(b.leq(inc[a.boxF[x]], b.boxF[inc[x]]) for x in range(a.size))
                and all(b.leq(b.diaP[inc[x]], inc[a.diaP[x]]) for x in range(a.size)))
    # MAG_WEAK: pre-stable on box+
    return all(b.leq(inc[a.boxplus(x)], b.boxplus(inc[x])) for x in range(a.size))


# ---------------------------------------------------------------------------
# scr

def _sample_domain(variant, a, rng):
    n = a.size
    pairs = [(x, y) for x in range(n) for y in range(n)]

    def some_pairs():
        return frozenset(p for p in pairs if rng.below(3) == 0)

    def some_elems():
        return frozenset(x for x in range(n) if rng.below(2) == 0)

    if variant == "SI":
        return DomainSpec.si(some_pairs())
    if variant == "BSI":
        return DomainSpec.bsi(some_pairs(), some_pairs())
    if variant == "MOD":
        return DomainSpec.mod(some_elems())
    if variant == "TEN":
        return DomainSpec.ten(some_elems(), some_elems())
    if variant == "MSI":
        dbox = some_elems()
        extra = frozenset((b, x) for x in dbox for b in range(n))
        return DomainSpec.msi(some_pairs() | extra, dbox)
    return DomainSpec.modplus(some_elems(), some_elems())


_VARIANT_POOLS = {
    "SI": ("POSET", None), "BSI": ("POSET", "BI"), "MSI": ("POSET", "KM"),
    "MOD": ("PREORDER", None), "TEN": ("PREORDER", "TENSE"), "MODPLUS": ("STRICT", None),
}


def _variant_algebras(variant, max_frame, max_size):
    kind, wrap = _VARIANT_POOLS[variant]
    out = []
    for n in range(1, max_frame + 1):
        for f in enumerate_frames(n, kind):
            if wrap == "BI":
                a = dual_algebra(make_frame("BI", f.rel))
            elif wrap == "KM":
                a = dual_algebra(km_from_poset(f.rel))
            elif wrap == "TENSE":
                a = dual_algebra(make_frame("TENSE", f.rel))
            else:
                a = dual_algebra(f)
            if a.size <= max_size:
                out.append(a)
    return out


def suite_scr(samples=200, seed=77):
    rep = SuiteReport("scr")
    for variant in ("SI", "MOD", "BSI", "TEN", "MSI", "MODPLUS"):
        rng = Lcg(seed + hash(variant) % 1000)
        pool = _variant_algebras(variant, 4, 8)
        for i in range(samples):
            a = pool[rng.below(len(pool))]
            dom = _sample_domain(variant, a, rng)
            s = scr_mod.build_scr(a, dom)
            rep.run(f"{variant} self-refutation #{i}",
                    lambda x=a, y=s: scr_mod.refutes_scr(x, y))
        # cross-oracle: sampled domains on small sources, all targets <= 6
        targets = _variant_algebras(variant, 4, 6)
        sources = [x for x in targets if x.size <= 4]
        for src in sources:
            for j in range(4):
                dom = _sample_domain(variant, src, rng)
                s = scr_mod.build_scr(src, dom)
                for tgt in targets:
                    rep.run(f"{variant} oracle {src.size}->{tgt.size} #{j}",
                            lambda t=tgt, y=s:
                            scr_mod.refutes_scr(t, y)
                            == (not validates(t, y.rule).valid))
        # geometric/algebraic agreement on small instances
        geo_srcs = [x for x in sources if x.size <= 4]
        geo_tgts = [x for x in targets if x.size <= 6]
        for src in geo_srcs:
            dom = _sample_domain(variant, src, rng)
            gd = to_geometric(src, dom, fr_mod.beta(src))
            for tgt in geo_tgts:
                rep.run(f"{variant} geometric {src.size}->{tgt.size}",
                        lambda s2=src, t2=tgt, d2=dom, g2=gd:
                        (scr_mod.find_stable_embedding(s2, t2, d2) is not None)
                        == (scr_mod.find_stable_surjection(
                            dual_frame(t2), dual_frame(s2), g2) is not None))
    return rep


# ---------------------------------------------------------------------------
# rewrite equivalence

_REWRITE_TARGET_POOL = {
    Sig.SI: ("POSET", None), Sig.BSI: ("POSET", "BI"), Sig.MSI: ("POSET", "KM"),
    Sig.MD: ("PREORDER", None), Sig.TEN: ("PREORDER", "TENSE"),
}


def suite_rewrite(max_frame=4, bound=6):
    rep = SuiteReport("rewrite")
    jobs = [(sig, False) for sig in (Sig.SI, Sig.MD, Sig.BSI, Sig.TEN, Sig.MSI)]
    jobs.append((Sig.MD, True))
    for sig, magari in jobs:
        if magari:
            targets = [dual_algebra(f)
                       for n in range(1, max_frame + 1)
                       for f in enumerate_frames(n, "STRICT")]
            tag = "GL"
        else:
            kind, wrap = _REWRITE_TARGET_POOL[sig]
            targets = _variant_algebras(
                {Sig.SI: "SI", Sig.MD: "MOD", Sig.BSI: "BSI",
                 Sig.TEN: "TEN", Sig.MSI: "MSI"}[sig], max_frame, 1 << max_frame)
            tag = sig.value
        for r in (CORPUS_GL if magari else CORPUS[sig]):
            xi = scr_mod.rewrite_rule_bounded(r, bound, magari=magari)
            for k in targets:
                rep.run(f"{tag} rewrite equiv {len(rep.failures)}",
                        lambda kk=k, rr=r, xx=xi:
                        (not validates(kk, rr).valid)
                        == any(scr_mod.refutes_scr(kk, s) for s in xx))
    return rep


# ---------------------------------------------------------------------------
# skeleton (translations and identities)

def suite_skeleton(max_size=4):
    rep = SuiteReport("skeleton")
    # translation lemmas
    for n in range(1, max_size + 1):
        for f in enumerate_frames(n, "PREORDER"):
            a = dual_algebra(f)
            for r in CORPUS[Sig.SI]:
                rep.run(f"si translation {f.rel}",
                        lambda x=a, y=r: cmp_mod.check_gtskeleton(x, y).agree)
    for n in range(1, min(max_size, 3) + 1):
        for f in enumerate_frames(n, "PREORDER"):
            t = dual_algebra(make_frame("TENSE", f.rel))
            for r in CORPUS[Sig.BSI]:
                rep.run(f"bsi translation {f.rel}",
                        lambda x=t, y=r: cmp_mod.check_gtskeleton(x, y).agree)
    for n in range(1, max_size + 1):
        for f in enumerate_frames(n, "STRICT"):
            m = dual_algebra(f)
            for r in CORPUS[Sig.MSI]:
                rep.run(f"msi translation {f.rel}",
                        lambda x=m, y=r: cmp_mod.check_gtskeleton(x, y).agree)
    # rho sigma identity and sigma class membership
    for n in range(1, max_size + 2):
        for f in enumerate_frames(n, "POSET"):
            ha = dual_algebra(f)
            rep.run(f"rho sigma id HA {f.rel}",
                    lambda x=ha: cmp_mod.check_skeleton_identities(x).agree)
            rep.run(f"sigma GRZ {f.rel}",
                    lambda x=ha: check_class(cmp_mod.sigma_algebra(x), "GRZ").ok)
            bi = dual_algebra(make_frame("BI", f.rel))
            rep.run(f"rho sigma id BIHA {f.rel}",
                    lambda x=bi: cmp_mod.check_skeleton_identities(x).agree)
            rep.run(f"sigma GRZ.T {f.rel}",
                    lambda x=bi: check_class(cmp_mod.sigma_algebra(x), "GRZ_T").ok)
            frt = dual_algebra(km_from_poset(f.rel))
            rep.run(f"rho sigma id FRT {f.rel}",
                    lambda x=frt: cmp_mod.check_skeleton_identities(x).agree)
            rep.run(f"sigma MAG {f.rel}",
                    lambda x=frt: check_class(cmp_mod.sigma_algebra(x), "MAG").ok)
    # sigma rho embeds into the identity
    for n in range(1, max_size + 1):
        for f in enumerate_frames(n, "PREORDER"):
            a = dual_algebra(f)
            rep.run(f"sigma rho embed S4 {f.rel}",
                    lambda x=a: cmp_mod.check_skeleton_identities(x).agree)
            if n <= 3:
                t = dual_algebra(make_frame("TENSE", f.rel))
                rep.run(f"sigma rho embed TEN {f.rel}",
                        lambda x=t: cmp_mod.check_skeleton_identities(x).agree)
    # main lemma instances on GRZ algebras (skeletal, so always agree)
    for n in range(1, max_size + 1):
        for f in enumerate_frames(n, "POSET"):
            a = dual_algebra(make_frame("PREORDER", f.rel))
            for r in CORPUS[Sig.MD][:5]:
                rep.run(f"main lemma {f.rel}",
                        lambda x=a, y=r: cmp_mod.check_main_lemma(x, y).agree)
    return rep


# ---------------------------------------------------------------------------
# collapse and cluster expansion

def suite_collapse(max_size=4, seed=5):
    rep = SuiteReport("collapse")
    rng = Lcg(seed)
    preorders = enumerate_frames_upto(max_size, "PREORDER")
    small = [f for f in preorders if f.size <= 3]
    for f in small:
        a = dual_algebra(f)
        doms = [DomainSpec.mod(frozenset())]
        for _ in range(3):
            doms.append(DomainSpec.mod(
                frozenset(x for x in range(a.size) if rng.below(2))))
        for dom in doms:
            s = scr_mod.build_scr(a, dom)
            col = scr_mod.collapse_scr(s)
            for x in preorders:
                refuted = scr_mod.find_stable_surjection(
                    x, s.frame(), s.frame_domains()) is not None
                if not refuted:
                    continue
                skel, _ = skeleton_frame(x)
                rep.run(f"collapse {f.rel} {sorted(dom.elems)} on {x.rel}",
                        lambda sk=skel, c=col:
                        scr_mod.find_stable_surjection(sk, c.frame(), c.geometric)
                        is not None)
    # skeleton of expansion is the original poset
    for n in range(1, 4):
        for f in enumerate_frames(n, "POSET"):
            for sizes in itertools.product((1, 2, 3), repeat=n):
                if sum(sizes) > 6:
                    continue
                rep.run(f"expansion {f.rel} {sizes}",
                        lambda g=f, ss=sizes: _expansion_roundtrip(g, ss))
    return rep


def _expansion_roundtrip(f, sizes):
    exp, proj = fr_mod.cluster_expansion(f, dict(enumerate(sizes)))
    skel, proj2 = skeleton_frame(exp)
    if gen_mod.canonical_matrix(skel.rel) != gen_mod.canonical_matrix(f.rel):
        return False
    # the projection must realize the quotient: same fibers up to relabeling
    fibers = {}
    for i, y in enumerate(proj):
        fibers.setdefault(y, set()).add(i)
    fibers2 = {}
    for i, y in enumerate(proj2):
        fibers2.setdefault(y, set()).add(i)
    return sorted(map(sorted, fibers.values())) == sorted(map(sorted, fibers2.values()))


# ---------------------------------------------------------------------------
# KM / GL structure facts

def suite_kmgl(max_size=4):
    rep = SuiteReport("kmgl")
    # over all transitive relations on <= 3 points: Magari iff strict
    for n in range(1, 4):
        for bits in itertools.product((0, 1), repeat=n * n):
            rel = tuple(tuple(bits[x * n + y] for y in range(n)) for x in range(n))
            if not fr_mod._transitive(rel, n):
                continue
            a = _powerset_modal(rel, n)
            strict = all(rel[x][x] == 0 for x in range(n))
            rep.run(f"MAG iff strict {rel}",
                    lambda x=a, s=strict: check_class(x, "MAG").ok == s)
    # finite Magari duals are irreflexive
    for n in range(1, max_size + 1):
        for f in enumerate_frames(n, "STRICT"):
            a = dual_algebra(f)
            rep.run(f"dual irreflexive {f.rel}",
                    lambda x=a: all(dual_frame(x).rel[i][i] == 0
                                    for i in range(dual_frame(x).size)))
    # fronton expansion uniqueness and the KM second relation
    for n in range(1, max_size + 1):
        for f in enumerate_frames(n, "POSET"):
            frt = dual_algebra(km_from_poset(f.rel))
            ha = alg_mod.FiniteAlgebra("HA", frt.size, frt.zero, frt.one,
                                       frt.meet, frt.join, imp=frt.imp)
            rep.run(f"fronton uniqueness {f.rel}",
                    lambda x=frt, h=ha: fronton_expand(h).boxdot == x.boxdot)
            km = dual_frame(frt)
            rep.run(f"km second relation {f.rel}",
                    lambda k=km: all(
                        bool(k.rel2[x][y]) == (bool(k.rel[x][y]) and x != y)
                        for x in range(k.size) for y in range(k.size)))
            rep.run(f"fronton round trip {f.rel}",
                    lambda x=frt: find_isomorphism(
                        x, dual_algebra(dual_frame(x))) is not None)
    # KM-GL translation lemma and identities
    for n in range(1, max_size + 1):
        for f in enumerate_frames(n, "STRICT"):
            m = dual_algebra(f)
            for r in CORPUS[Sig.MSI][:8]:
                rep.run(f"km translation {f.rel}",
                        lambda x=m, y=r: cmp_mod.check_gtskeleton(x, y).agree)
            rep.run(f"sigma rho embed MAG {f.rel}",
                    lambda x=m: cmp_mod.check_skeleton_identities(x).agree)
        for f in enumerate_frames(n, "POSET"):
            frt = dual_algebra(km_from_poset(f.rel))
            rep.run(f"rho sigma id FRT {f.rel}",
                    lambda x=frt: cmp_mod.check_skeleton_identities(x).agree)
    return rep


def _powerset_modal(rel, n):
    full = (1 << n) - 1
    meet = tuple(tuple(a & b for b in range(full + 1)) for a in range(full + 1))
    join = tuple(tuple(a | b for b in range(full + 1)) for a in range(full + 1))
    ngt = tuple(full ^ a for a in range(full + 1))
    bx = tuple(sum(1 << x for x in range(n)
                   if all(not rel[x][y] or a >> y & 1 for y in range(n)))
               for a in range(full + 1))
    return alg_mod.FiniteAlgebra("MA", full + 1, 0, full, meet, join, neg=ngt, box=bx)


SUITES = {
    "duality": suite_duality,
    "filtration": suite_filtration,
    "scr": suite_scr,
    "rewrite": suite_rewrite,
    "skeleton": suite_skeleton,
    "collapse": suite_collapse,
    "kmgl": suite_kmgl,
}


def run_suite(name, **kwargs):
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](**kwargs)
