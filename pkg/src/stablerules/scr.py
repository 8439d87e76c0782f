"""Stable and pre-stable canonical rules: construction, refutation, rewriting.

A rule encodes a finite algebra with one atom per element plus domain sets on
which designated operations must be matched exactly.  Refutation on a target
algebra is equivalent to the existence of a stable (or pre-stable) embedding
satisfying the bounded domain condition, searched here by backtracking; the
rendered rule gives the brute-force cross-oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import algebra as alg_mod
from . import frames as fr_mod
from . import filtration as flt_mod
from . import gen as gen_mod
from .algebra import FiniteAlgebra, atoms_of, join_irreducibles, validates
from .domains import DomainSpec, FrameDomains, to_geometric
from .syntax import (Sig, Rule, make_rule, var, bot, top, conj, disj, imp, coimp,
                     neg, box, boxf, diap, boxdot, boxplus, iff, material_imp,
                     subformula_closure)

_VARIANT_SIG = {"SI": Sig.SI, "MOD": Sig.MD, "BSI": Sig.BSI, "TEN": Sig.TEN,
                "MSI": Sig.MSI, "MODPLUS": Sig.MD}

_VARIANT_CLASS = {"SI": ("HA",), "MOD": ("MA",), "BSI": ("BIHA",),
                  "TEN": ("TEN",), "MSI": ("FRT",), "MODPLUS": ("MA", "MAG")}


class ScrError(ValueError):
    pass


@dataclass(frozen=True)
class StableCanonicalRule:
    algebra: FiniteAlgebra
    domains: DomainSpec
    rule: Rule
    # collapsed rules carry their quotient frame and domains in its indexing
    geometric: FrameDomains | None = None
    geo_frame: fr_mod.FiniteFrame | None = None

    @property
    def variant(self):
        return self.domains.variant

    def frame(self):
        if self.geo_frame is not None:
            return self.geo_frame
        return fr_mod.dual_frame(self.algebra)

    def frame_domains(self):
        if self.geometric is not None:
            return self.geometric
        return to_geometric(self.algebra, self.domains, fr_mod.beta(self.algebra))

    def to_json(self):
        d = {"algebra": self.algebra.to_json(), "domains": self.domains.to_json()}
        from .syntax import print_rule
        d["rule"] = print_rule(self.rule)
        return d


def build_scr(alg, dom):
    """Render the canonical rule of (alg, dom) with atom p_i for element i."""
    if alg.cls not in _VARIANT_CLASS[dom.variant]:
        raise ScrError(f"variant {dom.variant} needs class {_VARIANT_CLASS[dom.variant]},"
                       f" got {alg.cls}")
    dom.check_against(alg)
    sig = _VARIANT_SIG[dom.variant]
    n = alg.size
    p = [var(i, sig) for i in range(n)]
    prem = []

    def eq(a, b):
        prem.append(iff(a, b))

    # bounded-lattice equations shared by every variant
    for x in range(n):
        for y in range(x, n):
            eq(p[alg.meet[x][y]], conj(p[x], p[y]))
            eq(p[alg.join[x][y]], disj(p[x], p[y]))

    if dom.variant in ("SI", "BSI", "MSI"):
        eq(p[alg.zero], bot(sig))
        eq(p[alg.one], top(sig))
        for (a, b) in sorted(dom.pairs):
            eq(p[alg.imp[a][b]], imp(p[a], p[b]))
        if dom.variant == "BSI":
            for (a, b) in sorted(dom.pairs2):
                eq(p[alg.coimp[a][b]], coimp(p[a], p[b]))
        if dom.variant == "MSI":
            for a in sorted(dom.elems):
                eq(p[alg.boxdot[a]], boxdot(p[a]))
        concl = [iff(p[x], p[y]) for x in range(n) for y in range(x + 1, n)]
        return StableCanonicalRule(alg, dom, make_rule(prem, concl, sig))

    # Boolean-based variants
    for x in range(n):
        eq(p[alg.neg[x]], neg(p[x]))
    if dom.variant == "MOD":
        for x in range(n):
            prem.append(material_imp(p[alg.box[x]], box(p[x])))
        for a in sorted(dom.elems):
            prem.append(material_imp(box(p[a]), p[alg.box[a]]))
    elif dom.variant == "TEN":
        for x in range(n):
            prem.append(material_imp(p[alg.boxF[x]], boxf(p[x])))
            prem.append(material_imp(diap(p[x]), p[alg.diaP[x]]))
        for a in sorted(dom.elems):
            prem.append(material_imp(boxf(p[a]), p[alg.boxF[a]]))
        for a in sorted(dom.elems2):
            prem.append(material_imp(p[alg.diaP[a]], diap(p[a])))
    else:  # MODPLUS
        for x in range(n):
            prem.append(material_imp(p[alg.boxplus(x)], boxplus(p[x])))
        for a in sorted(dom.elems):
            prem.append(material_imp(boxplus(p[a]), p[alg.boxplus(a)]))
        for a in sorted(dom.elems2):
            eq(p[alg.box[a]], box(p[a]))
    concl = [p[x] for x in range(n) if x != alg.one]
    return StableCanonicalRule(alg, dom, make_rule(prem, concl, sig))


# ---------------------------------------------------------------------------
# embedding search

def _lattice_homo_ok(src, tgt, h):
    for x in range(src.size):
        for y in range(src.size):
            if h[src.meet[x][y]] != tgt.meet[h[x]][h[y]]:
                return False
            if h[src.join[x][y]] != tgt.join[h[x]][h[y]]:
                return False
    return h[src.zero] == tgt.zero and h[src.one] == tgt.one


def _bdc_ok(src, tgt, h, dom, full_hom=False):
    v = dom.variant
    if v in ("SI", "BSI", "MSI"):
        for (a, b) in dom.pairs:
            if h[src.imp[a][b]] != tgt.imp[h[a]][h[b]]:
                return False
        if v == "BSI":
            for (a, b) in dom.pairs2:
                if h[src.coimp[a][b]] != tgt.coimp[h[a]][h[b]]:
                    return False
        if v == "MSI":
            for a in dom.elems:
                if h[src.boxdot[a]] != tgt.boxdot[h[a]]:
                    return False
        return True
    if v == "MOD":
        for x in range(src.size):
            if not tgt.leq(h[src.box[x]], tgt.box[h[x]]):
                return False
        eqs = range(src.size) if full_hom else dom.elems
        return all(h[src.box[a]] == tgt.box[h[a]] for a in eqs)
    if v == "TEN":
        for x in range(src.size):
            if not tgt.leq(h[src.boxF[x]], tgt.boxF[h[x]]):
                return False
            if not tgt.leq(tgt.diaP[h[x]], h[src.diaP[x]]):
                return False
        e1 = range(src.size) if full_hom else dom.elems
        e2 = range(src.size) if full_hom else dom.elems2
        return (all(h[src.boxF[a]] == tgt.boxF[h[a]] for a in e1)
                and all(h[src.diaP[a]] == tgt.diaP[h[a]] for a in e2))
    # MODPLUS: pre-stability in terms of box+
    bp_s = [src.boxplus(x) for x in range(src.size)]
    for x in range(src.size):
        if not tgt.leq(h[bp_s[x]], tgt.boxplus(h[x])):
            return False
    e1 = range(src.size) if full_hom else dom.elems
    e2 = range(src.size) if full_hom else dom.elems2
    return (all(h[bp_s[a]] == tgt.boxplus(h[a]) for a in e1)
            and all(h[src.box[a]] == tgt.box[h[a]] for a in e2))


def _boolean_embeddings(src, tgt):
    """Yield injective Boolean embeddings src -> tgt via atom images."""
    s_atoms = atoms_of(src)
    t_elems = list(tgt.elements())
    k = len(s_atoms)
    img = [None] * k

    def build():
        h = []
        for x in src.elements():
            m = tgt.zero
            for i, t in enumerate(s_atoms):
                if src.leq(t, x):
                    m = tgt.join[m][img[i]]
            h.append(m)
        return h

    def bt(i, used_join):
        if i == k:
            if used_join == tgt.one:
                yield build()
            return
        for y in t_elems:
            if y == tgt.zero:
                continue
            if tgt.meet[used_join][y] != tgt.zero:
                continue  # atom images must be pairwise disjoint
            img[i] = y
            yield from bt(i + 1, tgt.join[used_join][y])
        img[i] = None

    yield from bt(0, tgt.zero)


def _lattice_embeddings(src, tgt):
    """Yield injective bounded-lattice embeddings src -> tgt."""
    ji = join_irreducibles(src)
    k = len(ji)
    img = [None] * k

    def build():
        h = []
        for x in src.elements():
            m = tgt.zero
            for i, j in enumerate(ji):
                if src.leq(j, x):
                    m = tgt.join[m][img[i]]
            h.append(m)
        return h

    def bt(i):
        if i == k:
            h = build()
            if len(set(h)) == src.size and _lattice_homo_ok(src, tgt, h):
                yield h
            return
        for y in tgt.elements():
            ok = True
            for i2 in range(i):
                # distinct irreducibles need distinct, order-consistent images
                if img[i2] == y:
                    ok = False
                    break
                if src.leq(ji[i2], ji[i]) and not tgt.leq(img[i2], y):
                    ok = False
                    break
                if src.leq(ji[i], ji[i2]) and not tgt.leq(y, img[i2]):
                    ok = False
                    break
            if ok:
                img[i] = y
                yield from bt(i + 1)
        img[i] = None

    yield from bt(0)


def find_stable_embedding(src, tgt, dom, full_hom=False):
    """An injective stable/pre-stable map src -> tgt satisfying the BDC, or None.

    Lattice variants search over join-irreducible images, Boolean variants
    over atom images; either way the candidate extends by joins and is then
    verified wholesale.  full_hom upgrades every operation to exact agreement
    (used for the sigma-rho subalgebra witnesses).
    """
    if src.cls not in _VARIANT_CLASS[dom.variant] or tgt.cls not in _VARIANT_CLASS[dom.variant]:
        raise ScrError(f"variant {dom.variant} expects classes {_VARIANT_CLASS[dom.variant]}")
    if src.size > tgt.size:
        return None
    gen = (_lattice_embeddings if dom.variant in ("SI", "BSI", "MSI")
           else _boolean_embeddings)
    for h in gen(src, tgt):
        if _bdc_ok(src, tgt, h, dom, full_hom):
            return tuple(h)
    return None


def refutes_scr(tgt, scr):
    """target refutes the canonical rule iff a stable embedding with BDC exists.

    Collapsed rules (geometric domains) are decided by the frame-side
    condition on the target's dual frame.
    """
    if scr.geometric is not None:
        return find_stable_surjection(fr_mod.dual_frame(tgt), scr.frame(),
                                      scr.geometric) is not None
    return find_stable_embedding(scr.algebra, tgt, scr.domains) is not None


# ---------------------------------------------------------------------------
# frame-side search

_SURJ_VARIANT_KINDS = {
    "SI": ("POSET", "BI", "KM"), "BSI": ("POSET", "BI"), "MOD": ("PREORDER", "STRICT"),
    "TEN": ("TENSE", "PREORDER"), "MSI": ("KM",), "MODPLUS": ("STRICT",),
}


def find_stable_surjection(x_frame, f_frame, fdom):
    """A surjective relation-preserving map with every BDC clause, or None.

    Exhaustive over all surjections (sizes here are tiny); pre-stable
    variants (MSI, MODPLUS) preserve the reflexivized relation only.
    """
    if x_frame.kind not in _SURJ_VARIANT_KINDS[fdom.variant] or \
       f_frame.kind not in _SURJ_VARIANT_KINDS[fdom.variant]:
        raise ScrError(f"variant {fdom.variant} mismatches frame kinds "
                       f"{x_frame.kind}/{f_frame.kind}")
    nx, nf = x_frame.size, f_frame.size
    if nf > nx:
        return None
    rx, rf = x_frame.rel, f_frame.rel

    def rel_ok(g):
        v = fdom.variant
        for a in range(nx):
            for b in range(nx):
                if v in ("MSI", "MODPLUS"):
                    # preserve the reflexivized relation
                    if (a == b or rx[a][b]) and not (g[a] == g[b] or rf[g[a]][g[b]]):
                        return False
                elif rx[a][b] and not rf[g[a]][g[b]]:
                    return False
        return True

    succ_x = [frozenset(y for y in range(nx) if rx[x][y]) for x in range(nx)]
    succ_f = [frozenset(y for y in range(nf) if rf[x][y]) for x in range(nf)]
    pred_x = [frozenset(y for y in range(nx) if rx[y][x]) for x in range(nx)]
    pred_f = [frozenset(y for y in range(nf) if rf[y][x]) for x in range(nf)]
    rsucc_x = [succ_x[x] | {x} for x in range(nx)]
    rsucc_f = [succ_f[x] | {x} for x in range(nf)]
    sx2 = sf2 = None
    if fdom.variant == "MSI":
        sx2 = [frozenset(y for y in range(nx) if x_frame.rel2[x][y]) for x in range(nx)]
        sf2 = [frozenset(y for y in range(nf) if f_frame.rel2[x][y]) for x in range(nf)]

    def bdc_ok(g):
        v = fdom.variant
        img = lambda s: {g[y] for y in s}
        for d in fdom.sets:
            for x in range(nx):
                if v in ("SI", "BSI", "MSI"):
                    up_f = rsucc_f[g[x]]
                    if up_f & d and not img(rsucc_x[x]) & d:
                        return False
                elif v in ("MOD", "TEN"):
                    if succ_f[g[x]] & d and not img(succ_x[x]) & d:
                        return False
                else:  # MODPLUS: box+ family, one direction on R+
                    if rsucc_f[g[x]] & d and not img(rsucc_x[x]) & d:
                        return False
        for d in fdom.sets2:
            for x in range(nx):
                if v == "BSI":
                    down_f = pred_f[g[x]] | {g[x]}
                    if down_f & d and not (img(pred_x[x] | {x}) & d):
                        return False
                elif v == "TEN":
                    if pred_f[g[x]] & d and not img(pred_x[x]) & d:
                        return False
                elif v == "MSI":
                    a = sf2[g[x]] & d
                    b = {g[y] for y in sx2[x]} & d
                    if bool(a) != bool(b):
                        return False
                else:  # MODPLUS box family: back and forth
                    a = succ_f[g[x]] & d
                    b = img(succ_x[x]) & d
                    if bool(a) != bool(b):
                        return False
        return True

    for g in itertools.product(range(nf), repeat=nx):
        if len(set(g)) != nf:
            continue
        if rel_ok(g) and bdc_ok(g):
            return g
    return None


# ---------------------------------------------------------------------------
# rewriting rules into canonical form

_SIG_METHOD = {Sig.SI: "SI", Sig.BSI: "BSI", Sig.TEN: "TENSE", Sig.MSI: "FRT_WEAK"}


def _method_for(rule_sig, alg):
    if rule_sig is Sig.MD:
        return "MAG_WEAK" if alg.cls == "MAG" else "S4"
    return _SIG_METHOD[rule_sig]


def rewrite_rule(rule, countermodel):
    """Filtrate a refuting model through Sfor(rule) and encode the result.

    The countermodel (algebra, valuation) must refute the rule under exactly
    the given valuation.  The returned canonical rule is refuted by the
    countermodel, and every algebra refuting it refutes the original rule.
    """
    alg, v = countermodel
    if not alg_mod.model_refutes(alg, v, rule):
        raise ScrError("the given valuation does not refute the rule")
    theta = subformula_closure(rule)
    method = _method_for(rule.sig, alg)
    res = flt_mod.filtrate(alg, v, theta, method)
    return build_scr(res.algebra, res.domains)


def _dedup_scrs(scrs):
    """Keep one representative per isomorphism class of (algebra, domains)."""
    kept = []
    for s in scrs:
        dup = False
        for t in kept:
            if s.algebra.size != t.algebra.size or s.variant != t.variant:
                continue
            for h in alg_mod.isomorphisms(s.algebra, t.algebra):
                if s.domains.mapped(h) == t.domains:
                    dup = True
                    break
            if dup:
                break
        if not dup:
            kept.append(s)
    return kept


def _algebras_of_class(sig, size_bound, magari=False):
    """All algebras of the rule class up to size_bound, via frame enumeration."""
    out = []
    if sig in (Sig.SI, Sig.BSI, Sig.MSI):
        kind = "POSET"
        for n in range(1, size_bound):
            for f in gen_mod.enumerate_frames(n, kind, cap=max(n, 6)):
                if sig is Sig.SI:
                    a = fr_mod.dual_algebra(f)
                elif sig is Sig.BSI:
                    a = fr_mod.dual_algebra(fr_mod.make_frame("BI", f.rel))
                else:
                    a = fr_mod.dual_algebra(fr_mod.km_from_poset(f.rel))
                if a.size <= size_bound:
                    out.append(a)
    else:
        maxn = 0
        while (1 << (maxn + 1)) <= size_bound:
            maxn += 1
        base_kind = "STRICT" if magari else "PREORDER"
        for n in range(1, maxn + 1):
            for f in gen_mod.enumerate_frames(n, base_kind, cap=max(n, 6)):
                if sig is Sig.TEN:
                    a = fr_mod.dual_algebra(fr_mod.make_frame("TENSE", f.rel))
                else:
                    a = fr_mod.dual_algebra(f)
                if a.size <= size_bound:
                    out.append(a)
    return out


def rewrite_rule_bounded(rule, size_bound, magari=False):
    """Every canonical rule arising from refuting models up to size_bound.

    For every algebra K of the rule's class with at most size_bound elements:
    K refutes the rule iff K refutes some member of the returned set.  The
    set is deduplicated up to isomorphism of (algebra, domains) and is
    deterministic regardless of sampling order.
    """
    if size_bound < 2:
        raise ScrError("size bound must be at least 2")
    out = []
    for a in _algebras_of_class(rule.sig, size_bound, magari=magari):
        for v in alg_mod.refuting_valuations(a, rule):
            out.append(rewrite_rule(rule, (a, v)))
    return _dedup_scrs(out)


# ---------------------------------------------------------------------------
# collapse

def collapse_scr(scr):
    """Collapse a modal/tense canonical rule to the si/bsi rule of its skeleton.

    The dual frame is quotiented by clusters and the geometric domains are
    imaged through the projection.  Images need not be expressible as
    beta(a) minus beta(b), so the result carries geometric domains; premises
    are rendered for the pair-encodable images.
    """
    if scr.variant not in ("MOD", "TEN"):
        raise ScrError("collapse applies to MOD and TEN rules")
    f = scr.frame()
    skel, proj = fr_mod.skeleton_frame(f)
    gd = scr.frame_domains().mapped(proj)
    if scr.variant == "MOD":
        variant, kind = "SI", "POSET"
        new_gd = FrameDomains("SI", gd.sets)
        skel_frame = skel
    else:
        variant, kind = "BSI", "BI"
        new_gd = FrameDomains("BSI", gd.sets, gd.sets2)
        skel_frame = fr_mod.make_frame("BI", skel.rel)
    alg2 = fr_mod.dual_algebra(skel_frame)
    carrier = fr_mod.upset_carrier(skel_frame)  # element i of alg2 is carrier[i]

    # recover the pair-encodable part of the domains
    def encode(sets):
        pairs = set()
        for d in sets:
            found = None
            for a in alg2.elements():
                for bb in alg2.elements():
                    if carrier[a] - carrier[bb] == d:
                        found = (a, bb)
                        break
                if found:
                    break
            if found:
                pairs.add(found)
        return frozenset(pairs)

    dom = (DomainSpec.si(encode(new_gd.sets)) if variant == "SI"
           else DomainSpec.bsi(encode(new_gd.sets), encode(new_gd.sets2)))
    rendered = build_scr(alg2, dom)
    return StableCanonicalRule(alg2, dom, rendered.rule,
                               geometric=new_gd, geo_frame=skel_frame)
