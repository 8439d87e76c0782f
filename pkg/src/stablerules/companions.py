"""Goedel-style translations, the sigma/rho companion maps, lemma checkers.

sigma sends a Heyting-like algebra to a modal one over its free Boolean
extension; rho recovers the algebra of open elements.  Three parallel
settings: HA <-> S4/GRZ, bi-HA <-> tense, frontons <-> Magari.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import algebra as alg_mod
from .algebra import (FiniteAlgebra, AlgebraError, check_class, evaluate,
                      free_boolean_extension, open_elements, validates,
                      find_isomorphism)
from .domains import DomainSpec
from .scr import find_stable_embedding
from .syntax import (Sig, Formula, Rule, make_rule, var, bot, top, conj, disj,
                     neg, box, boxf, diap, boxplus)


class CompanionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# translations

_TARGET = {Sig.SI: Sig.MD, Sig.BSI: Sig.TEN, Sig.MSI: Sig.MD}


def godel_translate(obj, source=None):
    """Translate si/bsi/msi formulas or rules into md/ten/md.

    Atoms are boxed; implication becomes box(~A | B) (box+ over GL);
    coimplication becomes diaP(A & ~B); the msi box becomes the plain box.
    """
    if isinstance(obj, Rule):
        return make_rule([godel_translate(f, source) for f in obj.premises],
                         [godel_translate(f, source) for f in obj.conclusions],
                         _TARGET[obj.sig])
    f = obj
    if f.sig not in _TARGET:
        raise CompanionError(f"no translation from signature {f.sig.value}")
    tgt = _TARGET[f.sig]
    if f.kind == "var":
        p = var(f.var, tgt)
        if f.sig is Sig.BSI:
            return boxf(p)
        if f.sig is Sig.MSI:
            return boxplus(p)  # over GL the S4-like box is the reflexivized one
        return box(p)
    if f.kind == "bot":
        return bot(tgt)
    if f.kind == "top":
        return top(tgt)
    if f.kind == "and":
        return conj(godel_translate(f.args[0]), godel_translate(f.args[1]))
    if f.kind == "or":
        return disj(godel_translate(f.args[0]), godel_translate(f.args[1]))
    if f.kind == "imp":
        body = disj(neg(godel_translate(f.args[0])), godel_translate(f.args[1]))
        if f.sig is Sig.SI:
            return box(body)
        if f.sig is Sig.BSI:
            return boxf(body)
        return boxplus(body)
    if f.kind == "coimp":
        return diap(conj(godel_translate(f.args[0]), neg(godel_translate(f.args[1]))))
    if f.kind == "boxdot":
        return box(godel_translate(f.args[0]))
    raise CompanionError(f"untranslatable connective {f.kind}")


# ---------------------------------------------------------------------------
# sigma and rho

def sigma_algebra(h):
    """Box the free Boolean extension: box u = largest image element below u.

    HA -> MA (a GRZ algebra), BIHA -> TEN (GRZ.T), FRT -> MAG.
    """
    if h.cls not in ("HA", "BIHA", "FRT"):
        raise CompanionError(f"sigma expects HA/BIHA/FRT, got {h.cls}")
    b, emb = free_boolean_extension(h)
    n = b.size
    img = sorted(set(emb))

    def largest_below(u):
        return b.join_all(e for e in img if b.leq(e, u))

    def least_above(u):
        return b.meet_all(e for e in img if b.leq(u, e))

    if h.cls == "HA":
        bx = tuple(largest_below(u) for u in range(n))
        return FiniteAlgebra("MA", n, b.zero, b.one, b.meet, b.join, neg=b.neg, box=bx)
    if h.cls == "BIHA":
        bx = tuple(largest_below(u) for u in range(n))
        dp = tuple(least_above(u) for u in range(n))
        return FiniteAlgebra("TEN", n, b.zero, b.one, b.meet, b.join,
                             neg=b.neg, boxF=bx, diaP=dp)
    # fronton: box u = boxdot of the largest image element below u
    back = {e: x for x, e in enumerate(emb)}
    bx = tuple(emb[h.boxdot[back[largest_below(u)]]] for u in range(n))
    return FiniteAlgebra("MAG", n, b.zero, b.one, b.meet, b.join, neg=b.neg, box=bx)


def sigma_embedding(h):
    """The bounded-lattice embedding of h into sigma_algebra(h)'s carrier."""
    _, emb = free_boolean_extension(h)
    return emb


def rho_algebra(a):
    """Restrict to open elements: MA(S4) -> HA, TEN -> BIHA, MAG -> FRT."""
    if a.cls == "MA":
        if not check_class(a, "S4").ok:
            raise CompanionError("rho on MA expects an S4 algebra")
    elif a.cls not in ("TEN", "MAG"):
        raise CompanionError(f"rho expects MA/TEN/MAG, got {a.cls}")
    opens = open_elements(a)
    idx = {x: i for i, x in enumerate(opens)}
    k = len(opens)
    meet = tuple(tuple(idx[a.meet[x][y]] for y in opens) for x in opens)
    join = tuple(tuple(idx[a.join[x][y]] for y in opens) for x in opens)
    if a.cls == "MA":
        impt = tuple(tuple(idx[a.box[a.join[a.neg[x]][y]]] for y in opens) for x in opens)
        return FiniteAlgebra("HA", k, idx[a.zero], idx[a.one], meet, join, imp=impt)
    if a.cls == "TEN":
        impt = tuple(tuple(idx[a.boxF[a.join[a.neg[x]][y]]] for y in opens) for x in opens)
        coim = tuple(tuple(idx[a.diaP[a.meet[x][a.neg[y]]]] for y in opens) for x in opens)
        return FiniteAlgebra("BIHA", k, idx[a.zero], idx[a.one], meet, join,
                             imp=impt, coimp=coim)
    impt = tuple(tuple(idx[a.boxplus(a.join[a.neg[x]][y])] for y in opens) for x in opens)
    bx = tuple(idx[a.box[x]] for x in opens)
    return FiniteAlgebra("FRT", k, idx[a.zero], idx[a.one], meet, join,
                         imp=impt, boxdot=bx)


def tau_member(a, rules):
    """a lies in tau of the universal class axiomatized by the given rules."""
    if a.cls not in ("MA", "TEN"):
        raise CompanionError("tau membership is defined for MA(S4)/TEN algebras")
    r = rho_algebra(a)
    return all(validates(r, rule).valid for rule in rules)


# ---------------------------------------------------------------------------
# instance-level lemma checkers

@dataclass(frozen=True)
class CompanionReport:
    lemma: str
    left: str
    right: str
    agree: bool
    witness: object = None

    def __bool__(self):
        return self.agree

    def to_json(self):
        d = {"lemma": self.lemma, "left": self.left, "right": self.right,
             "agree": self.agree}
        if self.witness is not None:
            d["witness"] = repr(self.witness)
        return d


def _verdict_str(v):
    return "valid" if v.valid else "refuted"


_RHO_SOURCE = {"MA": Sig.SI, "TEN": Sig.BSI, "MAG": Sig.MSI}


def check_gtskeleton(a, rule):
    """a validates T(rule) iff rho(a) validates rule; report both sides."""
    if a.cls not in _RHO_SOURCE or rule.sig is not _RHO_SOURCE[a.cls]:
        raise CompanionError(f"gtskeleton pairs {a.cls} with "
                             f"{_RHO_SOURCE.get(a.cls, '?')} rules")
    lv = validates(a, godel_translate(rule))
    rv = validates(rho_algebra(a), rule)
    wit = None if lv.valid == rv.valid else (lv.witness, rv.witness)
    return CompanionReport("gtskeleton", _verdict_str(lv), _verdict_str(rv),
                           lv.valid == rv.valid, wit)


_FULL_DOM = {
    "MA": lambda a: DomainSpec.mod(frozenset(a.elements())),
    "TEN": lambda a: DomainSpec.ten(frozenset(a.elements()), frozenset(a.elements())),
    "MAG": lambda a: DomainSpec.modplus(frozenset(a.elements()), frozenset(a.elements())),
}


def check_skeleton_identities(x):
    """rho(sigma(x)) iso x for HA-like x; sigma(rho(x)) embeds into modal x."""
    if x.cls in ("HA", "BIHA", "FRT"):
        rs = rho_algebra(sigma_algebra(x))
        h = find_isomorphism(x, rs)
        return CompanionReport("rho_sigma_identity", "algebra", "rho(sigma(...))",
                               h is not None, h)
    if x.cls == "MAG" or (x.cls == "MA" and check_class(x, "S4").ok) or x.cls == "TEN":
        sr = sigma_algebra(rho_algebra(x))
        dom = _FULL_DOM[x.cls](sr)
        h = find_stable_embedding(sr, x, dom, full_hom=True)
        return CompanionReport("sigma_rho_embedding", "sigma(rho(...))", "algebra",
                               h is not None, h)
    raise CompanionError("skeleton identities need HA/BIHA/FRT or S4/TEN/MAG input")


_MAIN_CLASS = {"MA": "GRZ", "TEN": "GRZ_T", "MAG": "MAG"}


def check_main_lemma(a, rule):
    """Over GRZ/GRZ.T/MAG: a and sigma(rho(a)) validate the same rules.

    Finite duals here have no proper clusters, so agreement is expected in
    every instance; the report records both verdicts.
    """
    if a.cls not in _MAIN_CLASS:
        raise CompanionError("main lemma expects MA/TEN/MAG input")
    rep = check_class(a, _MAIN_CLASS[a.cls])
    if not rep.ok:
        raise CompanionError(f"precondition failed: {rep.failure} at {rep.instance}")
    if rule.sig is not (Sig.TEN if a.cls == "TEN" else Sig.MD):
        raise CompanionError("rule signature must match the algebra")
    lv = validates(a, rule)
    rv = validates(sigma_algebra(rho_algebra(a)), rule)
    wit = None if lv.valid == rv.valid else (lv.witness, rv.witness)
    return CompanionReport("main_lemma", _verdict_str(lv), _verdict_str(rv),
                           lv.valid == rv.valid, wit)
