"""Domain parameter sets attached to stable canonical rules.

Algebraic domains name carrier elements (or pairs); geometric domains name
point sets of a dual frame.  The six variants mirror the rule families:

    SI       D        pairs (a, b), implication agreement
    MOD      D        elements, box agreement
    BSI      D->, D<-
    TEN      DboxF, DdiaP
    MSI      D->, Dbox   with a in Dbox forcing (b, a) in D-> for every b
    MODPLUS  Dbox+, Dbox
"""

from __future__ import annotations

from dataclasses import dataclass, field

VARIANTS = ("SI", "MOD", "BSI", "TEN", "MSI", "MODPLUS")


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class DomainSpec:
    variant: str
    pairs: frozenset = frozenset()        # SI/BSI/MSI implication pairs
    pairs2: frozenset = frozenset()       # BSI coimplication pairs
    elems: frozenset = frozenset()        # MOD box / TEN boxF / MSI boxdot / MODPLUS box+
    elems2: frozenset = frozenset()       # TEN diaP / MODPLUS box

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise DomainError(f"unknown variant {self.variant!r}")

    @classmethod
    def si(cls, pairs):
        return cls("SI", pairs=frozenset(pairs))

    @classmethod
    def mod(cls, elems):
        return cls("MOD", elems=frozenset(elems))

    @classmethod
    def bsi(cls, imp_pairs, coimp_pairs):
        return cls("BSI", pairs=frozenset(imp_pairs), pairs2=frozenset(coimp_pairs))

    @classmethod
    def ten(cls, boxf_elems, diap_elems):
        return cls("TEN", elems=frozenset(boxf_elems), elems2=frozenset(diap_elems))

    @classmethod
    def msi(cls, imp_pairs, box_elems):
        return cls("MSI", pairs=frozenset(imp_pairs), elems=frozenset(box_elems))

    @classmethod
    def modplus(cls, boxplus_elems, box_elems):
        return cls("MODPLUS", elems=frozenset(boxplus_elems), elems2=frozenset(box_elems))

    def check_against(self, alg):
        """Validate element ranges and the MSI closure condition."""
        rng = range(alg.size)
        for (a, b) in self.pairs | self.pairs2:
            if a not in rng or b not in rng:
                raise DomainError("domain pair outside the carrier")
        for a in self.elems | self.elems2:
            if a not in rng:
                raise DomainError("domain element outside the carrier")
        if self.variant == "MSI":
            for a in self.elems:
                for b in rng:
                    if (b, a) not in self.pairs:
                        raise DomainError(
                            f"MSI closure violated: {a} in Dbox needs ({b}, {a}) in D->")

    def mapped(self, h):
        """Image of the domains under an element map (for dedup up to iso)."""
        return DomainSpec(
            self.variant,
            frozenset((h[a], h[b]) for a, b in self.pairs),
            frozenset((h[a], h[b]) for a, b in self.pairs2),
            frozenset(h[a] for a in self.elems),
            frozenset(h[a] for a in self.elems2))

    def to_json(self):
        d = {"variant": self.variant}
        if self.pairs:
            d["pairs"] = sorted([a, b] for a, b in self.pairs)
        if self.pairs2:
            d["pairs2"] = sorted([a, b] for a, b in self.pairs2)
        if self.elems:
            d["elems"] = sorted(self.elems)
        if self.elems2:
            d["elems2"] = sorted(self.elems2)
        return d

    @classmethod
    def from_json(cls, d):
        return cls(d["variant"],
                   frozenset(tuple(p) for p in d.get("pairs", [])),
                   frozenset(tuple(p) for p in d.get("pairs2", [])),
                   frozenset(d.get("elems", [])),
                   frozenset(d.get("elems2", [])))


@dataclass(frozen=True)
class FrameDomains:
    """Geometric domains: families of point sets of a fixed frame."""

    variant: str
    sets: frozenset = frozenset()    # primary family (SI/MOD/MSI ->; TEN boxF; MODPLUS box+)
    sets2: frozenset = frozenset()   # secondary family (BSI <-; TEN diaP; MSI box; MODPLUS box)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise DomainError(f"unknown variant {self.variant!r}")

    def mapped(self, point_map):
        f = lambda s: frozenset(point_map[x] for x in s)
        return FrameDomains(self.variant,
                            frozenset(f(s) for s in self.sets),
                            frozenset(f(s) for s in self.sets2))


def to_geometric(alg, dom, beta):
    """Translate algebraic domains into point-set families over beta.

    SI/BSI/MSI pairs (a,b) become beta(a) minus beta(b); box-style elements
    become the complement of beta(a); TEN diaP elements become beta(a).
    """
    full = beta[alg.one]  # the top element covers every point of the dual
    diff = lambda ab: beta[ab[0]] - beta[ab[1]]
    comp = lambda a: full - beta[a]
    v = dom.variant
    if v == "SI":
        return FrameDomains("SI", frozenset(diff(p) for p in dom.pairs))
    if v == "BSI":
        return FrameDomains("BSI", frozenset(diff(p) for p in dom.pairs),
                            frozenset(diff(p) for p in dom.pairs2))
    if v == "MOD":
        return FrameDomains("MOD", frozenset(comp(a) for a in dom.elems))
    if v == "TEN":
        return FrameDomains("TEN", frozenset(comp(a) for a in dom.elems),
                            frozenset(beta[a] for a in dom.elems2))
    if v == "MSI":
        return FrameDomains("MSI", frozenset(diff(p) for p in dom.pairs),
                            frozenset(comp(a) for a in dom.elems))
    return FrameDomains("MODPLUS", frozenset(comp(a) for a in dom.elems),
                        frozenset(comp(a) for a in dom.elems2))
