"""Finite relational duals: posets, preorders, strict orders, KM frames.

All spaces carry the discrete topology, so every subset is clopen and every
map is continuous; only the combinatorial content of the dual spaces remains.
Point sets are represented as frozensets of point indices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import algebra as alg_mod
from .algebra import FiniteAlgebra, AlgebraError
from .syntax import Sig

KINDS = ("POSET", "PREORDER", "STRICT", "BI", "TENSE", "KM")


class FrameError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteFrame:
    kind: str
    size: int
    rel: tuple                 # n x n of 0/1
    rel2: tuple | None = None  # KM only

    def __post_init__(self):
        if self.kind not in KINDS:
            raise FrameError(f"unknown frame kind {self.kind!r}")
        _verify_kind(self)

    def __repr__(self):
        return f"<{self.kind} frame, {self.size} points>"

    def points(self):
        return range(self.size)

    def succ(self, x, rel=None):
        r = self.rel if rel is None else rel
        return frozenset(y for y in range(self.size) if r[x][y])

    def pred(self, x, rel=None):
        r = self.rel if rel is None else rel
        return frozenset(y for y in range(self.size) if r[y][x])

    def upset(self, s):
        return frozenset(y for x in s for y in self.succ(x))

    def downset(self, s):
        return frozenset(y for x in s for y in self.pred(x))

    def to_json(self):
        d = {"kind": self.kind, "size": self.size, "rel": [list(r) for r in self.rel]}
        if self.rel2 is not None:
            d["rel2"] = [list(r) for r in self.rel2]
        return d


def _reflexive(rel, n):
    return all(rel[x][x] for x in range(n))


def _irreflexive(rel, n):
    return not any(rel[x][x] for x in range(n))


def _transitive(rel, n):
    for x in range(n):
        for y in range(n):
            if rel[x][y]:
                for z in range(n):
                    if rel[y][z] and not rel[x][z]:
                        return False
    return True


def _antisymmetric(rel, n):
    return not any(rel[x][y] and rel[y][x] for x in range(n) for y in range(n) if x != y)


def _verify_kind(fr):
    n, rel = fr.size, fr.rel
    if len(rel) != n or any(len(r) != n for r in rel):
        raise FrameError("relation matrix shape mismatch")
    if not _transitive(rel, n):
        raise FrameError("relation must be transitive")
    if fr.kind in ("POSET", "BI", "KM"):
        if not (_reflexive(rel, n) and _antisymmetric(rel, n)):
            raise FrameError(f"{fr.kind} needs a partial order")
    elif fr.kind in ("PREORDER", "TENSE"):
        if not _reflexive(rel, n):
            raise FrameError(f"{fr.kind} needs a reflexive relation")
    elif fr.kind == "STRICT":
        if not _irreflexive(rel, n):
            raise FrameError("STRICT needs an irreflexive relation")
    if fr.kind == "KM":
        if fr.rel2 is None:
            raise FrameError("KM needs a second relation")
        for x in range(n):
            for y in range(n):
                strict = rel[x][y] and x != y
                if bool(fr.rel2[x][y]) != strict:
                    raise FrameError("KM second relation must equal the strict order")
    elif fr.rel2 is not None:
        raise FrameError("rel2 only allowed on KM frames")


def make_frame(kind, rel, rel2=None):
    rel = tuple(tuple(int(v) for v in row) for row in rel)
    if rel2 is not None:
        rel2 = tuple(tuple(int(v) for v in row) for row in rel2)
    return FiniteFrame(kind, len(rel), rel, rel2)


def from_json(d):
    return make_frame(d["kind"], d["rel"], d.get("rel2"))


def km_from_poset(rel):
    """Build a KM frame over a partial order, with rel2 the strict part."""
    n = len(rel)
    rel2 = tuple(tuple(1 if rel[x][y] and x != y else 0 for y in range(n)) for x in range(n))
    return make_frame("KM", rel, rel2)


# ---------------------------------------------------------------------------
# extremal point computations

def extremal_points(fr, u, kind):
    """qmax/max/qmin/min/pas/pas_converse of a subset, per the definitions.

    x is passive in u when no R-successor outside u can reach back into u.
    pas_converse applies the same definition to the converse relation.
    """
    n, rel = fr.size, fr.rel
    u = frozenset(u)
    if kind == "qmax":
        return frozenset(x for x in u if all(rel[y][x] for y in u if rel[x][y]))
    if kind == "max":
        return frozenset(x for x in u if all(y == x for y in u if rel[x][y]))
    if kind == "qmin":
        return frozenset(x for x in u if all(rel[x][y] for y in u if rel[y][x]))
    if kind == "min":
        return frozenset(x for x in u if all(y == x for y in u if rel[y][x]))
    if kind in ("pas", "pas_converse"):
        def r(a, b):
            return rel[a][b] if kind == "pas" else rel[b][a]
        out = set()
        for x in u:
            if all(not any(r(y, z) for z in u)
                   for y in range(n) if y not in u and r(x, y)):
                out.add(x)
        return frozenset(out)
    raise FrameError(f"unknown extremal kind {kind!r}")


def clusters(fr):
    """Partition under x ~ y iff Rxy and Ryx; unrelated points sit alone."""
    n, rel = fr.size, fr.rel
    seen = [False] * n
    out = []
    for x in range(n):
        if seen[x]:
            continue
        cls = [y for y in range(n) if y == x or (rel[x][y] and rel[y][x])]
        for y in cls:
            seen[y] = True
        out.append(tuple(cls))
    return tuple(out)


def cuts_cluster(s, cluster):
    """s cuts a cluster when it meets it without containing it."""
    c = set(cluster)
    return bool(c & set(s)) and bool(c - set(s))


def skeleton_frame(fr):
    """Quotient a transitive frame by its clusters.

    PREORDER/TENSE input yields (POSET, projection).  STRICT (or any raw
    transitive matrix wrapped in a STRICT frame) yields a KM frame whose <=
    is the reflexive closure of the quotient relation and whose second
    relation is the quotient relation itself.
    """
    cls = clusters(fr)
    rep = {}
    for i, c in enumerate(cls):
        for x in c:
            rep[x] = i
    k = len(cls)
    proj = tuple(rep[x] for x in range(fr.size))
    qrel = [[0] * k for _ in range(k)]
    for x in range(fr.size):
        for y in range(fr.size):
            if fr.rel[x][y]:
                qrel[rep[x]][rep[y]] = 1
    if fr.kind in ("PREORDER", "TENSE", "POSET", "BI"):
        return make_frame("POSET", qrel), proj
    # GL variant: <= from the reflexive closure, second relation from R
    if any(qrel[i][i] for i in range(k)):
        raise FrameError("skeleton of a frame with reflexive points is not a KM frame")
    le = tuple(tuple(1 if i == j or qrel[i][j] else 0 for j in range(k)) for i in range(k))
    return make_frame("KM", le, qrel), proj


def cluster_expansion(fr, sizes):
    """Blow each poset point y into a cluster of sizes[y] points.

    The relation is extended clusterwise: copies of y relate to copies of z
    iff y == z or Ryz.  Returns (PREORDER frame, projection new->old).
    """
    if fr.kind != "POSET":
        raise FrameError("cluster expansion expects a poset")
    proj = []
    for y in fr.points():
        if sizes[y] < 1:
            raise FrameError("cluster sizes must be positive")
        proj.extend([y] * sizes[y])
    m = len(proj)
    rel = tuple(tuple(1 if proj[i] == proj[j] or fr.rel[proj[i]][proj[j]] else 0
                      for j in range(m)) for i in range(m))
    return make_frame("PREORDER", rel), tuple(proj)


# ---------------------------------------------------------------------------
# point-set semantics

_SI_KINDS = {"POSET", "BI", "KM"}


def upsets(fr, rel=None):
    """All upward closed sets of the frame's (first) relation, sorted."""
    r = fr.rel if rel is None else rel
    n = fr.size
    out = []
    for mask in range(1 << n):
        s = [x for x in range(n) if mask >> x & 1]
        if all(r[x][y] <= (mask >> y & 1) for x in s for y in range(n)):
            out.append(frozenset(s))
    return out


def evaluate_frame(fr, valuation, f):
    """Truth set of f under {atom: frozenset of points}."""
    n = fr.size
    allp = frozenset(range(n))
    if f.kind == "var":
        if f.var not in valuation:
            raise FrameError(f"no assignment for atom p{f.var}")
        return frozenset(valuation[f.var])
    if f.kind == "bot":
        return frozenset()
    if f.kind == "top":
        return allp
    if f.kind == "and":
        return evaluate_frame(fr, valuation, f.args[0]) & evaluate_frame(fr, valuation, f.args[1])
    if f.kind == "or":
        return evaluate_frame(fr, valuation, f.args[0]) | evaluate_frame(fr, valuation, f.args[1])
    if f.kind == "neg":
        return allp - evaluate_frame(fr, valuation, f.args[0])
    a = evaluate_frame(fr, valuation, f.args[0])
    if f.kind == "imp":
        b = evaluate_frame(fr, valuation, f.args[1])
        return allp - fr.downset(a - b)
    if f.kind == "coimp":
        b = evaluate_frame(fr, valuation, f.args[1])
        return fr.upset(a - b)
    if f.kind in ("box", "boxf"):
        return frozenset(x for x in range(n) if fr.succ(x) <= a)
    if f.kind == "diap":
        return fr.upset(a)  # forward image along R
    if f.kind == "boxdot":
        return frozenset(x for x in range(n) if fr.succ(x, fr.rel2) <= a)
    raise FrameError(f"cannot evaluate {f.kind} on a frame")


_KIND_FOR_SIG = {
    Sig.SI: ("POSET", "BI", "KM"),
    Sig.BSI: ("POSET", "BI"),
    Sig.MD: ("PREORDER", "STRICT"),
    Sig.TEN: ("TENSE", "PREORDER"),
    Sig.MSI: ("KM",),
}


def _admissible_valuations(fr, sig, atoms):
    if sig in (Sig.SI, Sig.BSI, Sig.MSI):
        rel = fr.rel
        pool = upsets(fr, rel)
    else:
        pool = [frozenset(x for x in range(fr.size) if m >> x & 1) for m in range(1 << fr.size)]
    for combo in itertools.product(pool, repeat=len(atoms)):
        yield dict(zip(atoms, combo))


def frame_validates(fr, rule, max_atoms=alg_mod.DEFAULT_MAX_ATOMS):
    """Exhaustive Kripke validity with the uniform-conclusion reading.

    Valid means: under every admissible valuation, if every premise holds at
    every point then some single conclusion holds at every point.  This is
    the reading that matches validity on the dual algebra.
    """
    if fr.kind not in _KIND_FOR_SIG[rule.sig]:
        raise FrameError(f"{rule.sig.value} rules need a {_KIND_FOR_SIG[rule.sig]} frame")
    atoms = sorted(rule.atoms())
    if len(atoms) > max_atoms:
        raise FrameError(f"{len(atoms)} atoms exceeds the exhaustion bound {max_atoms}")
    allp = frozenset(range(fr.size))
    for v in _admissible_valuations(fr, rule.sig, atoms):
        if all(evaluate_frame(fr, v, g) == allp for g in rule.premises):
            if all(evaluate_frame(fr, v, d) != allp for d in rule.conclusions):
                return alg_mod.Verdict(False, v)
    return alg_mod.Verdict(True)


# ---------------------------------------------------------------------------
# finite duality

def upset_carrier(fr):
    """The upsets of fr in the element order used by dual_algebra."""
    return sorted(upsets(fr), key=lambda s: (len(s), sorted(s)))


def dual_algebra(fr):
    """The algebra of upsets (order kinds) or of all subsets (modal kinds)."""
    n = fr.size
    if fr.kind in ("POSET", "BI", "KM"):
        carrier = upset_carrier(fr)
        idx = {s: i for i, s in enumerate(carrier)}
        k = len(carrier)
        meet = tuple(tuple(idx[a & b] for b in carrier) for a in carrier)
        join = tuple(tuple(idx[a | b] for b in carrier) for a in carrier)
        impt = tuple(
            tuple(idx[frozenset(range(n)) - fr.downset(a - b)] for b in carrier)
            for a in carrier)
        zero, one = idx[frozenset()], idx[frozenset(range(n))]
        if fr.kind == "POSET":
            return FiniteAlgebra("HA", k, zero, one, meet, join, imp=impt)
        if fr.kind == "BI":
            coim = tuple(tuple(idx[fr.upset(a - b)] for b in carrier) for a in carrier)
            return FiniteAlgebra("BIHA", k, zero, one, meet, join, imp=impt, coimp=coim)
        bx = tuple(idx[frozenset(x for x in range(n) if fr.succ(x, fr.rel2) <= a)]
                   for a in carrier)
        return FiniteAlgebra("FRT", k, zero, one, meet, join, imp=impt, boxdot=bx)
    # modal kinds: powerset, element i is the bitmask i
    full = (1 << n) - 1
    meet = tuple(tuple(a & b for b in range(full + 1)) for a in range(full + 1))
    join = tuple(tuple(a | b for b in range(full + 1)) for a in range(full + 1))
    ngt = tuple(full ^ a for a in range(full + 1))

    def boxmask(a, rel):
        return sum(1 << x for x in range(n)
                   if all(not rel[x][y] or a >> y & 1 for y in range(n)))

    bx = tuple(boxmask(a, fr.rel) for a in range(full + 1))
    if fr.kind == "TENSE":
        dp = tuple(sum(1 << y for y in range(n)
                       if any(a >> x & 1 and fr.rel[x][y] for x in range(n)))
                   for a in range(full + 1))
        return FiniteAlgebra("TEN", full + 1, 0, full, meet, join,
                             neg=ngt, boxF=bx, diaP=dp)
    cls = "MAG" if fr.kind == "STRICT" else "MA"
    return FiniteAlgebra(cls, full + 1, 0, full, meet, join, neg=ngt, box=bx)


def dual_frame(alg):
    """Join-irreducibles (order classes) or atoms (modal classes) as points."""
    if alg.cls in ("HA", "BIHA", "FRT"):
        ji = alg_mod.join_irreducibles(alg)
        k = len(ji)
        # j below j' in the frame iff j' <= j in the lattice
        rel = tuple(tuple(1 if alg.leq(ji[jy], ji[jx]) else 0 for jy in range(k))
                    for jx in range(k))
        if alg.cls == "HA":
            return make_frame("POSET", rel)
        if alg.cls == "BIHA":
            return make_frame("BI", rel)
        return km_from_poset(rel)
    if alg.cls in ("MA", "MAG", "TEN"):
        ats = alg_mod.atoms_of(alg)
        k = len(ats)
        if alg.cls == "TEN":
            dia = tuple(alg.neg[alg.boxF[alg.neg[x]]] for x in alg.elements())
        else:
            dia = tuple(alg.neg[alg.box[alg.neg[x]]] for x in alg.elements())
        rel = tuple(tuple(1 if alg.leq(ats[x], dia[ats[y]]) else 0 for y in range(k))
                    for x in range(k))
        kind = {"MA": "PREORDER", "MAG": "STRICT", "TEN": "TENSE"}[alg.cls]
        return make_frame(kind, rel)
    raise AlgebraError(f"no dual frame for class {alg.cls}")


def beta(alg, fr=None):
    """The duality embedding: element -> point set of its dual frame.

    For order classes, a goes to the join-irreducibles below it; for modal
    classes, to the atoms below it.  Point indices follow dual_frame's order.
    """
    if alg.cls in ("HA", "BIHA", "FRT"):
        gens = alg_mod.join_irreducibles(alg)
    else:
        gens = alg_mod.atoms_of(alg)
    return tuple(frozenset(i for i, g in enumerate(gens) if alg.leq(g, x))
                 for x in alg.elements())
