"""Finite algebras: evaluation, validity, class checks, expansions, extensions.

Carriers are 0..n-1 with explicit operation tables; the lattice order is
derived from meet (x <= y iff meet[x][y] == x).  Class tags:

    DL    bounded distributive lattice (no implication table)
    HA    Heyting algebra                       (imp)
    BIHA  bi-Heyting algebra                    (imp, coimp)
    MA    modal algebra over a Boolean reduct   (neg, box)
    TEN   tense algebra                         (neg, boxF, diaP)
    FRT   fronton                               (imp, boxdot)
    MAG   Magari algebra                        (neg, box)

check_class also accepts the axiom-class names BOOL, K4, S4, GRZ and GRZ_T,
which add (in)equations on top of the structural classes above.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .syntax import Sig, Formula, Rule

DEFAULT_MAX_ATOMS = 8

# tables required per class tag
_TABLES = {
    "DL": (),
    "HA": ("imp",),
    "BIHA": ("imp", "coimp"),
    "MA": ("neg", "box"),
    "TEN": ("neg", "boxF", "diaP"),
    "FRT": ("imp", "boxdot"),
    "MAG": ("neg", "box"),
}


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteAlgebra:
    cls: str
    size: int
    zero: int
    one: int
    meet: tuple
    join: tuple
    imp: tuple | None = None
    coimp: tuple | None = None
    neg: tuple | None = None
    box: tuple | None = None
    boxF: tuple | None = None
    diaP: tuple | None = None
    boxdot: tuple | None = None

    def __post_init__(self):
        if self.cls not in _TABLES:
            raise AlgebraError(f"unknown algebra class {self.cls!r}")
        for t in _TABLES[self.cls]:
            if getattr(self, t) is None:
                raise AlgebraError(f"class {self.cls} needs a {t} table")

    def __repr__(self):
        return f"<{self.cls} algebra, {self.size} elements>"

    def leq(self, x, y):
        return self.meet[x][y] == x

    def elements(self):
        return range(self.size)

    def join_all(self, xs):
        out = self.zero
        for x in xs:
            out = self.join[out][x]
        return out

    def meet_all(self, xs):
        out = self.one
        for x in xs:
            out = self.meet[out][x]
        return out

    def boxplus(self, x):
        return self.meet[self.box[x]][x]

    def to_json(self):
        d = {"class": self.cls, "size": self.size, "zero": self.zero, "one": self.one,
             "meet": [list(r) for r in self.meet], "join": [list(r) for r in self.join]}
        for t in ("imp", "coimp", "neg", "box", "boxF", "diaP", "boxdot"):
            v = getattr(self, t)
            if v is not None:
                d[t] = [list(r) for r in v] if isinstance(v[0], tuple) else list(v)
        return d


def _table2(rows):
    return tuple(tuple(r) for r in rows)


def _table1(row):
    return tuple(row)


def from_json(d, check=True):
    """Load an algebra from its JSON dict; rejects files failing check_class."""
    kw = {}
    for t in ("imp", "coimp"):
        if t in d:
            kw[t] = _table2(d[t])
    for t in ("neg", "box", "boxF", "diaP", "boxdot"):
        if t in d:
            kw[t] = _table1(d[t])
    alg = FiniteAlgebra(d["class"], d["size"], d["zero"], d["one"],
                        _table2(d["meet"]), _table2(d["join"]), **kw)
    if check:
        rep = check_class(alg, alg.cls)
        if not rep.ok:
            raise AlgebraError(f"algebra fails {alg.cls} axioms: {rep.failure}")
    return alg


# ---------------------------------------------------------------------------
# evaluation and validity

class EvaluationError(ValueError):
    pass


# formula kind -> (table attribute, arity)
_EVAL = {
    "and": ("meet", 2), "or": ("join", 2), "imp": ("imp", 2), "coimp": ("coimp", 2),
    "neg": ("neg", 1), "box": ("box", 1), "boxf": ("boxF", 1), "diap": ("diaP", 1),
    "boxdot": ("boxdot", 1),
}


def evaluate(alg, valuation, f):
    """Bottom-up table evaluation of f under {atom: element}."""
    if f.kind == "var":
        if f.var not in valuation:
            raise EvaluationError(f"no assignment for atom p{f.var}")
        return valuation[f.var]
    if f.kind == "bot":
        return alg.zero
    if f.kind == "top":
        return alg.one
    table_name, arity = _EVAL[f.kind]
    table = getattr(alg, table_name)
    if table is None:
        raise EvaluationError(f"connective {f.kind!r} unsupported by class {alg.cls}")
    if arity == 1:
        return table[evaluate(alg, valuation, f.args[0])]
    return table[evaluate(alg, valuation, f.args[0])][evaluate(alg, valuation, f.args[1])]


@dataclass(frozen=True)
class Verdict:
    valid: bool
    witness: dict | None = None

    def __bool__(self):
        return self.valid


def model_refutes(alg, valuation, rule):
    """True when the given valuation makes all premises 1 and no conclusion 1."""
    one = alg.one
    return (all(evaluate(alg, valuation, g) == one for g in rule.premises)
            and all(evaluate(alg, valuation, d) != one for d in rule.conclusions))


def validates(alg, rule, max_atoms=DEFAULT_MAX_ATOMS):
    """Exhaustive search over all |carrier|^|atoms| valuations.

    Returns Verdict(valid=True) or Verdict(False, witness) where the witness
    valuation makes every premise 1 and every conclusion != 1.
    """
    atoms = sorted(rule.atoms())
    if len(atoms) > max_atoms:
        raise EvaluationError(f"{len(atoms)} atoms exceeds the exhaustion bound {max_atoms}")
    one = alg.one
    for combo in itertools.product(alg.elements(), repeat=len(atoms)):
        v = dict(zip(atoms, combo))
        if all(evaluate(alg, v, g) == one for g in rule.premises):
            if all(evaluate(alg, v, d) != one for d in rule.conclusions):
                return Verdict(False, v)
    return Verdict(True)


def refuting_valuations(alg, rule, max_atoms=DEFAULT_MAX_ATOMS):
    """All refuting valuations, in deterministic order."""
    atoms = sorted(rule.atoms())
    if len(atoms) > max_atoms:
        raise EvaluationError(f"{len(atoms)} atoms exceeds the exhaustion bound {max_atoms}")
    out = []
    one = alg.one
    for combo in itertools.product(alg.elements(), repeat=len(atoms)):
        v = dict(zip(atoms, combo))
        if all(evaluate(alg, v, g) == one for g in rule.premises):
            if all(evaluate(alg, v, d) != one for d in rule.conclusions):
                out.append(v)
    return out


# ---------------------------------------------------------------------------
# class checking

@dataclass(frozen=True)
class ClassReport:
    ok: bool
    cls: str
    failure: str | None = None
    instance: tuple | None = None

    def __bool__(self):
        return self.ok


def _fail(cls, what, inst):
    return ClassReport(False, cls, what, inst)


def _check_lattice(a):
    n, m, j = a.size, a.meet, a.join
    for x in range(n):
        if m[x][x] != x:
            return _fail("DL", "meet not idempotent", (x,))
        if j[x][x] != x:
            return _fail("DL", "join not idempotent", (x,))
        if m[a.zero][x] != a.zero or j[a.one][x] != a.one:
            return _fail("DL", "bounds not absorbing", (x,))
        if j[a.zero][x] != x or m[a.one][x] != x:
            return _fail("DL", "bounds not neutral", (x,))
    for x in range(n):
        for y in range(n):
            if m[x][y] != m[y][x]:
                return _fail("DL", "meet not commutative", (x, y))
            if j[x][y] != j[y][x]:
                return _fail("DL", "join not commutative", (x, y))
            if m[x][j[x][y]] != x or j[x][m[x][y]] != x:
                return _fail("DL", "absorption fails", (x, y))
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if m[m[x][y]][z] != m[x][m[y][z]]:
                    return _fail("DL", "meet not associative", (x, y, z))
                if j[j[x][y]][z] != j[x][j[y][z]]:
                    return _fail("DL", "join not associative", (x, y, z))
                if m[x][j[y][z]] != j[m[x][y]][m[x][z]]:
                    return _fail("DL", "not distributive", (x, y, z))
    return ClassReport(True, "DL")


def _check_residuation(a):
    n = a.size
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if a.leq(z, a.imp[x][y]) != a.leq(a.meet[x][z], y):
                    return _fail("HA", "residuation fails", (x, y, z))
    return ClassReport(True, "HA")


def _check_coresiduation(a):
    n = a.size
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if a.leq(a.coimp[x][y], z) != a.leq(x, a.join[y][z]):
                    return _fail("BIHA", "co-residuation fails", (x, y, z))
    return ClassReport(True, "BIHA")


def _check_boolean(a):
    for x in range(a.size):
        if a.meet[x][a.neg[x]] != a.zero or a.join[x][a.neg[x]] != a.one:
            return _fail("BOOL", "neg is not a complement", (x,))
    return ClassReport(True, "BOOL")


def _check_box_normal(a, table, name):
    if table[a.one] != a.one:
        return _fail("MA", f"{name} 1 != 1", (a.one,))
    for x in range(a.size):
        for y in range(a.size):
            if table[a.meet[x][y]] != a.meet[table[x]][table[y]]:
                return _fail("MA", f"{name} not multiplicative", (x, y))
    return ClassReport(True, "MA")


def _mat_imp(a, x, y):
    # material implication in a Boolean reduct
    return a.join[a.neg[x]][y]


def check_class(alg, cls):
    """Check every defining (in)equation of cls; report the first violation."""
    a = alg
    base = _check_lattice(a)
    if not base:
        return base
    if cls == "DL":
        return ClassReport(True, cls)
    if cls in ("HA", "BIHA", "FRT"):
        r = _check_residuation(a)
        if not r:
            return r
        if cls == "HA":
            return ClassReport(True, cls)
        if cls == "BIHA":
            r = _check_coresiduation(a)
            return r if not r else ClassReport(True, cls)
        # FRT: fronton axioms on boxdot
        bx = a.boxdot
        if bx[a.one] != a.one:
            return _fail(cls, "boxdot 1 != 1", (a.one,))
        for x in range(a.size):
            for y in range(a.size):
                if bx[a.meet[x][y]] != a.meet[bx[x]][bx[y]]:
                    return _fail(cls, "boxdot not multiplicative", (x, y))
        for x in range(a.size):
            if not a.leq(x, bx[x]):
                return _fail(cls, "a <= boxdot a fails", (x,))
            if a.imp[bx[x]][x] != x:
                return _fail(cls, "boxdot a -> a = a fails", (x,))
        for x in range(a.size):
            for y in range(a.size):
                if not a.leq(bx[x], a.join[y][a.imp[y][x]]):
                    return _fail(cls, "boxdot a <= b or (b -> a) fails", (x, y))
        return ClassReport(True, cls)
    if cls in ("BOOL", "MA", "K4", "S4", "GRZ", "MAG"):
        r = _check_boolean(a)
        if not r:
            return r
        if cls == "BOOL":
            return ClassReport(True, cls)
        r = _check_box_normal(a, a.box, "box")
        if not r:
            return r
        if cls == "MA":
            return ClassReport(True, cls)
        if cls == "MAG":
            for x in range(a.size):
                if a.box[_mat_imp(a, a.box[x], x)] != a.box[x]:
                    return _fail(cls, "box(box a -> a) = box a fails", (x,))
            return ClassReport(True, cls)
        # transitivity axiom: box a <= box box a
        for x in range(a.size):
            if not a.leq(a.box[x], a.box[a.box[x]]):
                return _fail(cls, "box a <= box box a fails", (x,))
        if cls == "K4":
            return ClassReport(True, cls)
        for x in range(a.size):
            if not a.leq(a.box[x], x):
                return _fail(cls, "box a <= a fails", (x,))
        if cls == "S4":
            return ClassReport(True, cls)
        # GRZ inequality: box(box(a -> box a) -> a) <= a
        for x in range(a.size):
            lhs = a.box[_mat_imp(a, a.box[_mat_imp(a, x, a.box[x])], x)]
            if not a.leq(lhs, x):
                return _fail(cls, "GRZ inequality fails", (x,))
        return ClassReport(True, cls)
    if cls in ("TEN", "GRZ_T"):
        r = _check_boolean(a)
        if not r:
            return r
        r = _check_box_normal(a, a.boxF, "boxF")
        if not r:
            return r
        bF, dP = a.boxF, a.diaP
        if dP[a.zero] != a.zero:
            return _fail(cls, "diaP 0 != 0", (a.zero,))
        for x in range(a.size):
            for y in range(a.size):
                if dP[a.join[x][y]] != a.join[dP[x]][dP[y]]:
                    return _fail(cls, "diaP not additive", (x, y))
        for x in range(a.size):
            if not a.leq(bF[x], x) or not a.leq(bF[x], bF[bF[x]]):
                return _fail(cls, "boxF not S4", (x,))
            if not a.leq(x, dP[x]) or not a.leq(dP[dP[x]], dP[x]):
                return _fail(cls, "diaP not S4", (x,))
        for x in range(a.size):
            for y in range(a.size):
                if a.leq(dP[x], y) != a.leq(x, bF[y]):
                    return _fail(cls, "residual pair fails", (x, y))
        if cls == "TEN":
            return ClassReport(True, cls)
        for x in range(a.size):
            lhs = bF[_mat_imp(a, bF[_mat_imp(a, x, bF[x])], x)]
            if not a.leq(lhs, x):
                return _fail(cls, "GRZ inequality for boxF fails", (x,))
            # a <= diaP(a & ~diaP(diaP a & ~a))
            rhs = dP[a.meet[x][a.neg[dP[a.meet[dP[x]][a.neg[x]]]]]]
            if not a.leq(x, rhs):
                return _fail(cls, "GRZ inequality for diaP fails", (x,))
        return ClassReport(True, cls)
    raise AlgebraError(f"unknown class {cls!r}")


# ---------------------------------------------------------------------------
# sublattices and expansions

def generated_bounded_sublattice(alg, seed):
    """Least subset containing seed and the bounds, closed under meet and join.

    Returns a sorted tuple of carrier elements (the inclusion map new->old).
    """
    cur = set(seed) | {alg.zero, alg.one}
    while True:
        new = set()
        for x in cur:
            for y in cur:
                new.add(alg.meet[x][y])
                new.add(alg.join[x][y])
        if new <= cur:
            return tuple(sorted(cur))
        cur |= new


def generated_boolean_subalgebra(alg, seed):
    """Closure of seed under meet, join and neg, with the bounds."""
    cur = set(seed) | {alg.zero, alg.one}
    while True:
        new = {alg.neg[x] for x in cur}
        for x in cur:
            for y in cur:
                new.add(alg.meet[x][y])
                new.add(alg.join[x][y])
        if new <= cur:
            return tuple(sorted(cur))
        cur |= new


def sub_lattice_algebra(alg, carrier, cls="DL", **extra_tables):
    """Reindex a sub-carrier as a fresh algebra; carrier must be closed."""
    idx = {old: i for i, old in enumerate(carrier)}
    n = len(carrier)
    meet = tuple(tuple(idx[alg.meet[x][y]] for y in carrier) for x in carrier)
    join = tuple(tuple(idx[alg.join[x][y]] for y in carrier) for x in carrier)
    return FiniteAlgebra(cls, n, idx[alg.zero], idx[alg.one], meet, join, **extra_tables)


def heyting_expand(alg, mode="imp"):
    """Add residuated implication and/or coimplication tables to a finite DL.

    imp:   a -> b = join of all c with a & c <= b
    coimp: a <- b = meet of all c with a <= b | c
    """
    if not _check_lattice(alg):
        raise AlgebraError("input is not a bounded distributive lattice")
    n = alg.size
    kw = {}
    if mode in ("imp", "both"):
        kw["imp"] = tuple(
            tuple(alg.join_all(c for c in range(n) if alg.leq(alg.meet[x][c], y))
                  for y in range(n))
            for x in range(n))
    if mode in ("coimp", "both"):
        kw["coimp"] = tuple(
            tuple(alg.meet_all(c for c in range(n) if alg.leq(x, alg.join[y][c]))
                  for y in range(n))
            for x in range(n))
    cls = {"imp": "HA", "coimp": "BIHA", "both": "BIHA"}[mode]
    if mode == "coimp" and alg.imp is None:
        raise AlgebraError("coimp mode expects an existing imp table")
    return FiniteAlgebra(cls, n, alg.zero, alg.one, alg.meet, alg.join,
                         imp=kw.get("imp", alg.imp), coimp=kw.get("coimp"))


def fronton_expand(ha):
    """The unique fronton expansion of a finite Heyting algebra.

    boxdot a = meet over b of b | (b -> a).
    """
    n = ha.size
    bx = tuple(ha.meet_all(ha.join[b][ha.imp[b][x]] for b in range(n)) for x in range(n))
    return FiniteAlgebra("FRT", n, ha.zero, ha.one, ha.meet, ha.join,
                         imp=ha.imp, boxdot=bx)


def join_irreducibles(alg):
    """Elements x != 0 that are not the join of the elements strictly below."""
    out = []
    for x in alg.elements():
        if x == alg.zero:
            continue
        below = [y for y in alg.elements() if alg.leq(y, x) and y != x]
        if alg.join_all(below) != x:
            out.append(x)
    return tuple(out)


def atoms_of(alg):
    """Minimal nonzero elements (the atoms of a Boolean reduct)."""
    out = []
    for x in alg.elements():
        if x == alg.zero:
            continue
        if all(y == alg.zero or y == x or not alg.leq(y, x) for y in alg.elements()):
            out.append(x)
    return tuple(out)


def boolean_algebra_of_subsets(k):
    """The powerset algebra on k generators; element i is the bitmask i."""
    n = 1 << k
    full = n - 1
    meet = tuple(tuple(x & y for y in range(n)) for x in range(n))
    join = tuple(tuple(x | y for y in range(n)) for x in range(n))
    ngt = tuple(full ^ x for x in range(n))
    return FiniteAlgebra("DL", n, 0, full, meet, join, neg=ngt)


def free_boolean_extension(alg):
    """Free Boolean extension of a finite bounded distributive lattice.

    Returns (powerset algebra over the join-irreducibles, embedding) where the
    embedding sends a to the set of join-irreducibles below a, as a bitmask.
    """
    if not _check_lattice(alg):
        raise AlgebraError("input is not a bounded distributive lattice")
    ji = join_irreducibles(alg)
    b = boolean_algebra_of_subsets(len(ji))
    emb = []
    for x in alg.elements():
        mask = 0
        for i, j in enumerate(ji):
            if alg.leq(j, x):
                mask |= 1 << i
        emb.append(mask)
    return b, tuple(emb)


def open_elements(alg):
    """Fixpoints of box (boxF for TEN); for MAG, fixpoints of box+ = box & id."""
    if alg.cls == "TEN":
        return tuple(x for x in alg.elements() if alg.boxF[x] == x)
    if alg.cls == "MAG":
        return tuple(x for x in alg.elements() if alg.boxplus(x) == x)
    return tuple(x for x in alg.elements() if alg.box[x] == x)


# ---------------------------------------------------------------------------
# isomorphism search

def _unary_tables(alg):
    return [getattr(alg, name) for name in ("neg", "box", "boxF", "diaP", "boxdot")
            if getattr(alg, name) is not None]


def _color_refine(alg):
    """Weisfeiler-Leman style colors from the tables; isomorphism invariant."""
    n = alg.size
    unary = _unary_tables(alg)
    col = [( x == alg.zero, x == alg.one,
             sum(alg.leq(y, x) for y in range(n)),
             sum(alg.leq(x, y) for y in range(n)))
           for x in range(n)]
    for _ in range(3):
        sig = []
        for x in range(n):
            row = (col[x],
                   tuple(sorted((col[alg.meet[x][y]], col[y]) for y in range(n))),
                   tuple(sorted((col[alg.join[x][y]], col[y]) for y in range(n))),
                   tuple(col[t[x]] for t in unary))
            sig.append(row)
        ranks = {s: i for i, s in enumerate(sorted(set(sig), key=repr))}
        new = [ranks[s] for s in sig]
        if new == col:
            break
        col = new
    return col


def isomorphisms(a, b, extra_a=(), extra_b=()):
    """Yield all bijections commuting with every table of a and b.

    extra_a/extra_b are parallel tuples of unary tables that must also commute
    (used to match domain data alongside the algebra structure).
    """
    if a.cls != b.cls or a.size != b.size:
        return
    n = a.size
    ca, cb = _color_refine(a), _color_refine(b)
    if sorted(ca) != sorted(cb):
        return
    tables_a = [("meet", a.meet), ("join", a.join)]
    tables_b = {"meet": b.meet, "join": b.join}
    unary_a = [(name, getattr(a, name)) for name in ("neg", "box", "boxF", "diaP", "boxdot")
               if getattr(a, name) is not None]
    unary_b = {name: getattr(b, name) for name, _ in unary_a}
    bina = [(name, getattr(a, name)) for name in ("imp", "coimp") if getattr(a, name) is not None]
    binb = {name: getattr(b, name) for name, _ in bina}

    h = [None] * n
    used = [False] * n

    def ok(x, y):
        if ca[x] != cb[y]:
            return False
        for z in range(n):
            w = h[z]
            if w is None:
                continue
            for name, t in tables_a + bina:
                tb = tables_b.get(name) or binb[name]
                if h[t[x][z]] is not None and h[t[x][z]] != tb[y][w]:
                    return False
                if h[t[z][x]] is not None and h[t[z][x]] != tb[w][y]:
                    return False
        for name, t in unary_a:
            if h[t[x]] is not None and h[t[x]] != unary_b[name][y]:
                return False
        return True

    def bt(x):
        if x == n:
            # full verification before yielding
            for name, t in tables_a + bina:
                tb = tables_b.get(name) or binb[name]
                for i in range(n):
                    for j in range(n):
                        if h[t[i][j]] != tb[h[i]][h[j]]:
                            return
            for name, t in unary_a:
                for i in range(n):
                    if h[t[i]] != unary_b[name][h[i]]:
                        return
            yield tuple(h)
            return
        for y in range(n):
            if not used[y] and ok(x, y):
                h[x] = y
                used[y] = True
                yield from bt(x + 1)
                h[x] = None
                used[y] = False

    yield from bt(0)


def find_isomorphism(a, b):
    """A bijection commuting with all tables, or None."""
    for h in isomorphisms(a, b):
        return h
    return None
