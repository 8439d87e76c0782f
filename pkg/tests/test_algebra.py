import itertools

import pytest

from stablerules import algebra as alg
from stablerules import frames as fr
from stablerules import gen
from stablerules import syntax as sx
from stablerules.syntax import Sig


def si(t):
    return sx.parse_formula(t, Sig.SI)


def md(t):
    return sx.parse_formula(t, Sig.MD)


def mid(h3):
    return next(x for x in h3.elements() if x not in (h3.zero, h3.one))


# ---------------------------------------------------------------------------
# evaluation

def test_evaluate_h3_weak_excluded_middle(h3):
    a = mid(h3)
    # a -> 0 = 0 in the chain, so a | (a -> false) = a
    assert alg.evaluate(h3, {1: a}, si("p1 | (p1 -> false)")) == a


def test_evaluate_identity(h2):
    assert alg.evaluate(h2, {1: h2.one}, si("p1 -> p1")) == h2.one


def test_evaluate_cluster_box(c2):
    # box U = {z : R[z] subset U}; the total relation sends {x} to empty
    assert alg.evaluate(c2, {1: 1}, md("[]p1")) == c2.zero


def test_evaluate_errors(h3, c2):
    with pytest.raises(alg.EvaluationError):
        alg.evaluate(h3, {}, si("p1"))
    with pytest.raises(alg.EvaluationError):
        alg.evaluate(h3, {1: 0}, md("[]p1"))


# ---------------------------------------------------------------------------
# validity

def test_validates_wem(h2, h3):
    r = sx.parse_rule("/ p1 | (p1 -> false)", Sig.SI)
    assert alg.validates(h2, r).valid
    v = alg.validates(h3, r)
    assert not v.valid and v.witness == {1: mid(h3)}


def test_validates_reflexivity(h3, c2):
    r = sx.parse_rule("p1 / p1", Sig.SI)
    assert alg.validates(h3, r).valid
    assert alg.validates(c2, sx.parse_rule("p1 / p1", Sig.MD)).valid


def test_validates_atom_bound(h3):
    r = sx.parse_rule("/ p1 | p2 | p3", Sig.SI)
    with pytest.raises(alg.EvaluationError):
        alg.validates(h3, r, max_atoms=2)


# ---------------------------------------------------------------------------
# class checking

def test_check_class_h3(h3):
    assert alg.check_class(h3, "HA").ok


def test_check_class_cluster(c2):
    assert alg.check_class(c2, "S4").ok
    rep = alg.check_class(c2, "GRZ")
    assert not rep.ok and rep.failure == "GRZ inequality fails"


def test_check_class_magari(mag1):
    assert mag1.box == (1, 1)
    assert alg.check_class(mag1, "MAG").ok
    assert alg.check_class(mag1, "K4").ok


def test_check_class_reports_first_violation(h3):
    broken = alg.FiniteAlgebra("HA", 3, 0, 2, h3.meet, h3.join,
                               imp=tuple(tuple(0 for _ in range(3)) for _ in range(3)))
    rep = alg.check_class(broken, "HA")
    assert not rep.ok and rep.instance is not None


def test_loader_rejects_bad_tables(h3):
    blob = h3.to_json()
    blob["imp"] = [[0] * 3 for _ in range(3)]
    with pytest.raises(alg.AlgebraError):
        alg.from_json(blob)
    assert alg.from_json(h3.to_json()).imp == h3.imp


# ---------------------------------------------------------------------------
# sublattices and expansions

def test_generated_sublattice_examples(h3, b4):
    a = mid(h3)
    assert alg.generated_bounded_sublattice(h3, {a}) == (0, a, 2)
    assert alg.generated_bounded_sublattice(h3, set()) == (0, 2)
    atom = next(x for x in b4.elements()
                if x not in (b4.zero, b4.one))
    assert alg.generated_bounded_sublattice(b4, {atom}) == (b4.zero, atom, b4.one)


def test_heyting_expand_examples(h3, b4):
    a = mid(h3)
    assert h3.imp[a][h3.zero] == h3.zero
    for x in h3.elements():
        for y in h3.elements():
            if h3.leq(x, y):
                assert h3.imp[x][y] == h3.one
    for x in b4.elements():
        # x -> 0 is the complement in a Boolean lattice
        c = b4.imp[x][b4.zero]
        assert b4.meet[x][c] == b4.zero and b4.join[x][c] == b4.one


def test_heyting_expand_residuation_enumerated():
    # every bounded distributive lattice up to size 8 from poset duals
    lattices = []
    for n in range(1, 6):
        for f in gen.enumerate_frames(n, "POSET"):
            ha = fr.dual_algebra(f)
            if ha.size <= 8:
                lattices.append(ha)
    # include the 8-element chain (dual of the 7-chain, beyond the poset cap)
    rel7 = tuple(tuple(1 if i <= j else 0 for j in range(7)) for i in range(7))
    lattices.append(fr.dual_algebra(fr.make_frame("POSET", rel7)))
    assert any(l.size == 8 for l in lattices)
    for l in lattices:
        redone = alg.heyting_expand(
            alg.sub_lattice_algebra(l, tuple(l.elements())), "both")
        assert alg.check_class(redone, "BIHA").ok
        assert redone.imp == l.imp


def test_heyting_expand_rejects_nondistributive():
    # M3, the diamond: 0 < a,b,c < 1 pairwise incomparable
    n = 5
    meet = [[0] * n for _ in range(n)]
    join = [[0] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            if x == y:
                meet[x][y] = join[x][y] = x
            else:
                s = {x, y}
                meet[x][y] = x if x == 0 or y == 4 and x != 4 else (y if y == 0 or x == 4 else 0)
                join[x][y] = x if x == 4 or y == 0 and x != 0 else (y if y == 4 or x == 0 else 4)
    m3 = alg.FiniteAlgebra("DL", n, 0, 4, tuple(map(tuple, meet)), tuple(map(tuple, join)))
    with pytest.raises(alg.AlgebraError):
        alg.heyting_expand(m3, "imp")


def test_fronton_expand_examples(h2, h3):
    assert alg.fronton_expand(h2).boxdot == (h2.one, h2.one)
    a = mid(h3)
    frt = alg.fronton_expand(h3)
    assert frt.boxdot[h3.zero] == a
    assert frt.boxdot[a] == h3.one
    assert frt.boxdot[h3.one] == h3.one
    assert alg.check_class(frt, "FRT").ok


def test_fronton_expand_unique_up_to_4():
    for n in range(1, 5):
        for f in gen.enumerate_frames(n, "POSET"):
            frt = fr.dual_algebra(fr.km_from_poset(f.rel))
            ha = alg.FiniteAlgebra("HA", frt.size, frt.zero, frt.one,
                                   frt.meet, frt.join, imp=frt.imp)
            assert alg.fronton_expand(ha).boxdot == frt.boxdot


def test_free_boolean_extension_examples(h2, h3, b4):
    b, emb = alg.free_boolean_extension(h2)
    assert b.size == 2 and emb == (0, 1)
    b, emb = alg.free_boolean_extension(h3)
    assert b.size == 4
    assert len(set(emb)) == 3  # the three downsets of the 2-chain of irreducibles
    b, emb = alg.free_boolean_extension(b4)
    assert b.size == 4 and len(set(emb)) == 4


def test_free_boolean_extension_embedding_properties():
    for n in range(1, 5):
        for f in gen.enumerate_frames(n, "POSET"):
            ha = fr.dual_algebra(f)
            b, emb = alg.free_boolean_extension(ha)
            assert emb[ha.zero] == b.zero and emb[ha.one] == b.one
            for x in ha.elements():
                for y in ha.elements():
                    assert emb[ha.meet[x][y]] == b.meet[emb[x]][emb[y]]
                    assert emb[ha.join[x][y]] == b.join[emb[x]][emb[y]]
            assert len(set(emb)) == ha.size
            # the image generates the Boolean algebra
            closure = alg.generated_boolean_subalgebra(b, set(emb))
            assert len(closure) == b.size


def test_open_elements(c2, box_id4, mag1):
    assert alg.open_elements(c2) == (c2.zero, c2.one)
    assert alg.open_elements(box_id4) == tuple(box_id4.elements())
    assert alg.open_elements(mag1) == (0, 1)


def test_find_isomorphism_examples(h2, h3, c2, box_id4):
    relabel = alg.sub_lattice_algebra(h3, (0, 1, 2))
    relabeled = alg.heyting_expand(relabel, "imp")
    assert alg.find_isomorphism(h3, relabeled) is not None
    assert alg.find_isomorphism(h2, h3) is None
    assert alg.find_isomorphism(c2, box_id4) is None  # box tables differ at an atom


def test_isomorphism_respects_domains(h3):
    # used by rewrite dedup: same algebra, different domain images
    from stablerules.domains import DomainSpec
    d1 = DomainSpec.si(frozenset({(1, 0)}))
    for h in alg.isomorphisms(h3, h3):
        assert d1.mapped(h).variant == "SI"
