import pytest
from hypothesis import given, settings, strategies as st

from stablerules import syntax as sx
from stablerules.syntax import Sig


def si(text):
    return sx.parse_formula(text, Sig.SI)


def test_parse_imp():
    f = si("p1 -> p2")
    assert f.kind == "imp"
    assert f.args[0] == sx.var(1, Sig.SI)
    assert f.args[1] == sx.var(2, Sig.SI)


def test_parse_md_box_neg():
    f = sx.parse_formula("[]p1 & ~p2", Sig.MD)
    assert f == sx.conj(sx.box(sx.var(1, Sig.MD)), sx.neg(sx.var(2, Sig.MD)))


def test_parse_coimp():
    f = sx.parse_formula("p1 -< p2", Sig.BSI)
    assert f.kind == "coimp"


def test_precedence_and_associativity():
    # & binds before |, -< before ->, -> is right associative
    assert si("p1 & p2 | p3") == sx.disj(sx.conj(si("p1"), si("p2")), si("p3"))
    assert si("p1 -> p2 -> p3") == sx.imp(si("p1"), sx.imp(si("p2"), si("p3")))
    f = sx.parse_formula("p1 -< p2 -< p3", Sig.BSI)
    assert f.args[0].kind == "coimp"  # left associative
    g = sx.parse_formula("p1 -< p2 -> p3", Sig.BSI)
    assert g.kind == "imp" and g.args[0].kind == "coimp"


def test_sugar_desugars():
    assert sx.parse_formula("p1 -> p2", Sig.MD) == \
        sx.disj(sx.neg(sx.var(1, Sig.MD)), sx.var(2, Sig.MD))
    assert sx.parse_formula("<>p1", Sig.MD) == \
        sx.neg(sx.box(sx.neg(sx.var(1, Sig.MD))))
    assert si("p1 <-> p2") == sx.conj(si("p1 -> p2"), si("p2 -> p1"))
    # tense sugar
    assert sx.parse_formula("<F>p1", Sig.TEN).kind == "neg"
    assert sx.parse_formula("[P]p1", Sig.TEN).kind == "neg"
    # msi negation is an implication into bottom
    f = sx.parse_formula("~p1", Sig.MSI)
    assert f == sx.imp(sx.var(1, Sig.MSI), sx.bot(Sig.MSI))


def test_lexical_errors_carry_positions():
    with pytest.raises(sx.ParseError) as e:
        si("p1 -> $")
    assert e.value.pos == 6
    with pytest.raises(sx.ParseError):
        si("(p1 -> p2")
    with pytest.raises(sx.ParseError):
        si("p1 p2")


def test_unlicensed_connectives_rejected():
    with pytest.raises(sx.ParseError):
        si("~p1")  # no negation in si
    with pytest.raises(sx.ParseError):
        si("[]p1")
    with pytest.raises(sx.ParseError):
        sx.parse_formula("p1 -< p2", Sig.SI)
    with pytest.raises(sx.ParseError):
        sx.parse_formula("[F]p1", Sig.MD)
    with pytest.raises(sx.ParseError):
        sx.parse_formula("[x]p1", Sig.MD)


def test_print_examples():
    assert sx.print_formula(si("p1 -> p2")) == "p1 -> p2"
    assert sx.print_formula(sx.box(sx.var(1, Sig.MD))) == "[]p1"
    assert sx.print_formula(sx.boxdot(sx.var(1, Sig.MSI))) == "[x]p1"


def test_print_minimal_parens():
    f = sx.imp(si("p1 -> p2"), si("p3"))
    assert sx.print_formula(f) == "(p1 -> p2) -> p3"
    g = sx.disj(si("p1"), sx.disj(si("p2"), si("p3")))
    assert sx.print_formula(g) == "p1 | (p2 | p3)"
    assert sx.parse_formula(sx.print_formula(g), Sig.SI) == g


_LEAVES = {
    Sig.SI: [sx.bot, sx.top],
    Sig.BSI: [sx.bot, sx.top],
    Sig.MD: [sx.bot, sx.top],
    Sig.TEN: [sx.bot, sx.top],
    Sig.MSI: [sx.bot, sx.top],
}

_UNARY = {Sig.MD: [sx.neg, sx.box], Sig.TEN: [sx.neg, sx.boxf, sx.diap],
          Sig.MSI: [sx.boxdot], Sig.SI: [], Sig.BSI: []}
_BINARY = {Sig.SI: [sx.conj, sx.disj, sx.imp],
           Sig.BSI: [sx.conj, sx.disj, sx.imp, sx.coimp],
           Sig.MD: [sx.conj, sx.disj],
           Sig.TEN: [sx.conj, sx.disj],
           Sig.MSI: [sx.conj, sx.disj, sx.imp]}


def formulas(sig):
    leaf = st.one_of(
        st.integers(min_value=0, max_value=9).map(lambda i: sx.var(i, sig)),
        st.sampled_from([f(sig) for f in _LEAVES[sig]]))

    def extend(children):
        ops = []
        for u in _UNARY[sig]:
            ops.append(children.map(u))
        for b in _BINARY[sig]:
            ops.append(st.tuples(children, children).map(lambda ab, b=b: b(*ab)))
        return st.one_of(ops)

    return st.recursive(leaf, extend, max_leaves=12)


@settings(max_examples=120, deadline=None)
@given(st.sampled_from(list(Sig)).flatmap(lambda s: formulas(s)))
def test_round_trip(f):
    assert sx.parse_formula(sx.print_formula(f), f.sig) == f


@settings(max_examples=60, deadline=None)
@given(formulas(Sig.SI), formulas(Sig.SI))
def test_substitute_homomorphic(f, g):
    s = {0: g}
    out = sx.substitute(f, s)
    if f.kind == "imp":
        assert out.kind == "imp"
        assert out.args[0] == sx.substitute(f.args[0], s)


def test_substitute_examples():
    f = si("p1 -> p1")
    s = {1: si("p2 & p3")}
    assert sx.substitute(f, s) == si("(p2 & p3) -> (p2 & p3)")
    assert sx.substitute(f, {}) == f
    g = sx.parse_formula("[x]p1", Sig.MSI)
    assert sx.substitute(g, {1: sx.bot(Sig.MSI)}) == \
        sx.boxdot(sx.bot(Sig.MSI))


def test_substitute_signature_mismatch():
    with pytest.raises(sx.SignatureError):
        sx.substitute(si("p1"), {1: sx.parse_formula("p1", Sig.MD)})


def test_substitution_identity_on_untouched_atoms():
    f = si("p1 -> p2")
    assert sx.substitute(f, {3: si("p4")}) == f


def test_rule_parse_and_atoms():
    r = sx.parse_rule("p1, p1 -> p2 / p2", Sig.SI)
    assert len(r.premises) == 2 and len(r.conclusions) == 1
    assert r.atoms() == {1, 2}
    empty_left = sx.parse_rule("/ p1", Sig.SI)
    assert empty_left.premises == ()
    empty_right = sx.parse_rule("p1 /", Sig.SI)
    assert empty_right.conclusions == ()
    with pytest.raises(sx.ParseError):
        sx.parse_rule("p1 / p2 / p3", Sig.SI)


def test_rule_dedup_preserves_order():
    r = sx.make_rule([si("p1"), si("p2"), si("p1")], [si("p1")], Sig.SI)
    assert r.premises == (si("p1"), si("p2"))


def test_subformula_closure_examples():
    r = sx.parse_rule("/ p1 | (p1 -> false)", Sig.SI)
    assert sx.subformula_closure(r) == frozenset(
        {si("p1 | (p1 -> false)"), si("p1"), si("p1 -> false"), sx.bot(Sig.SI)})
    assert sx.subformula_closure(sx.parse_rule("/ p1", Sig.SI)) == frozenset({si("p1")})
    r2 = sx.parse_rule("/ []p1", Sig.MD)
    assert sx.subformula_closure(r2) == frozenset(
        {sx.box(sx.var(1, Sig.MD)), sx.var(1, Sig.MD)})


def test_boxplus_subformulas():
    f = sx.parse_formula("[]p1 & p1", Sig.MD)
    theta = f.subformulas()
    assert sx.boxplus_subformulas(theta) == {sx.var(1, Sig.MD)}
    g = sx.parse_formula("p1 & []p1", Sig.MD)  # either operand order counts
    assert sx.boxplus_subformulas(g.subformulas()) == {sx.var(1, Sig.MD)}
