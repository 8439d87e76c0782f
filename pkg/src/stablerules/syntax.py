"""Formulas and multi-conclusion rules in the five signatures.

Signatures:

    si   ::=  p | false | true | f & g | f "|" g | f -> g
    bsi  ::=  si plus f -< g                     (coimplication)
    md   ::=  p | false | true | & | "|" | ~f | []f
    ten  ::=  p | false | true | & | "|" | ~f | [F]f | <P>f
    msi  ::=  si plus [x]f

Parser sugar (desugared at parse time, never printed):
    f -> g   in md/ten  =  ~f | g
    f <-> g             =  (f -> g) & (g -> f)   (per-signature ->)
    <>f      in md      =  ~[]~f
    <F>f     in ten     =  ~[F]~f
    [P]f     in ten     =  ~<P>~f
    ~f       in msi     =  f -> false

Formula equality is structural; no normalization is performed anywhere.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass


class Sig(enum.Enum):
    SI = "si"
    MD = "md"
    BSI = "bsi"
    TEN = "ten"
    MSI = "msi"


# node kinds licensed per signature
_LICENSED = {
    Sig.SI: {"var", "bot", "top", "and", "or", "imp"},
    Sig.BSI: {"var", "bot", "top", "and", "or", "imp", "coimp"},
    Sig.MD: {"var", "bot", "top", "and", "or", "neg", "box"},
    Sig.TEN: {"var", "bot", "top", "and", "or", "neg", "boxf", "diap"},
    Sig.MSI: {"var", "bot", "top", "and", "or", "imp", "boxdot"},
}

_ARITY = {
    "var": 0, "bot": 0, "top": 0,
    "neg": 1, "box": 1, "boxf": 1, "diap": 1, "boxdot": 1,
    "and": 2, "or": 2, "imp": 2, "coimp": 2,
}


class ParseError(ValueError):
    """Lexical or grammatical error; carries the offending position."""

    def __init__(self, message, pos):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class SignatureError(ValueError):
    pass


@dataclass(frozen=True)
class Formula:
    sig: Sig
    kind: str
    args: tuple = ()
    var: int | None = None

    def __post_init__(self):
        if self.kind not in _LICENSED[self.sig]:
            raise SignatureError(f"connective {self.kind!r} not licensed in {self.sig.value}")
        if len(self.args) != _ARITY[self.kind]:
            raise ValueError(f"{self.kind} expects {_ARITY[self.kind]} arguments")
        for a in self.args:
            if a.sig is not self.sig:
                raise SignatureError("mixed signatures in one formula")

    def __repr__(self):
        return f"<{self.sig.value}:{print_formula(self)}>"

    def atoms(self):
        """Set of atom indices occurring in the formula."""
        if self.kind == "var":
            return {self.var}
        out = set()
        for a in self.args:
            out |= a.atoms()
        return out

    def subformulas(self):
        """All subformulas including the formula itself."""
        out = {self}
        for a in self.args:
            out |= a.subformulas()
        return out


def var(i, sig):
    return Formula(sig, "var", var=i)


def bot(sig):
    return Formula(sig, "bot")


def top(sig):
    return Formula(sig, "top")


def conj(a, b):
    return Formula(a.sig, "and", (a, b))


def disj(a, b):
    return Formula(a.sig, "or", (a, b))


def imp(a, b):
    return Formula(a.sig, "imp", (a, b))


def coimp(a, b):
    return Formula(a.sig, "coimp", (a, b))


def neg(a):
    if a.sig is Sig.MSI:
        return imp(a, bot(Sig.MSI))
    return Formula(a.sig, "neg", (a,))


def box(a):
    return Formula(a.sig, "box", (a,))


def boxf(a):
    return Formula(a.sig, "boxf", (a,))


def diap(a):
    return Formula(a.sig, "diap", (a,))


def boxdot(a):
    return Formula(a.sig, "boxdot", (a,))


def material_imp(a, b):
    """The ->-form of the signature: primitive in si-like, ~a|b in md/ten."""
    if a.sig in (Sig.MD, Sig.TEN):
        return disj(neg(a), b)
    return imp(a, b)


def iff(a, b):
    return conj(material_imp(a, b), material_imp(b, a))


def boxplus(a):
    """[]a & a, the reflexivized box used over GL."""
    return conj(box(a), a)


@dataclass(frozen=True)
class Rule:
    """A multi-conclusion rule premises/conclusions; either side may be empty."""

    premises: tuple
    conclusions: tuple
    sig: Sig

    def __post_init__(self):
        for f in self.premises + self.conclusions:
            if f.sig is not self.sig:
                raise SignatureError("rule members must share the rule's signature")

    def __repr__(self):
        return f"<rule {print_rule(self)}>"

    def atoms(self):
        out = set()
        for f in self.premises + self.conclusions:
            out |= f.atoms()
        return out


def make_rule(premises, conclusions, sig):
    """Build a rule, deduplicating each side but preserving first-seen order."""
    prem = tuple(dict.fromkeys(premises))
    concl = tuple(dict.fromkeys(conclusions))
    return Rule(prem, concl, sig)


def subformula_closure(obj):
    """Smallest subformula-closed set containing the rule's (or formula's) members."""
    if isinstance(obj, Formula):
        return frozenset(obj.subformulas())
    out = set()
    for f in obj.premises + obj.conclusions:
        out |= f.subformulas()
    return frozenset(out)


def boxplus_subformulas(theta):
    """Elements f with []f & f (either operand order) in theta."""
    out = set()
    for g in theta:
        if g.kind != "and":
            continue
        l, r = g.args
        if l.kind == "box" and l.args[0] == r:
            out.add(r)
        if r.kind == "box" and r.args[0] == l:
            out.add(l)
    return out


def substitute(f, s):
    """Apply a substitution {atom index: Formula} homomorphically.

    Atoms outside the map are fixed.  Raises SignatureError if a replacement
    formula is in a different signature than f.
    """
    for g in s.values():
        if g.sig is not f.sig:
            raise SignatureError("substitution range must match the formula's signature")
    return _subst(f, s)


def _subst(f, s):
    if f.kind == "var":
        return s.get(f.var, f)
    if not f.args:
        return f
    return Formula(f.sig, f.kind, tuple(_subst(a, s) for a in f.args), f.var)


def substitute_rule(r, s):
    return make_rule([substitute(f, s) for f in r.premises],
                     [substitute(f, s) for f in r.conclusions], r.sig)


# ---------------------------------------------------------------------------
# lexer

_TOKENS = ("(", ")", ",", "/", "&", "|", "->", "-<", "<->",
           "~", "[]", "<>", "[F]", "<F>", "[P]", "<P>", "[x]")


def _lex(text):
    toks = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c == "p" and i + 1 < n and text[i + 1].isdigit():
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("atom", int(text[i + 1:j]), i))
            i = j
            continue
        if text.startswith("true", i):
            toks.append(("top", None, i))
            i += 4
            continue
        if text.startswith("false", i):
            toks.append(("bot", None, i))
            i += 5
            continue
        for t in ("<->", "->", "-<", "[F]", "<F>", "[P]", "<P>", "[x]", "[]", "<>"):
            if text.startswith(t, i):
                toks.append((t, None, i))
                i += len(t)
                break
        else:
            if c in "()~&|,/":
                toks.append((c, None, i))
                i += 1
            else:
                raise ParseError(f"unexpected character {c!r}", i)
    toks.append(("end", None, n))
    return toks


_UNARY = {
    "~": (Sig.MD, Sig.TEN, Sig.MSI),
    "[]": (Sig.MD,),
    "<>": (Sig.MD,),
    "[F]": (Sig.TEN,),
    "<F>": (Sig.TEN,),
    "[P]": (Sig.TEN,),
    "<P>": (Sig.TEN,),
    "[x]": (Sig.MSI,),
}

# binary precedence, tightest first: unary, &, |, -<, ->, <->
_BIN_PREC = {"&": 5, "|": 4, "-<": 3, "->": 2, "<->": 1}
_RIGHT_ASSOC = {"->", "<->"}


class _Parser:
    def __init__(self, toks, sig):
        self.toks = toks
        self.sig = sig
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expr(self, min_prec=1):
        lhs = self.unary()
        while True:
            kind, _, pos = self.peek()
            prec = _BIN_PREC.get(kind)
            if prec is None or prec < min_prec:
                return lhs
            self.next()
            rhs = self.expr(prec if kind in _RIGHT_ASSOC else prec + 1)
            lhs = self.binary(kind, lhs, rhs, pos)

    def binary(self, kind, a, b, pos):
        sig = self.sig
        if kind == "&":
            return conj(a, b)
        if kind == "|":
            return disj(a, b)
        if kind == "-<":
            if sig is not Sig.BSI:
                raise ParseError(f"'-<' not available in {sig.value}", pos)
            return coimp(a, b)
        if kind == "->":
            if sig in (Sig.MD, Sig.TEN):
                return disj(neg(a), b)
            return imp(a, b)
        if kind == "<->":
            return iff(a, b)
        raise AssertionError(kind)

    def unary(self):
        kind, val, pos = self.next()
        sig = self.sig
        if kind == "atom":
            return var(val, sig)
        if kind == "top":
            return top(sig)
        if kind == "bot":
            return bot(sig)
        if kind == "(":
            f = self.expr()
            k, _, p = self.next()
            if k != ")":
                raise ParseError("unbalanced parentheses", p)
            return f
        if kind in _UNARY:
            if sig not in _UNARY[kind]:
                raise ParseError(f"{kind!r} not available in {sig.value}", pos)
            arg = self.unary()
            if kind == "~":
                return neg(arg)
            if kind == "[]":
                return box(arg)
            if kind == "<>":
                return neg(box(neg(arg)))
            if kind == "[F]":
                return boxf(arg)
            if kind == "<F>":
                return neg(boxf(neg(arg)))
            if kind == "<P>":
                return diap(arg)
            if kind == "[P]":
                return neg(diap(neg(arg)))
            if kind == "[x]":
                return boxdot(arg)
        raise ParseError(f"unexpected token {kind!r}", pos)


def parse_formula(text, sig):
    """Parse an ASCII formula in the given signature."""
    p = _Parser(_lex(text), sig)
    f = p.expr()
    kind, _, pos = p.peek()
    if kind != "end":
        raise ParseError(f"trailing input {kind!r}", pos)
    return f


def parse_rule(text, sig):
    """Parse ``g1, g2 / d1, d2``; an empty side is written blank."""
    if text.count("/") != 1:
        raise ParseError("a rule needs exactly one '/'", text.find("/"))
    left, right = text.split("/")

    def side(s, offset):
        s = s.strip()
        if not s:
            return []
        return [parse_formula(part, sig) for part in s.split(",")]

    return make_rule(side(left, 0), side(right, 0), sig)


# ---------------------------------------------------------------------------
# printer

_PRINT_UNARY = {"neg": "~", "box": "[]", "boxf": "[F]", "diap": "<P>", "boxdot": "[x]"}
_PRINT_BIN = {"and": "&", "or": "|", "coimp": "-<", "imp": "->"}
_UNARY_PREC = 9


def _fmt(f, prec, side):
    if f.kind == "var":
        return f"p{f.var}"
    if f.kind == "bot":
        return "false"
    if f.kind == "top":
        return "true"
    if f.kind in _PRINT_UNARY:
        return _PRINT_UNARY[f.kind] + _fmt(f.args[0], _UNARY_PREC, "u")
    op = _PRINT_BIN[f.kind]
    p = _BIN_PREC[op]
    right_assoc = op in _RIGHT_ASSOC
    left = _fmt(f.args[0], p + 1 if right_assoc else p, "l")
    right = _fmt(f.args[1], p if right_assoc else p + 1, "r")
    s = f"{left} {op} {right}"
    if p < prec:
        return f"({s})"
    return s


def print_formula(f):
    """Render with minimal parentheses; parse_formula(print_formula(f)) == f."""
    return _fmt(f, 0, "t")


def print_rule(r):
    left = ", ".join(print_formula(f) for f in r.premises)
    right = ", ".join(print_formula(f) for f in r.conclusions)
    return f"{left} / {right}".strip()
