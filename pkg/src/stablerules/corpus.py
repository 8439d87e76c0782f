"""Fixed rule corpora used by the lemma-checking and rewrite suites.

Each corpus holds 20 rules in its signature, mixing valid and refutable
ones, with at most two atoms and |Sfor| <= 5 so that bounded rewriting at
size 6 covers the refutation patterns of the small-frame targets.
"""

from .syntax import Sig, parse_rule

_SI = [
    "p1 / p1",
    "/ p1 -> p1",
    "/ false -> p1",
    "/ p1 -> true",
    "p1, p2 / p1 & p2",
    "p1 & p2 / p1",
    "p1 / p1 | p2",
    "p1, p1 -> p2 / p2",
    "p1 -> p2, p2 -> p1 / p1",
    "/ p1 | (p1 -> false)",
    "/ ((p1 -> p2) -> p1) -> p1",
    "/ (p1 -> p2) | (p2 -> p1)",
    "/ ((p1 -> false) -> false) -> p1",
    "(p1 -> false) -> false / p1",
    "p1 | p2 / p1, p2",
    "/ p1",
    "/ p1 -> (p2 -> p1)",
    "p1 -> p2 / p1, p2",
    "/ (p1 -> false) | ((p1 -> false) -> false)",
    "p1 | (p1 -> false) / p1, p1 -> false",
]

_MD = [
    "p1 / p1",
    "/ []p1 -> p1",
    "/ p1 -> []p1",
    "/ []p1 -> [][]p1",
    "/ [][]p1 -> []p1",
    "p1 / []p1",
    "[]p1 / p1",
    "[]p1 / [][]p1",
    "[][]p1 / []p1",
    "/ p1 | ~p1",
    "/ ~(p1 & ~p1)",
    "/ ~[]false",
    "~[]p1 / ~p1",
    "<>p1 / p1",
    "p1 / <>p1",
    "/ []p1 | ~[]p1",
    "/ ~[]p1, []p1",
    "[]p1, []p2 / p1 & p2",
    "/ p1 | ~p2",
    "[]([]p1 -> p1) / []p1",
]

_BSI = [
    "p1 / p1",
    "/ p1 -> p1",
    "/ p1 | (p1 -> false)",
    "/ ((p1 -> p2) -> p1) -> p1",
    "/ (p1 -> p2) | (p2 -> p1)",
    "(p1 -> false) -> false / p1",
    "p1 | p2 / p1, p2",
    "/ p1 -> (p2 -> p1)",
    "p1, p1 -> p2 / p2",
    "/ p1",
    "/ (p1 -< p2) -> p1",
    "/ p1 -< p1",
    "p1 / p2 | (p1 -< p2)",
    "p1 -< p2 / p1",
    "/ p1 -> (p2 | (p2 -< p1))",
    "/ ((p1 | p2) -< p1) -> p2",
    "p1 -< p2 / p2 -< p1",
    "/ (p1 -< p2) | (p2 -> p1)",
    "p2 / p1 | (p2 -< p1)",
    "(p1 -< p2) -< p1 / false",
]

_TEN = [
    "p1 / p1",
    "/ [F]p1 -> p1",
    "/ p1 -> [F]p1",
    "/ [F]p1 -> [F][F]p1",
    "p1 / [F]p1",
    "[F]p1 / p1",
    "/ p1 -> <P>p1",
    "<P>p1 / p1",
    "/ <P><P>p1 -> <P>p1",
    "/ p1 -> [F]<P>p1",
    "/ <P>[F]p1 -> p1",
    "p1 / <P>p1",
    "<P>p1 / <P><P>p1",
    "/ p1 | ~p1",
    "/ ~[F]false",
    "/ <P>p1 | ~p1",
    "~[F]p1 / ~p1",
    "[F]p1, [F]p2 / p1 & p2",
    "/ [F]p1 | ~[F]p1",
    "<P>p1 / p1, <P>false",
]

_MSI = [
    "p1 / p1",
    "/ p1 -> p1",
    "/ p1 | (p1 -> false)",
    "/ ((p1 -> p2) -> p1) -> p1",
    "/ (p1 -> p2) | (p2 -> p1)",
    "(p1 -> false) -> false / p1",
    "p1 | p2 / p1, p2",
    "/ p1 -> (p2 -> p1)",
    "p1, p1 -> p2 / p2",
    "/ p1",
    "/ p1 -> [x]p1",
    "/ [x]p1 -> p1",
    "[x]p1 / p1",
    "p1 / [x]p1",
    "/ ([x]p1 -> p1) -> p1",
    "/ [x]false",
    "[x]p1 / [x][x]p1",
    "/ [x]p1 -> [x][x]p1",
    "[x]p1 / p1, [x]false",
    "/ [x]p1 | (p1 -> false)",
]


# Over Magari targets, deep box nesting needs refutation patterns beyond the
# fixed bound, so the GL corpus swaps those two rules for Loeb-flavoured ones.
_GL = [s for s in _MD if s not in ("/ [][]p1 -> []p1", "[][]p1 / []p1")] + [
    "p1 | []false / p1",
    "[]false / false",
]


def _load(strings, sig):
    return tuple(parse_rule(s, sig) for s in strings)


CORPUS = {
    Sig.SI: _load(_SI, Sig.SI),
    Sig.MD: _load(_MD, Sig.MD),
    Sig.BSI: _load(_BSI, Sig.BSI),
    Sig.TEN: _load(_TEN, Sig.TEN),
    Sig.MSI: _load(_MSI, Sig.MSI),
}

CORPUS_GL = _load(_GL, Sig.MD)
