"""Enumeration of finite frames up to isomorphism, and seeded random models.

Enumeration emits exactly one representative per isomorphism class, ordered
by the canonical (lexicographically minimal over all relabelings) relation
matrix.  Sizes are tiny, so canonicalization just minimizes over all n!
permutations.
"""

from __future__ import annotations

import itertools

from . import frames as fr_mod
from .frames import FiniteFrame, make_frame, FrameError

DEFAULT_SIZE_CAP = 6


def _flat(rel, n, perm):
    return tuple(rel[perm[x]][perm[y]] for x in range(n) for y in range(n))


def canonical_matrix(rel):
    """Lexicographically minimal flattened matrix over all permutations."""
    n = len(rel)
    return min(_flat(rel, n, p) for p in itertools.permutations(range(n)))


def _unflatten(flat, n):
    return tuple(tuple(flat[x * n + y] for y in range(n)) for x in range(n))


def _upper_triangular_posets(n):
    """Labeled posets whose labeling is a linear extension (relation matrix
    reflexive and supported on the upper triangle)."""
    pairs = [(x, y) for x in range(n) for y in range(x + 1, n)]
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        rel = [[1 if x == y else 0 for y in range(n)] for x in range(n)]
        for (x, y), b in zip(pairs, bits):
            rel[x][y] = b
        ok = True
        for x in range(n):
            for y in range(x + 1, n):
                if rel[x][y]:
                    for z in range(y + 1, n):
                        if rel[y][z] and not rel[x][z]:
                            ok = False
                            break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            yield tuple(tuple(r) for r in rel)


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def enumerate_frames(n, kind, cap=DEFAULT_SIZE_CAP):
    """One frame per isomorphism class, in canonical-matrix order."""
    if n < 1:
        raise FrameError("size must be at least 1")
    if n > cap:
        raise FrameError(f"size {n} exceeds the enumeration cap {cap}")
    seen = {}
    if kind == "POSET":
        for rel in _upper_triangular_posets(n):
            seen.setdefault(canonical_matrix(rel), None)
    elif kind == "STRICT":
        for rel in _upper_triangular_posets(n):
            strict = tuple(tuple(0 if x == y else rel[x][y] for y in range(n))
                           for x in range(n))
            seen.setdefault(canonical_matrix(strict), None)
    elif kind == "PREORDER":
        # a preorder is a partition into clusters plus a poset on the blocks
        for part in _set_partitions(list(range(n))):
            k = len(part)
            for prel in _upper_triangular_posets(k):
                blk = {x: i for i, block in enumerate(part) for x in block}
                rel = tuple(tuple(1 if prel[blk[x]][blk[y]] else 0 for y in range(n))
                            for x in range(n))
                seen.setdefault(canonical_matrix(rel), None)
    else:
        raise FrameError(f"cannot enumerate kind {kind!r}")
    return [make_frame(kind, _unflatten(flat, n)) for flat in sorted(seen)]


def enumerate_frames_upto(n, kind, cap=DEFAULT_SIZE_CAP):
    out = []
    for k in range(1, n + 1):
        out.extend(enumerate_frames(k, kind, cap))
    return out


# ---------------------------------------------------------------------------
# seeded pseudo-randomness
#
# Fixed 64-bit linear congruential generator so results reproduce across
# implementations:  state' = (6364136223846793005 * state + 1442695040888963407)
# mod 2^64, seeded with (seed XOR 0x9e3779b97f4a7c15) then stepped once; draws
# take the top 32 bits modulo the range.

_LCG_MULT = 6364136223846793005
_LCG_INC = 1442695040888963407
_LCG_MASK = (1 << 64) - 1


class Lcg:
    def __init__(self, seed):
        self.state = (seed ^ 0x9E3779B97F4A7C15) & _LCG_MASK
        self.next_raw()

    def next_raw(self):
        self.state = (_LCG_MULT * self.state + _LCG_INC) & _LCG_MASK
        return self.state

    def below(self, k):
        return (self.next_raw() >> 32) % k

    def choice(self, xs):
        return xs[self.below(len(xs))]


def random_model(alg, atoms, seed):
    """Deterministic valuation {0..atoms-1: element} from the fixed LCG."""
    if atoms < 1:
        raise ValueError("need at least one atom")
    rng = Lcg(seed)
    return {i: rng.below(alg.size) for i in range(atoms)}


def random_frame_model(fr, atoms, seed):
    """Frame-side variant; for order kinds the values are random upsets."""
    if atoms < 1:
        raise ValueError("need at least one atom")
    rng = Lcg(seed)
    if fr.kind in ("POSET", "BI", "KM"):
        pool = fr_mod.upsets(fr)
    else:
        pool = [frozenset(x for x in range(fr.size) if m >> x & 1)
                for m in range(1 << fr.size)]
    return {i: rng.choice(pool) for i in range(atoms)}
