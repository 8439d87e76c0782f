import pytest

from stablerules import algebra as alg
from stablerules import frames as fr


@pytest.fixture
def chain2():
    return fr.make_frame("POSET", [[1, 1], [0, 1]])


@pytest.fixture
def h2():
    return fr.dual_algebra(fr.make_frame("POSET", [[1]]))


@pytest.fixture
def h3(chain2):
    # three-element Heyting chain 0 < 1 < 2
    return fr.dual_algebra(chain2)


@pytest.fixture
def cluster2():
    return fr.make_frame("PREORDER", [[1, 1], [1, 1]])


@pytest.fixture
def c2(cluster2):
    # powerset algebra of the two-point cluster; element i is the bitmask i
    return fr.dual_algebra(cluster2)


@pytest.fixture
def b4():
    # four-element Boolean lattice as a Heyting algebra
    return fr.dual_algebra(fr.make_frame("POSET", [[1, 0], [0, 1]]))


@pytest.fixture
def box_id4():
    # four-element modal algebra with identity box (two reflexive points)
    return fr.dual_algebra(fr.make_frame("PREORDER", [[1, 0], [0, 1]]))


@pytest.fixture
def mag1():
    # Magari algebra of the single irreflexive point: box 0 = box 1 = 1
    return fr.dual_algebra(fr.make_frame("STRICT", [[0]]))
