import pytest

from qct import chain_tournament, reflexive_directed_cycle, transitive_tournament
from qct.graph import check_reflexive_tournament, make_digraph


def sdt():
    """s => DC*_3 => t with s = 0, the cycle on 1..3 and t = 4."""
    one = make_digraph(1, reflexive=True)
    return chain_tournament([one, reflexive_directed_cycle(3), one])


@pytest.fixture
def dc3():
    return check_reflexive_tournament(reflexive_directed_cycle(3))


@pytest.fixture
def tt2():
    return transitive_tournament(2)


@pytest.fixture
def sdt5():
    return sdt()
