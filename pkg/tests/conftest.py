from __future__ import annotations

from itertools import combinations

import pytest

from btdslab.bitop import BitopSpace
from btdslab.dynamics import PointMap
from btdslab.fintop import FiniteTopology, from_open_family, full_set, mask


def subsets(n: int):
    return range(1 << n)


def brute_opens(t: FiniteTopology) -> list[int]:
    """Opens as the unions of arbitrary sub-families of minimal neighbourhoods."""
    out = {0}
    for r in range(1, t.n + 1):
        for ps in combinations(range(t.n), r):
            u = 0
            for p in ps:
                u |= t.min_nbhd[p]
            out.add(u)
    return sorted(out)


def brute_continuous(src: FiniteTopology, dst: FiniteTopology, table) -> bool:
    dom_opens = set(brute_opens(src))
    for v in brute_opens(dst):
        pre = mask(x for x, y in enumerate(table) if (v >> y) & 1)
        if pre not in dom_opens:
            return False
    return True


# the bundled reference fixture encoded on points 1 -> 0, 1/2 -> 1, 1/3 -> 2, 1/4 -> 3
@pytest.fixture
def psi1() -> FiniteTopology:
    return from_open_family(3, [0, 0b001, 0b011, 0b111])


@pytest.fixture
def ex_Y(psi1) -> BitopSpace:
    return BitopSpace(psi1, FiniteTopology.indiscrete(3))


@pytest.fixture
def ex_X() -> BitopSpace:
    return BitopSpace(FiniteTopology.discrete(4), FiniteTopology.indiscrete(4))


@pytest.fixture
def ex_maps() -> dict[str, PointMap]:
    return {
        "f": PointMap(4, 4, (1, 1, 1, 1)),
        "g": PointMap(3, 3, (1, 2, 0)),
        "F": PointMap(4, 3, (0, 1, 2, 2)),
    }


@pytest.fixture
def ab() -> BitopSpace:
    """The two-point discrete/indiscrete space."""
    return BitopSpace(FiniteTopology.discrete(2), FiniteTopology.indiscrete(2))


@pytest.fixture
def sierpinski() -> FiniteTopology:
    return from_open_family(2, [0, 0b01, full_set(2)])
