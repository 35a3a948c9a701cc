import pytest

from toricex.fan import FamilyParams, build_family_fan, Fan


def family(n, b):
    return build_family_fan(FamilyParams(n, b))


P2 = Fan(dimension=2, rays=((1, 0), (0, 1), (-1, -1)), maximal_cones=((0, 1), (1, 2), (0, 2)))
P1xP1 = Fan(dimension=2, rays=((1, 0), (-1, 0), (0, 1), (0, -1)), maximal_cones=((0, 2), (0, 3), (1, 2), (1, 3)))
P1 = Fan(dimension=1, rays=((1,), (-1,)), maximal_cones=((0,), (1,)))


@pytest.fixture
def fan20():
    return family(2, 0)
