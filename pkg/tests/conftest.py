import pytest

from hqft.orthcat import (category_from_generators, cyclic_group, min_orthogonality, orthogonal_closure,
                          point_category, max_orthogonality)
from hqft.workspace import load


@pytest.fixture
def pair():
    return category_from_generators(["a", "b", "t"], {"f1": ("a", "t"), "f2": ("b", "t")}, name="pair")


@pytest.fixture
def pair_oc(pair):
    return orthogonal_closure(pair, [("f1", "f2")])


@pytest.fixture
def pair_min(pair):
    return min_orthogonality(pair)


@pytest.fixture
def point_max():
    return max_orthogonality(point_category())


@pytest.fixture
def z2():
    return cyclic_group(2)


@pytest.fixture
def workspace():
    return load
