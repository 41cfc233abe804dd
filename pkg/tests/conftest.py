import pytest

from ppcat.exactfield import GF, QQ
from ppcat.quiver import BoundQuiver, Path, PathCombo, Quiver


def make_a3(field=QQ) -> BoundQuiver:
    q = Quiver([1, 2, 3], [("a", 1, 2), ("b", 2, 3)])
    return BoundQuiver(q, field)


def make_keps(field=QQ) -> BoundQuiver:
    q = Quiver([1], [("e", 1, 1)])
    arrow = q.arrow_by_name["e"]
    rel = PathCombo(field, {Path(q, (arrow, arrow)): field.one()})
    return BoundQuiver(q, field, [rel])


@pytest.fixture(scope="session")
def a3():
    return make_a3()


@pytest.fixture(scope="session")
def a3_f2():
    return make_a3(GF(2))


@pytest.fixture(scope="session")
def keps():
    return make_keps()


@pytest.fixture(scope="session")
def keps_f2():
    return make_keps(GF(2))
