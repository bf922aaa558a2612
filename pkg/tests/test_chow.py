from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from kmut.chow import (
    ChowRing,
    ci_euler,
    determinant,
    direct_sum,
    dual,
    first_chern_degrees,
    line_bundle,
    porteous_class,
    tangent_chern,
    trivial_bundle,
    twist,
    virtual_difference,
)

P2P1 = ChowRing((2, 1))
P4 = ChowRing((4,))


def test_products_truncate():
    h, t = P2P1.gens()
    assert h * (h + t) == h**2 + h * t
    assert h**2 * h == P2P1.zero()
    assert t * t == P2P1.zero()


def test_bezout():
    (h,) = P4.gens()
    prod = (2 * h) ** 2 * (3 * h) ** 2
    assert prod == 36 * h**4
    assert prod.integrate() == 36
    assert (h**2).integrate() == 0


def test_rational_integral():
    h, t = P2P1.gens()
    assert (Fraction(33, 2) * h**2 * t).integrate() == Fraction(33, 2)


def test_inverse_and_division():
    h, t = P2P1.gens()
    x = P2P1.one() + 2 * h + t
    assert x * x.inverse() == P2P1.one()
    assert (x / x) == P2P1.one()
    with pytest.raises(ZeroDivisionError):
        x / 0


def test_line_bundles():
    h, t = P2P1.gens()
    assert line_bundle(P2P1, (6, 4)).total_chern == 1 + 6 * h + 4 * t
    assert line_bundle(P2P1, (0, 0)).total_chern == P2P1.one()
    assert line_bundle(P2P1, (-1, 2)).total_chern == 1 - h + 2 * t


def test_direct_sum_and_dual():
    h, t = P2P1.gens()
    E = direct_sum(trivial_bundle(P2P1, 3), line_bundle(P2P1, (1, 0)))
    assert E.rank == 4 and E.total_chern == 1 + h
    assert direct_sum(E, trivial_bundle(P2P1, 0)) == E
    s = direct_sum(line_bundle(P2P1, (1, 0)), line_bundle(P2P1, (0, 1)))
    assert s.total_chern == (1 + h) * (1 + t)
    assert dual(line_bundle(P2P1, (2, 1))).total_chern == 1 - 2 * h - t
    assert dual(E).total_chern == 1 - h


def test_rational_twist():
    h, t = P2P1.gens()
    E = direct_sum(trivial_bundle(P2P1, 3), line_bundle(P2P1, (1, 0)))
    EN = twist(E, (Fraction(1, 2), Fraction(1, 2)))
    assert EN.c(1) == 3 * h + 2 * t
    assert EN.c(3) == 3 * h**2 * t
    assert (4 * (EN.c(1) * EN.c(2) - EN.c(3))).integrate() == 66


def test_twist_refuses_virtual():
    v = virtual_difference(trivial_bundle(P4, 1), trivial_bundle(P4, 3))
    with pytest.raises(ValueError):
        twist(v, (1,))


def test_discriminant_class():
    E = direct_sum(trivial_bundle(P2P1, 3), line_bundle(P2P1, (1, 0)))
    det2 = [2 * d for d in first_chern_degrees(determinant(E))]
    assert tuple(a + b for a, b in zip(det2, (4, 4))) == (6, 4)


def test_tangent_chern():
    (h,) = ChowRing((2,)).gens()
    assert tangent_chern(ChowRing((2,))).total_chern == 1 + 3 * h + 3 * h**2


@pytest.mark.parametrize(
    "dims, divisors, want",
    [((4, 1), [(2, 1), (3, 1)], -128), ((5,), [(3,), (3,)], -144), ((4,), [(5,)], -200), ((3,), [], 4)],
)
def test_ci_euler(dims, divisors, want):
    assert ci_euler(ChowRing(dims), divisors) == want


def test_ci_euler_too_many_divisors():
    with pytest.raises(ValueError):
        ci_euler(ChowRing((1,)), [(1,), (1,)])


def test_small_resolution_bridge():
    assert ci_euler(ChowRing((5,)), [(3,), (3,)]) + 2 * 12 == -120


def test_porteous():
    P2 = ChowRing((2,))
    (h,) = P2.gens()
    F = direct_sum(line_bundle(P2, (2,)), line_bundle(P2, (2,)))
    cls = porteous_class(trivial_bundle(P2, 3), F, 1)
    assert cls == 12 * h**2
    assert porteous_class(trivial_bundle(P2, 3), F, 2) == P2.one()
    (g,) = P4.gens()
    assert porteous_class(trivial_bundle(P4, 1), line_bundle(P4, (3,)), 0) == 3 * g
    with pytest.raises(ValueError):
        porteous_class(trivial_bundle(P2, 3), F, 3)


@given(st.lists(st.integers(-3, 3), min_size=2, max_size=2), st.lists(st.integers(-3, 3), min_size=2, max_size=2))
def test_whitney_on_line_sums(a, b):
    La, Lb = line_bundle(P2P1, a), line_bundle(P2P1, b)
    s = direct_sum(La, Lb)
    assert s.total_chern == La.total_chern * Lb.total_chern
    assert determinant(s).total_chern == line_bundle(P2P1, [x + y for x, y in zip(a, b)]).total_chern


@given(st.integers(-3, 3), st.integers(-3, 3))
def test_twist_of_line_adds_degrees(a, b):
    L = twist(line_bundle(P2P1, (a, b)), (1, -1))
    assert L.total_chern == line_bundle(P2P1, (a + 1, b - 1)).total_chern
