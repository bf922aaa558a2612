import pytest
from hypothesis import given, strategies as st

from kmut import (
    SPACE_H,
    SPACE_P,
    SPACE_P4xP1,
    KClass,
    LineAtom,
    UnsupportedOperation,
    UnsupportedPairing,
    chi,
    chi_line,
    chi_pair,
    dual,
    euler_on_Y,
    exc_div_class,
    fiber,
    line,
    pushforward_to_base,
    tensor_line,
)
from kmut.arith import MultiDegree

H, P = SPACE_H, SPACE_P


def O(*degs, z=0, space=H):
    return line(space, degs, z)


def atom(base, rho):
    return LineAtom(MultiDegree(base), rho)


def test_display_round_trip():
    a = LineAtom.from_display((4, 1), -2)
    assert a.rho_deg == 2 and a.e_coeff == -2
    assert a.display() == "O(4,1)(-2e)"


def test_canonical_classes():
    assert H.canonical.display() == "O(-3,-1)(2e)"
    assert P.canonical.display() == "O(-6)(4e)"
    assert SPACE_P4xP1.canonical == atom((-5, -2), 0)


@pytest.mark.parametrize("base, want", [((1, 0), 6), ((2, 0), 21), ((0, 0), 1)])
def test_chi_line_on_H(base, want):
    # display degrees: O(x,y) with no e-twist
    assert chi_line(H, LineAtom.from_display(base, 0)) == want
    assert chi(line(H, base)) == want


@pytest.mark.parametrize(
    "a, b, want",
    [
        (O(2, 1, z=-1), O(4, 1, z=-2), 20),
        (O(2, 0, z=-1), fiber(H, 1), 2),
        (fiber(H, 0), O(0, 0), 0),
        (O(1, 0), O(4, 1, z=-2), 99),
        (O(2, 0, z=-1), O(5, 1, z=-2), 109),
        (O(2, 0, z=-1), O(1, 1), 0),
    ],
)
def test_pairings(a, b, want):
    assert chi_pair(a, b) == want


def test_fiber_fiber_pairing_unsupported():
    with pytest.raises(UnsupportedPairing):
        chi_pair(fiber(H, 0), fiber(H, 1))


def test_tensor_line():
    minus_k = H.canonical.inverse()
    assert tensor_line(fiber(H, 0), minus_k) == fiber(H, 1)
    assert tensor_line(O(1, 0), minus_k) == O(4, 1, z=-2)
    assert tensor_line(O(0, 0), minus_k) == O(3, 1, z=-2)
    x = fiber(H, 2) - 3 * O(1, 1)
    assert tensor_line(x, atom((0, 0), 0)) == x


def test_dual():
    assert dual(O(2, 1, z=-1)) == O(-2, -1, z=1)
    assert dual(O(0, 0) - O(0, 0, z=-1)) == O(0, 0) - O(0, 0, z=1)
    with pytest.raises(UnsupportedOperation):
        dual(fiber(H, 0))


def test_exceptional_divisor_classes():
    e = lambda k: exc_div_class(P, k)  # noqa: E731
    assert chi_pair(e(0), e(0)) == 1
    assert chi_pair(e(-2), e(-1)) == 0
    assert chi_pair(e(-1), e(-2)) == 4
    with pytest.raises(ValueError):
        exc_div_class(SPACE_P4xP1, 0)


def test_pushforward():
    got = pushforward_to_base(KClass.of(H, atom((1, 0), 1)))
    want = line(SPACE_P4xP1, (1, 0)) + line(SPACE_P4xP1, (0, 0)) - line(SPACE_P4xP1, (-2, -1))
    assert got == want
    assert pushforward_to_base(KClass.of(P, atom((0,), -1))) == KClass(SPACE_P.base)
    assert pushforward_to_base(KClass.of(H, atom((3, 2), -1))) == line(SPACE_P4xP1, (1, 1))


def test_euler_on_Y():
    for d in (-3, 0, 5):
        assert euler_on_Y(fiber(H, d)) == -1
    assert euler_on_Y(O(1, 0)) == -64
    with pytest.raises(UnsupportedOperation):
        euler_on_Y(O(1, space=P))


def test_class_arithmetic_and_printing():
    x = fiber(H, 1) + 5 * O(4, 1, z=-2) - 10 * O(3, 1, z=-2) - O(5, 1, z=-2)
    assert str(x) == "O_F(1) - 10O(3,1)(-2e) + 5O(4,1)(-2e) - O(5,1)(-2e)"
    assert x - x == KClass(H)
    assert str(KClass(H)) == "0"
    with pytest.raises(ValueError):
        O(0, 0) + O(0, space=P)


def test_atom_arity_is_checked():
    with pytest.raises(ValueError):
        line(H, (1,))


small = st.integers(-4, 4)


@given(small, small, small)
def test_line_atoms_are_exceptional(x, y, z):
    assert chi_pair(O(x, y, z=z), O(x, y, z=z)) == 1


@given(small, small, small)
def test_chi_matches_pushforward(x, y, z):
    c = O(x, y, z=z)
    assert chi(c) == chi(pushforward_to_base(c))


@given(small, small, small, small)
def test_serre_duality_with_fiber(x, y, z, d):
    # chi(A, B) = (-1)^dim chi(B, A (x) K) on H (dim 5)
    a, b = O(x, y, z=z), fiber(H, d)
    assert chi_pair(a, b) == -chi_pair(b, tensor_line(a, H.canonical))
