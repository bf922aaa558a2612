"""Chow rings of products of projective spaces and Chern-class calculus.

The Chow ring of ``P^{n_1} x ... x P^{n_k}`` is ``Q[h_1..h_k]/(h_i^{n_i+1})``.
Elements are stored as dicts ``{exponent tuple: Fraction}`` with zero
coefficients dropped, so equality is structural.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from math import prod
from typing import Iterable, Mapping, Sequence

from .arith import binomial

__all__ = [
    "ChowRing",
    "ChowElement",
    "FormalBundle",
    "line_bundle",
    "trivial_bundle",
    "direct_sum",
    "dual",
    "twist",
    "determinant",
    "virtual_difference",
    "tangent_chern",
    "ci_euler",
    "porteous_class",
]


def _default_names(k: int) -> tuple[str, ...]:
    if k == 1:
        return ("h",)
    if k == 2:
        return ("h", "t")
    return tuple(f"h{i + 1}" for i in range(k))


@dataclass(frozen=True)
class ChowRing:
    """Truncated polynomial ring of a product of projective spaces."""

    factor_dims: tuple[int, ...]
    names: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        dims = tuple(int(n) for n in self.factor_dims)
        if not dims or any(n < 1 for n in dims):
            raise ValueError(f"factor dimensions must be positive, got {self.factor_dims}")
        object.__setattr__(self, "factor_dims", dims)
        names = tuple(self.names) or _default_names(len(dims))
        if len(names) != len(dims):
            raise ValueError("one generator name per factor")
        object.__setattr__(self, "names", names)

    @property
    def arity(self) -> int:
        return len(self.factor_dims)

    @property
    def dim(self) -> int:
        return sum(self.factor_dims)

    @property
    def top(self) -> tuple[int, ...]:
        return self.factor_dims

    def element(self, coeffs: Mapping[Sequence[int], object] | None = None) -> "ChowElement":
        return ChowElement(self, coeffs or {})

    def zero(self) -> "ChowElement":
        return ChowElement(self, {})

    def one(self) -> "ChowElement":
        return self.scalar(1)

    def scalar(self, c) -> "ChowElement":
        return ChowElement(self, {(0,) * self.arity: c})

    def gens(self) -> tuple["ChowElement", ...]:
        out = []
        for i in range(self.arity):
            mono = tuple(1 if j == i else 0 for j in range(self.arity))
            out.append(ChowElement(self, {mono: 1}))
        return tuple(out)

    def linear(self, degrees: Iterable) -> "ChowElement":
        """The divisor class ``sum d_i h_i`` (rational ``d_i`` allowed)."""
        degrees = tuple(degrees)
        if len(degrees) != self.arity:
            raise ValueError(f"arity mismatch: ring has {self.arity} factors, got {degrees}")
        return sum((Fraction(d) * g for d, g in zip(degrees, self.gens())), self.zero())

    def monomials(self, degree: int | None = None):
        for mono in product(*(range(n + 1) for n in self.factor_dims)):
            if degree is None or sum(mono) == degree:
                yield mono

    def __str__(self):
        return " x ".join(f"P{n}" for n in self.factor_dims)


class ChowElement:
    """An element of a :class:`ChowRing` with exact rational coefficients."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: ChowRing, coeffs: Mapping[Sequence[int], object]):
        clean = {}
        for mono, c in coeffs.items():
            mono = tuple(int(m) for m in mono)
            if len(mono) != ring.arity:
                raise ValueError(f"monomial {mono} does not fit {ring}")
            if any(m < 0 for m in mono):
                raise ValueError(f"negative exponent in {mono}")
            if any(m > n for m, n in zip(mono, ring.factor_dims)):
                continue
            c = Fraction(c)
            if c:
                clean[mono] = clean.get(mono, Fraction(0)) + c
                if not clean[mono]:
                    del clean[mono]
        self.ring = ring
        self.coeffs = clean

    def _coerce(self, other) -> "ChowElement":
        if isinstance(other, ChowElement):
            if other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.coeffs)
        for mono, c in other.coeffs.items():
            out[mono] = out.get(mono, 0) + c
        return ChowElement(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return ChowElement(self.ring, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        top = self.ring.factor_dims
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                if any(a > n for a, n in zip(mono, top)):
                    continue
                out[mono] = out.get(mono, 0) + c1 * c2
        return ChowElement(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.scalar(other)
        if not isinstance(other, ChowElement):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    __hash__ = None

    def __bool__(self):
        return bool(self.coeffs)

    def coefficient(self, mono: Sequence[int]) -> Fraction:
        return self.coeffs.get(tuple(mono), Fraction(0))

    def part(self, degree: int) -> "ChowElement":
        """Homogeneous component of the given total degree."""
        return ChowElement(self.ring, {m: c for m, c in self.coeffs.items() if sum(m) == degree})

    @property
    def constant(self) -> Fraction:
        return self.coefficient((0,) * self.ring.arity)

    def integrate(self) -> Fraction:
        """Degree of the top-dimensional part (coefficient of the point class)."""
        return self.coefficient(self.ring.top)

    def inverse(self) -> "ChowElement":
        """Multiplicative inverse; needs a nonzero constant term.

        The ring is nilpotent above degree 0, so ``1/(c - x) = sum x^k / c^{k+1}``
        terminates at the top degree.
        """
        c = self.constant
        if not c:
            raise ZeroDivisionError("element has zero constant term")
        nil = self.ring.scalar(c) - self
        term = self.ring.scalar(1 / c)
        out = self.ring.zero()
        for _ in range(self.ring.dim + 1):
            out = out + term
            term = term * nil / c
        return out

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return self * (Fraction(1) / other)
        other = self._coerce(other)
        return self * other.inverse()

    def _sorted_terms(self):
        # total degree first, then lexicographic by factor index
        return sorted(self.coeffs.items(), key=lambda mc: (sum(mc[0]), tuple(-e for e in mc[0])))

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for mono, c in self._sorted_terms():
            vars_ = "*".join(
                n if e == 1 else f"{n}^{e}" for n, e in zip(self.ring.names, mono) if e
            )
            if not vars_:
                body = str(abs(c))
            elif abs(c) == 1:
                body = vars_
            else:
                body = f"{abs(c)}*{vars_}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"ChowElement({self.ring}: {self})"


@dataclass(frozen=True, eq=False)
class FormalBundle:
    """A rank together with a total Chern class (constant term 1).

    Negative ranks stand for virtual differences such as ``F - E``.
    """

    rank: int
    total_chern: ChowElement

    def __post_init__(self):
        if self.total_chern.constant != 1:
            raise ValueError("total Chern class must have constant term 1")

    @property
    def ring(self) -> ChowRing:
        return self.total_chern.ring

    def c(self, k: int) -> ChowElement:
        if k < 0:
            return self.ring.zero()
        return self.total_chern.part(k)

    def __eq__(self, other):
        if not isinstance(other, FormalBundle):
            return NotImplemented
        return self.rank == other.rank and self.total_chern == other.total_chern

    def __repr__(self):
        return f"FormalBundle(rank={self.rank}, c={self.total_chern})"


def line_bundle(ring: ChowRing, d: Sequence) -> FormalBundle:
    return FormalBundle(1, ring.one() + ring.linear(d))


def trivial_bundle(ring: ChowRing, rank: int) -> FormalBundle:
    return FormalBundle(rank, ring.one())


def _same_ring(e: FormalBundle, f: FormalBundle):
    if e.ring != f.ring:
        raise ValueError(f"ring mismatch: {e.ring} vs {f.ring}")


def direct_sum(e: FormalBundle, f: FormalBundle) -> FormalBundle:
    _same_ring(e, f)
    return FormalBundle(e.rank + f.rank, e.total_chern * f.total_chern)


def dual(e: FormalBundle) -> FormalBundle:
    c = ChowElement(
        e.ring, {m: (-1) ** sum(m) * v for m, v in e.total_chern.coeffs.items()}
    )
    return FormalBundle(e.rank, c)


def twist(e: FormalBundle, ell: Sequence) -> FormalBundle:
    """Chern classes of ``E (x) L`` for a (possibly fractional) line bundle ``L``.

    ``c_k(E (x) L) = sum_i binomial(r - i, k - i) c_i(E) c_1(L)^(k - i)``.
    """
    r = e.rank
    if r < 0:
        raise ValueError("cannot twist a virtual bundle of negative rank")
    ring = e.ring
    l1 = ring.linear(ell)
    total = ring.zero()
    for k in range(ring.dim + 1):
        for i in range(min(k, r) + 1):
            coeff = binomial(r - i, k - i)
            if coeff:
                total = total + coeff * e.c(i) * l1 ** (k - i)
    return FormalBundle(r, total)


def determinant(e: FormalBundle) -> FormalBundle:
    return FormalBundle(1, e.ring.one() + e.c(1))


def first_chern_degrees(e: FormalBundle) -> tuple[Fraction, ...]:
    """Coefficients of ``c_1`` on the hyperplane classes."""
    ring = e.ring
    c1 = e.c(1)
    return tuple(
        c1.coefficient(tuple(1 if j == i else 0 for j in range(ring.arity)))
        for i in range(ring.arity)
    )


def virtual_difference(f: FormalBundle, e: FormalBundle) -> FormalBundle:
    """The class ``F - E``: rank ``f - e`` and total Chern class ``c(F)/c(E)``."""
    _same_ring(e, f)
    return FormalBundle(f.rank - e.rank, f.total_chern / e.total_chern)


def tangent_chern(ring: ChowRing) -> FormalBundle:
    """Tangent bundle via the Euler sequence on each factor."""
    c = ring.one()
    for n, g in zip(ring.factor_dims, ring.gens()):
        c = c * (ring.one() + g) ** (n + 1)
    return FormalBundle(ring.dim, c)


def ci_euler(ring: ChowRing, divisors: Sequence[Sequence[int]]) -> Fraction:
    """Topological Euler characteristic of a smooth complete intersection.

    ``e(Z) = integral of [c(T)/prod(1 + D_j)]_{dim Z} * prod D_j``.
    """
    m = len(divisors)
    if m > ring.dim:
        raise ValueError(f"{m} divisors exceed the dimension {ring.dim} of {ring}")
    classes = [ring.linear(d) for d in divisors]
    normal = ring.one()
    for D in classes:
        normal = normal * (ring.one() + D)
    c_tangent = tangent_chern(ring).total_chern / normal
    return (c_tangent.part(ring.dim - m) * prod(classes, start=ring.one())).integrate()


def _det(matrix: list[list[ChowElement]], ring: ChowRing) -> ChowElement:
    n = len(matrix)
    total = ring.one() if n == 0 else ring.zero()
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = ring.scalar(-1 if inversions % 2 else 1)
        for i, j in enumerate(perm):
            term = term * matrix[i][j]
            if not term:
                break
        total = total + term
    return total


def porteous_class(e: FormalBundle, f: FormalBundle, r: int) -> ChowElement:
    """Class of the locus where a map ``E -> F`` has rank at most ``r``.

    Giambelli determinant ``det(c_{f-r+j-i}(F - E))`` of size ``(e-r) x (e-r)``.
    """
    _same_ring(e, f)
    if r < 0 or r > min(e.rank, f.rank):
        raise ValueError(f"rank bound {r} outside [0, min({e.rank}, {f.rank})]")
    diff = virtual_difference(f, e)
    size = e.rank - r
    shift = f.rank - r
    matrix = [[diff.c(shift + j - i) for j in range(size)] for i in range(size)]
    return _det(matrix, e.ring)
