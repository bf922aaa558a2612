"""Integer arithmetic for line-bundle Euler characteristics.

Python integers are arbitrary precision and :class:`fractions.Fraction`
is always kept in lowest terms, so both are used directly as the exact
integer and rational types of the package.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial, prod
from typing import Iterable, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "MultiDegree",
    "binomial",
    "sym_dim",
    "chi_proj",
    "chi_proj_product",
]


class MultiDegree(tuple):
    """Degrees of a line bundle on a product of projective spaces.

    A tuple of integers with componentwise arithmetic: ``+``, ``-`` and
    unary ``-`` act entry by entry (tuple concatenation is not available).
    """

    def __new__(cls, degrees: Iterable[int] = ()):
        return super().__new__(cls, (int(d) for d in degrees))

    def _check(self, other) -> "MultiDegree":
        other = MultiDegree(other)
        if len(other) != len(self):
            raise ValueError(f"arity mismatch: {len(self)} vs {len(other)}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return MultiDegree(a + b for a, b in zip(self, other))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        return MultiDegree(a - b for a, b in zip(self, other))

    def __rsub__(self, other):
        return MultiDegree(other) - self

    def __neg__(self):
        return MultiDegree(-a for a in self)

    def __mul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return MultiDegree(k * a for a in self)

    __rmul__ = __mul__

    def __repr__(self):
        return f"MultiDegree({list(self)})"


def binomial(n: int, k: int) -> int:
    """Binomial coefficient as a polynomial in ``n``.

    Zero for ``k < 0``; otherwise ``n(n-1)...(n-k+1)/k!``, which is also
    meaningful for negative ``n``.
    """
    if k < 0:
        return 0
    num = prod(n - i for i in range(k))
    return num // factorial(k)


def sym_dim(a: int, b: int) -> int:
    """Dimension of ``Sym^a`` of a ``b``-dimensional vector space."""
    if b <= 0:
        raise ValueError(f"sym_dim needs a positive dimension, got {b}")
    if a < 0:
        return 0
    return binomial(a + b - 1, b - 1)


def chi_proj(n: int, a: int) -> int:
    """Euler characteristic of ``O(a)`` on ``P^n``.

    Sections in degree ``a >= 0``, and the Serre-dual top cohomology
    ``H^n(O(a)) = Sym^(-a-n-1)`` for ``a <= -n-1``.
    """
    if n < 1:
        raise ValueError(f"projective space needs n >= 1, got {n}")
    return sym_dim(a, n + 1) + (-1) ** n * sym_dim(-a - n - 1, n + 1)


def chi_proj_product(dims: Sequence[int], d: Sequence[int]) -> int:
    """Euler characteristic of ``O(d)`` on ``P^{n_1} x ... x P^{n_k}`` (Kunneth)."""
    if len(dims) != len(d):
        raise ValueError(f"arity mismatch: {len(dims)} factors, degree {tuple(d)}")
    return prod(chi_proj(n, a) for n, a in zip(dims, d))
