"""
Counting with Chern classes
===========================

Truncated polynomial rings stand in for the Chow rings of products of
projective spaces.  All coefficients are exact rationals.
"""

from fractions import Fraction

from kmut.chow import (
    ChowRing,
    ci_euler,
    direct_sum,
    line_bundle,
    porteous_class,
    trivial_bundle,
    twist,
)

###############################################################################
# Bezout on P^4: two quadrics and two cubics.
P4 = ChowRing((4,))
(h,) = P4.gens()
print(((2 * h) ** 2 * (3 * h) ** 2).integrate())

###############################################################################
# A rank 4 bundle on P^2 x P^1 twisted by a half-integral line bundle.
# The twist is only formal, but the count it produces is an integer.
R = ChowRing((2, 1))
E = direct_sum(trivial_bundle(R, 3), line_bundle(R, (1, 0)))
EN = twist(E, (Fraction(1, 2), Fraction(1, 2)))
print(EN.c(1), "|", EN.c(2), "|", EN.c(3))
print((4 * (EN.c(1) * EN.c(2) - EN.c(3))).integrate())

###############################################################################
# Thom-Porteous: where a 3 -> 2 map of quadrics on P^2 drops rank.
P2 = ChowRing((2,))
F = direct_sum(line_bundle(P2, (2,)), line_bundle(P2, (2,)))
print(porteous_class(trivial_bundle(P2, 3), F, 1))

###############################################################################
# Topological Euler characteristics of complete intersections.
print(ci_euler(ChowRing((4, 1)), [(2, 1), (3, 1)]))
print(ci_euler(ChowRing((5,)), [(3,), (3,)]))
print(ci_euler(ChowRing((4,)), [(5,)]))
