"""
Two mutation routes to the same number
======================================

The fiber sheaf O_F on the universal hypersurface H is pushed through a
sequence of mutations, and its image is projected to the threefold Y.
Left and right mutations take different paths and must agree.
"""

from kmut import SPACE_H, euler_on_Y, fiber, line
from kmut.scenarios import route_left_trace, route_right_trace

H = SPACE_H

###############################################################################
# Objects are K-classes. ``line(H, (x, y), z)`` is O(x,y)(ze).
print(fiber(H, 0) + 5 * line(H, (1, 0)) - line(H, (2, 0), -1))

###############################################################################
# The left route: five left mutations, the anticanonical twist, four more.
left = route_left_trace()
for step in left.steps:
    what = step.mutator if step.direction != "serre" else f"sign {step.mutator:+d}"
    print(f"{step.direction:6} {str(what):14} chi = {step.computed_chi}")
print(left.final)

###############################################################################
# The right route starts from the class after the first block.
right = route_right_trace()
print(right.chis)
print(right.final)

###############################################################################
# Both land on the same Euler characteristic on Y.
print(euler_on_Y(left.final), euler_on_Y(right.final))
