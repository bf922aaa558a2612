"""
Gram matrices of exceptional collections
========================================

A collection is exceptional at the level of K-theory when its Gram matrix
of Euler pairings is upper unitriangular.  That is necessary, not
sufficient, for the real thing.
"""

import numpy as np

from kmut import SPACE_H, line
from kmut.mutation import check_exceptional_sequence, gram_matrix

H = SPACE_H

degrees = [(-2, -1, 2), (-1, -1, 1), (-2, 0, 2), (-1, 0, 1), (0, 0, 0),
           (1, 0, -1), (2, 0, -2), (0, 1, 0), (1, 1, -1), (2, 1, -2)]
objs = [line(H, (x, y), z) for x, y, z in degrees]

###############################################################################
# numpy is only used for display and a quick triangularity check.
G = np.array(gram_matrix(objs), dtype=np.int64)
print(G)
print(np.array_equal(np.tril(G, -1), np.zeros_like(G)), np.all(np.diag(G) == 1))

###############################################################################
# Swapping two entries that do not commute breaks the pattern.
report = check_exceptional_sequence([line(H, (1, 0)), line(H, (0, 0))])
print(report.passed, report.offending)
