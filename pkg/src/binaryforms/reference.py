"""Published reference values used by the reproduction suites and tests.

Degree/order matrices are dicts degree -> {order: count}.
"""
from __future__ import annotations

from typing import Dict, List


def _rows(orders: List[int], rows: Dict[int, List[int]]) -> Dict[int, Dict[int, int]]:
    return {d: {k: c for k, c in zip(orders, r) if c} for d, r in rows.items()}


# Cov(S3 + S4), orders 0..6
COV_S3_S4 = _rows(list(range(7)), {
    1: [0, 0, 0, 1, 1, 0, 0],
    2: [1, 1, 1, 1, 1, 1, 0],
    3: [1, 1, 2, 2, 1, 1, 1],
    4: [1, 2, 2, 2, 1, 0, 0],
    5: [2, 3, 3, 1, 1, 0, 0],
    6: [2, 3, 2, 1, 0, 0, 0],
    7: [3, 3, 1, 0, 0, 0, 0],
    8: [3, 2, 0, 0, 0, 0, 0],
    9: [4, 1, 0, 0, 0, 0, 0],
    10: [2, 0, 0, 0, 0, 0, 0],
    11: [1, 0, 0, 0, 0, 0, 0],
})
COV_S3_S4_CANDIDATES = 104

# Cov(S6): degree -> orders of the 26 generators
COV_S6 = {
    1: {6: 1}, 2: {0: 1, 4: 1, 8: 1}, 3: {2: 1, 6: 1, 8: 1, 12: 1}, 4: {0: 1, 4: 1, 6: 1, 10: 1},
    5: {2: 1, 4: 1, 8: 1}, 6: {0: 1, 6: 2}, 7: {2: 1, 4: 1}, 8: {2: 1}, 9: {4: 1},
    10: {0: 1, 2: 1}, 12: {2: 1}, 15: {0: 1},
}

# Cov(S6 + S2), orders 0, 2, ..., 12
COV_S6_S2 = _rows(list(range(0, 13, 2)), {
    1: [0, 1, 0, 1, 0, 0, 0],
    2: [2, 0, 2, 1, 1, 0, 0],
    3: [0, 3, 2, 2, 2, 0, 1],
    4: [4, 3, 3, 4, 0, 2, 0],
    5: [0, 4, 6, 0, 3, 0, 0],
    6: [5, 7, 0, 5, 0, 0, 0],
    7: [3, 1, 6, 0, 0, 0, 0],
    8: [1, 8, 0, 0, 0, 0, 0],
    9: [7, 0, 1, 0, 0, 0, 0],
    10: [1, 2, 0, 0, 0, 0, 0],
    11: [2, 0, 0, 0, 0, 0, 0],
    12: [0, 1, 0, 0, 0, 0, 0],
    13: [1, 0, 0, 0, 0, 0, 0],
    15: [1, 0, 0, 0, 0, 0, 0],
})
COV_S6_S2_ORDER_TOTALS = {0: 27, 2: 30, 4: 20, 6: 13, 8: 6, 10: 2, 12: 1}

# Cov(S6 + S4), orders 0, 2, ..., 12
COV_S6_S4 = _rows(list(range(0, 13, 2)), {
    1: [0, 0, 1, 1, 0, 0, 0],
    2: [2, 1, 3, 1, 2, 0, 0],
    3: [2, 4, 4, 5, 3, 1, 1],
    4: [4, 6, 9, 5, 2, 1, 0],
    5: [4, 12, 11, 3, 1, 0, 0],
    6: [9, 14, 6, 2, 0, 0, 0],
    7: [9, 17, 2, 0, 0, 0, 0],
    8: [9, 7, 1, 0, 0, 0, 0],
    9: [8, 3, 1, 0, 0, 0, 0],
    10: [5, 2, 0, 0, 0, 0, 0],
    11: [3, 1, 0, 0, 0, 0, 0],
    12: [2, 1, 0, 0, 0, 0, 0],
    13: [1, 0, 0, 0, 0, 0, 0],
    14: [1, 0, 0, 0, 0, 0, 0],
    15: [1, 0, 0, 0, 0, 0, 0],
})
COV_S6_S4_CANDIDATES = 1732
COV_S6_S4_FILTERED = 1134
COV_S6_S4_FILTERED_BY_ORDER = {0: 365, 2: 462, 4: 144, 6: 78, 8: 46, 10: 24, 12: 10, 14: 4, 16: 1}

# Cov(S4 + S4): (d1, d2, order) of the 28 generators
COV_S4_S4 = [
    (1, 0, 4), (0, 1, 4), (2, 0, 0), (0, 2, 0), (1, 1, 0), (1, 1, 2), (2, 0, 4), (0, 2, 4),
    (1, 1, 4), (1, 1, 6), (3, 0, 0), (0, 3, 0), (1, 2, 0), (2, 1, 0), (1, 2, 2), (2, 1, 2),
    (1, 2, 4), (2, 1, 4), (3, 0, 6), (0, 3, 6), (1, 2, 6), (2, 1, 6), (2, 2, 0), (2, 2, 2),
    (3, 1, 2), (1, 3, 2), (2, 3, 2), (3, 2, 2),
]

# Cov(S8): (degree, order) of the 69 generators
COV_S8 = [
    (1, 8), (2, 0), (2, 4), (2, 8), (2, 12), (3, 0), (3, 4), (3, 6), (3, 8), (3, 10), (3, 12),
    (3, 14), (3, 18), (4, 0), (4, 4), (4, 4), (4, 6), (4, 8), (4, 10), (4, 10), (4, 12), (4, 14),
    (4, 18), (5, 0), (5, 2), (5, 4), (5, 4), (5, 6), (5, 6), (5, 8), (5, 10), (5, 10), (5, 10),
    (5, 14), (6, 0), (6, 2), (6, 4), (6, 4), (6, 6), (6, 6), (6, 6), (6, 8), (6, 10), (7, 0),
    (7, 2), (7, 2), (7, 4), (7, 4), (7, 6), (7, 6), (7, 6), (8, 0), (8, 2), (8, 2), (8, 4),
    (8, 4), (8, 6), (8, 6), (9, 0), (9, 2), (9, 2), (9, 2), (9, 4), (10, 0), (10, 2), (10, 2),
    (11, 2), (11, 2), (12, 2),
]

# minimal basis sizes n(V) of Cov(S_n)
SIMPLE_COUNTS = {3: 4, 4: 5, 5: 23, 6: 26, 8: 69}

# dim Cov_{(d1, d2, d3), 0}(S8 + S4 + S4) in total degree 12
INV_S8_S4_S4_DEG12 = {
    (4, 4, 4): 1004, (6, 3, 3): 1003, (8, 2, 2): 544, (10, 1, 1): 135, (4, 8, 0): 91,
    (3, 4, 5): 695, (3, 8, 1): 157, (3, 7, 2): 350, (3, 6, 3): 558, (3, 9, 0): 44,
    (5, 7, 0): 126, (5, 6, 1): 414, (4, 6, 2): 611, (4, 5, 3): 872, (4, 7, 1): 290,
    (5, 5, 2): 788, (5, 3, 4): 1046, (7, 5, 0): 176, (8, 4, 0): 176, (6, 5, 1): 494,
    (6, 4, 2): 871, (7, 4, 1): 488, (9, 3, 0): 131, (10, 2, 0): 95, (7, 2, 3): 747,
    (8, 3, 1): 404, (9, 1, 2): 271,
}
INV_S8_S4_S4_DEG49 = 103947673173

# Hilbert series of Cov(S4 + S3) graded by degree + order
SERIES_S4_S3 = [1, 0, 1, 2, 5, 10, 18, 31, 55, 92, 144, 223, 341, 499, 725, 1031, 1436, 1978, 2685]

# invariant system for S8 + S4 + S4: grouped coefficients and multiplicities
SE_ROW1 = (2, 4, 6, 8, 10, 12, 14, 18)
SE_ROW2 = (2, 4, 6)
SE_MULTIPLICITIES = ((14, 13, 12, 6, 7, 3, 3, 2), (8, 7, 5))
SE_SOLUTIONS = 695754

# relations, in gordan normalization: monomial (name -> exponent) -> coefficient
S4_RELATION = {
    (("k3_6", 2),): 12, (("k2_4", 3),): 6, (("j", 1), ("v", 3)): 2,
    (("i", 1), ("k2_4", 1), ("v", 2)): -3,
}
S6_H3_12_RELATION = {
    (("h3_12", 2),): 36, (("f", 4), ("h2_0", 1)): 1, (("f", 3), ("h3_6", 1)): -6,
    (("f", 2), ("h2_4", 1), ("h2_8", 1)): -9, (("h2_8", 3),): 18,
}
