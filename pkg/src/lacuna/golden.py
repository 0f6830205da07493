"""Built-in golden data for the verification suite.

Reference lacking polynomials for small complete bipartite graphs, the fully
worked K_{2,2} orientation table, and the K_{2,4} root counterexample used by
``lacuna verify``.
"""

from __future__ import annotations

# (m, n) -> coefficient vector of the lacking polynomial, exact.
TABLE2: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 3),
    (2, 3): (1, 4, 7),
    (2, 4): (1, 5, 11, 15),
    (2, 5): (1, 6, 16, 26, 31),
    (3, 2): (1, 4, 8),
    (3, 3): (1, 5, 15, 30, 39),
    (3, 4): (1, 6, 21, 52, 100, 148, 158),
    (3, 5): (1, 7, 28, 79, 175, 320, 490, 610, 585),
    (4, 2): (1, 5, 12, 20),
    (4, 3): (1, 6, 21, 53, 105, 162, 189),
    (4, 4): (1, 7, 28, 84, 203, 413, 716, 1068, 1344, 1336),
    (5, 2): (1, 6, 17, 32, 48),
    (5, 3): (1, 7, 28, 80, 182, 347, 561, 756, 837),
}

TABLE2_ORDER: tuple[tuple[int, int], ...] = tuple(sorted(TABLE2))

# The exact recurrent set of K_{2,2}.
K22_STO: tuple[tuple[int, int, int], ...] = (
    (0, 1, 1),
    (1, 0, 1),
    (1, 1, 0),
    (1, 1, 1),
)

# The five worked orientations of K_{2,2}.  Edge order is row-major:
# e0=(0,2), e1=(0,3), e2=(1,2), e3=(1,3); bit e set points high->low.
# Each row: orientation bits, out-degrees at (v1, v2, v3), compatible configs.
K22_WORKED_ROWS: tuple[tuple[int, tuple[int, int, int], tuple[tuple[int, int, int], ...]], ...] = (
    (0b1001, (1, 1, 1), ((1, 1, 1),)),
    (0b0110, (1, 1, 1), ((1, 1, 1),)),
    (0b1000, (1, 0, 1), ((1, 0, 1), (1, 1, 1))),
    (0b0100, (1, 1, 0), ((1, 1, 0), (1, 1, 1))),
    (0b1100, (0, 1, 1), ((0, 1, 1), (1, 1, 1))),
)

# Roots of the K_{2,4} lacking polynomial 1 + 5x + 11x^2 + 15x^3: one real
# root and a complex pair that falls outside the wide-argument sector.
K24_ROOTS: tuple[complex, ...] = (
    complex(-1.0 / 3.0, 0.0),
    complex(-0.2, 0.4),
    complex(-0.2, -0.4),
)
