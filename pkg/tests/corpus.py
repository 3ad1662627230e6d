"""Shared complexes and site configurations used across the test suite.

Coordinates are chosen once, exactly, and the structural facts asserted
about them (face lists, adjacency, genericity) are re-derived in the
tests from witness points and direct distance comparisons.
"""

from fractions import Fraction as F

from snclab.complexes import build_complex, from_simplices
from snclab.voronoi import SiteSet

# --- Delta-complexes ---------------------------------------------------

POINT = from_simplices([(0,)])

# 3 vertices, 3 edges in a cycle
CIRCLE = from_simplices([(0, 1), (1, 2), (0, 2)])

FULL_2_SIMPLEX = from_simplices([(0, 1, 2)])

SPHERE_2 = from_simplices([(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])

# minimal 6-vertex triangulation of the real projective plane
RP2_FACES = [
    (1, 2, 3), (1, 2, 4), (1, 3, 5), (1, 4, 6), (1, 5, 6),
    (2, 3, 6), (2, 4, 5), (2, 5, 6), (3, 4, 5), (3, 4, 6),
]
RP2 = from_simplices(RP2_FACES)

# one vertex, loop edges a, b, c and two triangles; the attaching words
# a b c^-1 and b a c^-1 make this the genuine torus
TORUS = build_complex([[None], [[0, 0], [0, 0], [0, 0]], [[0, 2, 1], [1, 2, 0]]])

NAMED_COMPLEXES = {
    "point": POINT,
    "circle": CIRCLE,
    "full_2_simplex": FULL_2_SIMPLEX,
    "sphere_2": SPHERE_2,
    "rp2": RP2,
    "torus": TORUS,
}

# --- site configurations ------------------------------------------------

TWO_SITES_1D = SiteSet.build(1, [[0], [1]])

THREE_SITES_1D = SiteSet.build(1, [[0], [1], [3]])

FOUR_SITES_1D = SiteSet.build(1, [[0], [1], [2], [4]])

TRIANGLE_SITES = SiteSet.build(2, [[0, 0], [1, 0], [0, 1]])

SQUARE_SITES = SiteSet.build(2, [[0, 0], [1, 0], [0, 1], [1, 1]])

# four sites whose cells run in a row 0-1-2-3; the circumcenter of
# {0,1,2} is eaten by site 3, so selecting [0,1,2] gives the row of three
STRIP_SITES = SiteSet.build(2, [[0, 0], [2, 1], [4, 0], [2, -2]])
STRIP_ROW = (0, 1, 2)

# center plus four staggered satellites; the outer cells form a ring
RING_SITES = SiteSet.build(
    2, [[0, 0], [2, 0], [0, 3], [F(-5, 2), 0], [0, F(-7, 4)]]
)
RING_OUTER = (1, 2, 3, 4)
