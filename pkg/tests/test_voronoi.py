"""Exact Voronoi complexes: face lattice, duals, subspace classification."""

import random
from fractions import Fraction as F
from itertools import combinations

import pytest

from corpus import (
    FOUR_SITES_1D,
    RING_OUTER,
    RING_SITES,
    SQUARE_SITES,
    STRIP_ROW,
    STRIP_SITES,
    THREE_SITES_1D,
    TRIANGLE_SITES,
    TWO_SITES_1D,
)
from snclab.complexes import AbelianGroup
from snclab.presentations import abelianization, pi1_presentation
from snclab.qlinalg import Constraint, dot, feasible_point
from snclab.voronoi import (
    GenericityError,
    NotSimpleError,
    SiteSet,
    VoronoiError,
    classify_subspaces,
    delaunay_dual,
    equidistance_subspace,
    select_subcomplex,
    voronoi_complex,
)

SIMPLE_CORPUS = {
    "two_1d": TWO_SITES_1D,
    "three_1d": THREE_SITES_1D,
    "four_1d": FOUR_SITES_1D,
    "triangle": TRIANGLE_SITES,
    "strip": STRIP_SITES,
    "ring": RING_SITES,
}


def d2(x, y):
    return sum((a - b) ** 2 for a, b in zip(x, y))


def random_rational_point(rng, dim, span=6, denom=7):
    return tuple(
        F(rng.randint(-4 * span, 4 * span), rng.randint(1, denom)) for _ in range(dim)
    )


def test_site_set_validation():
    with pytest.raises(VoronoiError, match="duplicate"):
        SiteSet.build(1, [[0], [0]])
    with pytest.raises(VoronoiError):
        SiteSet.build(2, [[0]])
    with pytest.raises(VoronoiError):
        SiteSet.build(1, [])


def test_two_sites_1d():
    vc = voronoi_complex(TWO_SITES_1D)
    keys = {tuple(sorted(f.sites)) for f in vc.face_list()}
    assert keys == {(0,), (1,), (0, 1)}
    mid = vc.faces[frozenset({0, 1})]
    assert mid.dim == 0
    assert mid.span.point == (F(1, 2),)
    assert vc.is_simple()


def test_single_site_has_no_proper_faces():
    vc = voronoi_complex(SiteSet.build(3, [[1, 2, 3]]))
    assert [tuple(f.sites) for f in vc.face_list()] == [(0,)]
    assert vc.faces[frozenset({0})].dim == 3


def test_triangle_vertex_is_circumcenter():
    vc = voronoi_complex(TRIANGLE_SITES)
    vertex = vc.faces[frozenset({0, 1, 2})]
    assert vertex.dim == 0
    assert vertex.span.point == (F(1, 2), F(1, 2))
    assert vc.is_simple()


def test_square_not_simple_with_witness():
    vc = voronoi_complex(SQUARE_SITES)
    w = vc.simplicity_witness()
    assert w is not None
    assert sorted(w.sites) == [0, 1, 2, 3]
    assert w.codim == 2
    assert len(w.sites) == 4


def test_bisector_linearization_is_exact():
    rng = random.Random(7)
    for _ in range(200):
        dim = rng.randint(1, 3)
        a = random_rational_point(rng, dim)
        b = random_rational_point(rng, dim)
        if a == b:
            continue
        sites = SiteSet(dim, (a, b))
        coeffs, rhs = sites.bisector(0, 1)
        x = random_rational_point(rng, dim)
        assert (d2(x, a) <= d2(x, b)) == (dot(coeffs, x) <= rhs)


def test_partition_property_random_sites():
    rng = random.Random(1001)
    for _ in range(25):
        dim = rng.choice([1, 2, 2, 3])
        n = rng.randint(2, 8)
        pts = set()
        while len(pts) < n:
            pts.add(tuple(F(rng.randint(0, 12)) for _ in range(dim)))
        sites = SiteSet(dim, tuple(sorted(pts)))
        for _ in range(20):
            x = random_rational_point(rng, dim)
            nearest = sites.nearest_set(x)
            assert len(nearest) >= 1
            # membership in each cell's half-space system agrees with the
            # distance semantics
            for i in range(n):
                in_cell = all(dot(a, x) <= b for a, b in sites.cell_halfspaces(i))
                assert in_cell == (i in nearest)
            if len(nearest) >= 2:
                i, j = sorted(nearest)[:2]
                coeffs, rhs = sites.bisector(i, j)
                assert dot(coeffs, x) == rhs


def test_face_witnesses_and_spans():
    for name, sites in SIMPLE_CORPUS.items():
        vc = voronoi_complex(sites)
        for face in vc.face_list():
            assert sites.nearest_set(face.witness) == face.sites, name
            assert face.span.contains_point(face.witness)
            recomputed = equidistance_subspace(sites, sorted(face.sites))
            assert recomputed is not None
            assert recomputed == face.span


def test_simplicity_and_dual_dimension_matches_codimension():
    for name, sites in SIMPLE_CORPUS.items():
        vc = voronoi_complex(sites)
        assert vc.is_simple(), name
        for face in vc.face_list():
            assert len(face.sites) == face.codim + 1
        dual = delaunay_dual(vc)
        for k in range(dual.dim + 1):
            expected = sum(1 for f in vc.face_list() if f.codim == k)
            assert dual.n_cells(k) == expected


def test_delaunay_examples():
    assert delaunay_dual(voronoi_complex(TWO_SITES_1D)).cell_counts() == (2, 1)
    assert delaunay_dual(voronoi_complex(TRIANGLE_SITES)).cell_counts() == (3, 3, 1)
    with pytest.raises(NotSimpleError):
        delaunay_dual(voronoi_complex(SQUARE_SITES))


def test_delaunay_row_selection_is_path():
    vc = voronoi_complex(STRIP_SITES)
    d = delaunay_dual(vc, STRIP_ROW)
    assert d.cell_counts() == (3, 2)
    assert d.all_betti() == (1, 0)
    full = delaunay_dual(vc)
    assert full.cell_counts() == (4, 5, 2)
    assert full.all_betti() == (1, 0, 0)


def test_delaunay_ring_selection_is_circle():
    vc = voronoi_complex(RING_SITES)
    d = delaunay_dual(vc, RING_OUTER)
    assert d.cell_counts() == (4, 4)
    assert d.all_betti() == (1, 1)
    assert abelianization(pi1_presentation(d)) == AbelianGroup(1)


def test_closed_face_intersections_stay_in_lattice():
    # polyhedral-complex axiom at desk scale: whenever the closures of two
    # faces meet, some common face contains the meeting locus
    for name, sites in SIMPLE_CORPUS.items():
        vc = voronoi_complex(sites)
        faces = vc.face_list()
        for f1, f2 in combinations(faces, 2):
            union = f1.sites | f2.sites
            constraints = []
            base = sorted(union)[0]
            for k in union:
                if k == base:
                    continue
                coeffs, rhs = sites.bisector(base, k)
                constraints.append(Constraint(coeffs, rhs, strict=False))
                constraints.append(
                    Constraint(tuple(-c for c in coeffs), -rhs, strict=False)
                )
            for k in range(len(sites.sites)):
                if k in union:
                    continue
                coeffs, rhs = sites.bisector(base, k)
                constraints.append(Constraint(coeffs, rhs, strict=False))
            witness = feasible_point(constraints, sites.dim)
            if witness is None:
                continue
            nearest = sites.nearest_set(witness)
            assert union <= nearest
            assert frozenset(nearest) in vc.faces, name


def test_select_subcomplex_examples():
    vc = voronoi_complex(STRIP_SITES)
    site0 = STRIP_SITES.sites[0]
    assert select_subcomplex(vc, ((site0,),)) == (0,)
    segment = ((STRIP_SITES.sites[0], STRIP_SITES.sites[1]),)
    assert select_subcomplex(vc, segment) == (0, 1)
    inside_cell_2 = ((((F(15, 4)), F(0)),),)
    assert select_subcomplex(vc, inside_cell_2) == (2,)
    assert select_subcomplex(vc, ()) == ()
    far = (((F(1000), F(1000)),),)
    assert len(select_subcomplex(vc, far)) == 1


def test_select_subcomplex_closed_cells_share_boundary_points():
    vc = voronoi_complex(TWO_SITES_1D)
    midpoint = ((F(1, 2),),)
    assert select_subcomplex(vc, (midpoint,)) == (0, 1)


def test_classify_triangle_cell0():
    vc = voronoi_complex(TRIANGLE_SITES)
    rep = classify_subspaces(vc, 0)
    essential = {tuple(sorted(r.sites)) for r in rep.essential}
    parasitic = {tuple(sorted(r.sites)) for r in rep.parasitic}
    assert essential == {(0, 1), (0, 2), (0, 1, 2)}
    assert parasitic == {(1, 2)}
    assert rep.minimal_parasitic_parent == {frozenset({0, 1, 2}): frozenset({1, 2})}


def test_classify_two_sites_no_parasitic():
    vc = voronoi_complex(TWO_SITES_1D)
    for cell in (0, 1):
        rep = classify_subspaces(vc, cell)
        assert rep.parasitic == ()


def test_classify_four_collinear():
    vc = voronoi_complex(FOUR_SITES_1D)
    rep = classify_subspaces(vc, 1)
    essential = {tuple(sorted(r.sites)) for r in rep.essential}
    parasitic = {tuple(sorted(r.sites)) for r in rep.parasitic}
    assert essential == {(0, 1), (1, 2)}
    assert parasitic == {(0, 2), (0, 3), (1, 3), (2, 3)}
    # midpoints off the cell boundary, e.g. sites 0 and 2 meet at 1
    mid02 = next(r for r in rep.parasitic if r.sites == frozenset({0, 2}))
    assert mid02.span.point == (F(1),)


def test_classify_rejects_non_simple_and_non_generic():
    vc = voronoi_complex(SQUARE_SITES)
    with pytest.raises(NotSimpleError):
        classify_subspaces(vc, 0)
    # equal spacing makes distinct index sets share a bisector
    collinear = voronoi_complex(SiteSet.build(1, [[0], [1], [2], [3]]))
    with pytest.raises(GenericityError):
        classify_subspaces(collinear, 0)


def test_parasitic_parents_on_corpus():
    for name, sites in SIMPLE_CORPUS.items():
        vc = voronoi_complex(sites)
        m = vc.dim
        for cell in range(len(sites.sites)):
            rep = classify_subspaces(vc, cell)
            for record in rep.essential:
                if record.dim <= m - 2:
                    parent_key = rep.minimal_parasitic_parent[record.sites]
                    parent = next(r for r in rep.parasitic if r.sites == parent_key)
                    assert parent.dim == record.dim + 1
                    assert parent.span.contains(record.span)


def test_face_lattice_is_complete_under_probing():
    # any nearest-site set realized by a rational point must have been
    # enumerated as a face
    rng = random.Random(606)
    for _ in range(8):
        dim = rng.choice([1, 2, 2, 3])
        n = rng.randint(2, 6)
        pts = set()
        while len(pts) < n:
            pts.add(tuple(F(rng.randint(0, 10)) for _ in range(dim)))
        sites = SiteSet(dim, tuple(sorted(pts)))
        vc = voronoi_complex(sites)
        for _ in range(30):
            x = random_rational_point(rng, dim, span=3)
            assert sites.nearest_set(x) in vc.faces
        # midpoints of site pairs often land on lower faces
        for i, j in combinations(range(n), 2):
            mid = tuple((a + b) / 2 for a, b in zip(sites.sites[i], sites.sites[j]))
            assert sites.nearest_set(mid) in vc.faces


def test_scale_guard_ten_sites_and_dim_four():
    # the documented working scale: around ten sites, ambient dim up to 4
    rng = random.Random(99)
    pts = set()
    while len(pts) < 10:
        pts.add((F(rng.randint(0, 30)), F(rng.randint(0, 30))))
    vc = voronoi_complex(SiteSet(2, tuple(sorted(pts))))
    assert sum(1 for f in vc.face_list() if len(f.sites) == 1) == 10
    pts4 = set()
    while len(pts4) < 6:
        pts4.add(tuple(F(rng.randint(0, 8)) for _ in range(4)))
    vc4 = voronoi_complex(SiteSet(4, tuple(sorted(pts4))))
    for face in vc4.face_list():
        assert vc4.sites.nearest_set(face.witness) == face.sites


def test_genericity_density_fuzz():
    # perturbing the degenerate square by small random rationals yields a
    # simple complex
    rng = random.Random(31337)
    for _ in range(8):
        wiggled = []
        for x, y in SQUARE_SITES.sites:
            wiggled.append(
                (
                    x + F(rng.randint(-20, 20), 997),
                    y + F(rng.randint(-20, 20), 991),
                )
            )
        vc = voronoi_complex(SiteSet.build(2, wiggled))
        assert vc.is_simple()
