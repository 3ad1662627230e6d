"""Rational solvers, affine subspaces, and Fourier-Motzkin feasibility."""

import random
from fractions import Fraction as F

from snclab.qlinalg import (
    AffineSubspace,
    Constraint,
    dot,
    feasible_point,
    nullspace,
    solve_affine,
    vec,
    whole_space,
)


def test_solve_affine_unique():
    point, basis = solve_affine([[F(1), F(1)], [F(1), F(-1)]], [F(3), F(1)])
    assert point == (F(2), F(1))
    assert basis == ()


def test_solve_affine_underdetermined():
    point, basis = solve_affine([[F(1), F(1), F(0)]], [F(2)])
    assert dot((F(1), F(1), F(0)), point) == 2
    assert len(basis) == 2
    for b in basis:
        assert dot((F(1), F(1), F(0)), b) == 0


def test_solve_affine_inconsistent():
    assert solve_affine([[F(1), F(1)], [F(2), F(2)]], [F(1), F(3)]) is None


def test_nullspace_dimensions():
    basis = nullspace([[F(1), F(2), F(3)]], 3)
    assert len(basis) == 2
    assert nullspace([], 2)[0] == (F(1), F(0))


def test_affine_subspace_relations():
    line = AffineSubspace((F(0), F(0)), ((F(1), F(1)),))
    point = AffineSubspace((F(2), F(2)), ())
    assert line.contains(point)
    assert not point.contains(line)
    other = AffineSubspace((F(5), F(5)), ((F(-2), F(-2)),))
    assert line == other
    shifted = AffineSubspace((F(0), F(1)), ((F(1), F(1)),))
    assert line != shifted
    assert line.intersect(shifted) is None
    cross = AffineSubspace((F(0), F(2)), ((F(1), F(-1)),))
    meet = line.intersect(cross)
    assert meet is not None and meet.dim == 0
    assert meet.point == (F(1), F(1))


def test_implicit_round_trip():
    rng = random.Random(17)
    for _ in range(50):
        n = rng.randint(1, 4)
        k = rng.randint(0, n)
        point = vec([F(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(n)])
        raw = [
            vec([F(rng.randint(-3, 3)) for _ in range(n)]) for _ in range(k)
        ]
        rows = [r for r in raw if any(x != 0 for x in r)]
        sub_pt, sub_basis = solve_affine(rows, [dot(r, point) for r in rows]) if rows else (
            point, whole_space(n).basis
        )
        sub = AffineSubspace(sub_pt, sub_basis)
        normals, rhs = sub.implicit()
        assert all(dot(nrm, sub.point) == b for nrm, b in zip(normals, rhs))
        for b in sub.basis:
            assert all(dot(nrm, b) == 0 for nrm in normals)
        assert sub.contains_point(sub.parametrize([F(1)] * sub.dim))


def test_feasible_point_simple_polytope():
    # 0 <= x <= 1, 0 <= y <= 1, x + y < 3/2
    cs = [
        Constraint((F(-1), F(0)), F(0)),
        Constraint((F(1), F(0)), F(1)),
        Constraint((F(0), F(-1)), F(0)),
        Constraint((F(0), F(1)), F(1)),
        Constraint((F(1), F(1)), F(3, 2), strict=True),
    ]
    w = feasible_point(cs, 2)
    assert w is not None
    for c in cs:
        value = dot(c.coeffs, w)
        assert value < c.rhs if c.strict else value <= c.rhs


def test_infeasible_strict_system():
    # x < 0 and x > 0
    cs = [
        Constraint((F(1),), F(0), strict=True),
        Constraint((F(-1),), F(0), strict=True),
    ]
    assert feasible_point(cs, 1) is None
    # x <= 0 and x >= 0 meets only at 0, which a strict constraint kills
    cs2 = [
        Constraint((F(1),), F(0)),
        Constraint((F(-1),), F(0)),
        Constraint((F(1),), F(0), strict=True),
    ]
    assert feasible_point(cs2, 1) is None
    cs3 = [Constraint((F(1),), F(0)), Constraint((F(-1),), F(0))]
    assert feasible_point(cs3, 1) == (F(0),)


def test_unbounded_directions():
    # x >= 5, strict y > x: witnesses exist arbitrarily far out
    cs = [
        Constraint((F(-1), F(0)), F(-5)),
        Constraint((F(1), F(-1)), F(0), strict=True),
    ]
    w = feasible_point(cs, 2)
    assert w is not None and w[0] >= 5 and w[1] > w[0]


def test_randomized_witness_soundness():
    rng = random.Random(23)
    agree = 0
    for _ in range(300):
        n = rng.randint(1, 3)
        cs = []
        for _ in range(rng.randint(1, 6)):
            coeffs = tuple(F(rng.randint(-3, 3)) for _ in range(n))
            cs.append(
                Constraint(coeffs, F(rng.randint(-4, 4)), strict=rng.random() < 0.4)
            )
        w = feasible_point(cs, n)
        if w is None:
            # soundness of infeasibility is cross-checked by sampling
            for _ in range(40):
                x = tuple(F(rng.randint(-12, 12), rng.randint(1, 4)) for _ in range(n))
                ok = all(
                    (dot(c.coeffs, x) < c.rhs) if c.strict else (dot(c.coeffs, x) <= c.rhs)
                    for c in cs
                )
                assert not ok
        else:
            agree += 1
            for c in cs:
                value = dot(c.coeffs, w)
                assert value < c.rhs if c.strict else value <= c.rhs
    assert agree > 50
