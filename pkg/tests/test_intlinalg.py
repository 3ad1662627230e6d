"""Smith normal form against the determinantal-divisor oracle.

The oracle computes invariant factors as ratios of gcds of k-by-k
minors, which is independent of any reduction path.  Exhaustive over all
shapes with at most six entries in [-2, 2], the full [-3, 3] range for
2x2, and a seeded random sample of 3x3 matrices in [-3, 3].
"""

import random
from itertools import product

import pytest

from snclab.intlinalg import (
    IntMatrix,
    determinant,
    invariant_factors_by_minors,
    is_unimodular,
    rank,
    smith_normal_form,
)


def check_one(m: IntMatrix):
    s = smith_normal_form(m)
    prod = s.left * m * s.right
    for i in range(m.rows):
        for j in range(m.cols):
            expected = s.diagonal[i] if i == j and i < len(s.diagonal) else 0
            assert prod[(i, j)] == expected
    assert is_unimodular(s.left)
    assert is_unimodular(s.right)
    nz = s.nonzero
    for a, b in zip(nz, nz[1:]):
        assert b % a == 0
    assert all(d == 0 for d in s.diagonal[len(nz):])
    assert s.diagonal == invariant_factors_by_minors(m)


def test_spec_examples():
    assert smith_normal_form(IntMatrix.identity(2)).diagonal == (1, 1)
    assert smith_normal_form(IntMatrix.zero(2, 3)).diagonal == (0, 0)
    m = IntMatrix.from_rows([[2, 4], [-2, 6]])
    s = smith_normal_form(m)
    assert s.diagonal == (2, 10)
    assert s.diagonal[0] * s.diagonal[1] == abs(determinant(m)) == 20


@pytest.mark.parametrize("shape", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_exhaustive_full_range(shape):
    r, c = shape
    for entries in product(range(-3, 4), repeat=r * c):
        m = IntMatrix.from_rows([entries[i * c:(i + 1) * c] for i in range(r)])
        check_one(m)


@pytest.mark.parametrize("shape", [(2, 3), (3, 2)])
def test_exhaustive_six_entries(shape):
    r, c = shape
    for entries in product(range(-2, 3), repeat=6):
        m = IntMatrix.from_rows([entries[i * c:(i + 1) * c] for i in range(r)])
        check_one(m)


def test_random_3x3_sample():
    rng = random.Random(1311)
    for _ in range(2500):
        m = IntMatrix.from_rows(
            [[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)]
        )
        check_one(m)


def test_structure_on_larger_random_matrices():
    # the minors oracle is too slow past 3x3; check the structural
    # contract (transforms, divisibility) on bigger random inputs
    rng = random.Random(2024)
    for _ in range(60):
        r, c = rng.randint(1, 5), rng.randint(1, 5)
        m = IntMatrix.from_rows(
            [[rng.randint(-50, 50) for _ in range(c)] for _ in range(r)]
        )
        s = smith_normal_form(m)
        prod = s.left * m * s.right
        for i in range(r):
            for j in range(c):
                expected = s.diagonal[i] if i == j and i < len(s.diagonal) else 0
                assert prod[(i, j)] == expected
        assert is_unimodular(s.left) and is_unimodular(s.right)
        nz = s.nonzero
        assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


def test_rank_matches_snf():
    rng = random.Random(88)
    for _ in range(200):
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        m = IntMatrix.from_rows([[rng.randint(-5, 5) for _ in range(c)] for _ in range(r)])
        assert rank(m) == smith_normal_form(m).rank


def test_matrix_validation():
    with pytest.raises(ValueError):
        IntMatrix(2, 2, ((1, 2),))
    with pytest.raises(ValueError):
        IntMatrix(1, 2, ((1,),))
    with pytest.raises(ValueError):
        determinant(IntMatrix.zero(2, 3))
