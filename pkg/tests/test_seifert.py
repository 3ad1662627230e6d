"""Weighted homogeneity, link Betti numbers, circle-action feasibility."""

import random

import pytest

from snclab.complexes import AbelianGroup
from snclab.seifert import (
    BaseCohomology,
    H2Decomposition,
    INFINITE,
    SeifertError,
    WeightSystem,
    circle_action_feasible,
    from_prime_powers,
    is_rational_homology_sphere,
    is_weighted_homogeneous,
    link_betti,
    to_prime_power_decomposition,
    weighted_degree,
)


def test_weighted_degree_examples():
    assert weighted_degree([2, 1], WeightSystem.build([1, 1])) == 3
    w = WeightSystem.build([1, 3, 2])
    assert weighted_degree([1, 1, 0], w) == weighted_degree([0, 0, 2], w) == 4
    assert weighted_degree([0, 0], WeightSystem.build([5, 7])) == 0
    with pytest.raises(SeifertError):
        weighted_degree([1], WeightSystem.build([1, 1]))
    with pytest.raises(SeifertError):
        WeightSystem.build([1, 0])


def test_is_weighted_homogeneous():
    w = WeightSystem.build([1, 2, 1])
    assert is_weighted_homogeneous([[1, 1, 0], [0, 0, 3]], w) == 3
    assert is_weighted_homogeneous([[2, 0], [0, 3]], WeightSystem.build([1, 1])) is None
    assert is_weighted_homogeneous([[4, 1]], WeightSystem.build([2, 3])) == 11
    with pytest.raises(SeifertError):
        is_weighted_homogeneous([], w)


def test_base_validation():
    with pytest.raises(SeifertError):
        BaseCohomology.build(1, [1, 0])  # wrong length
    with pytest.raises(SeifertError):
        BaseCohomology.build(1, [1, 0, 2])  # h^{2d} != 1
    with pytest.raises(SeifertError):
        BaseCohomology.build(1, [1, 1, 1])  # odd h^1
    with pytest.raises(SeifertError):
        BaseCohomology.build(2, [1, 0, -1, 0, 1])


def test_link_betti_projective_plane_gives_sphere():
    base = BaseCohomology.build(2, [1, 0, 1, 0, 1])
    assert link_betti(base) == (1, 0, 0, 0, 0, 1)


def gysin_circle_bundle_over_curve(b0, b1, b2):
    """Rank bookkeeping in the Gysin sequence of a circle bundle over a
    real surface with nonzero rational Euler class: the cup product is an
    isomorphism H^0 -> H^2 and zero elsewhere."""
    # 0 -> coker(H^{k-2} -> H^k) -> H^k(L) -> ker(H^{k-1} -> H^{k+1}) -> 0
    ranks = {0: b0, 1: b1, 2: b2}

    def cup_rank(i):
        return min(ranks.get(i, 0), ranks.get(i + 2, 0)) if i == 0 else 0

    out = []
    for k in range(4):
        coker = ranks.get(k, 0) - cup_rank(k - 2)
        kernel = ranks.get(k - 1, 0) - cup_rank(k - 1)
        out.append(coker + kernel)
    return tuple(out)


def test_link_betti_elliptic_curve_matches_gysin_oracle():
    base = BaseCohomology.build(1, [1, 2, 1])
    assert link_betti(base) == (1, 2, 2, 1)
    assert link_betti(base) == gysin_circle_bundle_over_curve(1, 2, 1)
    for genus in (0, 2, 3, 5):
        b = BaseCohomology.build(1, [1, 2 * genus, 1])
        assert link_betti(b) == gysin_circle_bundle_over_curve(1, 2 * genus, 1)


def test_link_betti_rational_homology_sphere_case():
    base = BaseCohomology.build(1, [1, 0, 1])
    assert link_betti(base) == (1, 0, 0, 1)
    assert is_rational_homology_sphere(base)


def test_link_betti_negative_rejected():
    base = BaseCohomology.build(2, [1, 0, 0, 0, 1])
    with pytest.raises(SeifertError, match="orbifold"):
        link_betti(base)


def test_is_rational_homology_sphere():
    assert is_rational_homology_sphere(BaseCohomology.build(2, [1, 0, 1, 0, 1]))
    assert not is_rational_homology_sphere(BaseCohomology.build(1, [1, 2, 1]))
    assert not is_rational_homology_sphere(BaseCohomology.build(2, [1, 0, 2, 0, 1]))


def random_valid_base(rng: random.Random) -> BaseCohomology:
    """Poincare-symmetric, rejection-sampled to satisfy the formulas."""
    while True:
        d = rng.randint(1, 3)
        h = [0] * (2 * d + 1)
        h[0] = h[2 * d] = 1
        for i in range(1, d + 1):
            value = rng.randint(0, 4)
            if i == 1:
                value = 2 * rng.randint(0, 2)
            h[i] = value if i > 1 else max(value, 0)
            h[2 * d - i] = h[i]
        h[0] = h[2 * d] = 1
        try:
            base = BaseCohomology.build(d, h)
            link_betti(base)
            return base
        except SeifertError:
            continue


def test_poincare_duality_euler_and_parity_on_random_bases():
    rng = random.Random(2718)
    for _ in range(50):
        base = random_valid_base(rng)
        betti = link_betti(base)
        n = len(betti) - 1
        for i, b in enumerate(betti):
            assert b == betti[n - i]
        assert sum((-1) ** i * b for i, b in enumerate(betti)) == 0
        assert betti[1] % 2 == 0
        assert betti[1] == base.h[1]


def test_qhs_equivalent_to_sphere_link_profile():
    rng = random.Random(515)
    for _ in range(40):
        base = random_valid_base(rng)
        betti = link_betti(base)
        sphere = tuple(
            1 if i in (0, len(betti) - 1) else 0 for i in range(len(betti))
        )
        assert is_rational_homology_sphere(base) == (betti == sphere)


def test_decomposition_json_round_trip():
    from snclab.seifert import decomposition_from_json_dict

    h = H2Decomposition.build(2, {2: 1, 9: 3}, INFINITE)
    again = decomposition_from_json_dict(h.to_json_dict())
    assert again == h
    assert again.barden == INFINITE
    finite = H2Decomposition.build(0, {4: 1}, 2)
    assert decomposition_from_json_dict(finite.to_json_dict()) == finite


def test_h2_decomposition_validation():
    with pytest.raises(SeifertError):
        H2Decomposition.build(0, {6: 1})  # not a prime power
    with pytest.raises(SeifertError):
        H2Decomposition.build(0, {4: 1}, 3)  # no Z/8 summand for barden 3
    with pytest.raises(SeifertError):
        H2Decomposition.build(-1, {})
    ok = H2Decomposition.build(1, {8: 2}, 3)
    assert ok.multiplicity(8) == 2


def test_circle_action_examples():
    assert circle_action_feasible(H2Decomposition.build(0, {3: 5}, 0)) == (True, None)
    assert circle_action_feasible(H2Decomposition.build(0, {3: 1, 9: 1}, 0)) == (
        False,
        "condition_1",
    )
    assert circle_action_feasible(H2Decomposition.build(3, {2: 1, 4: 1}, 2)) == (
        False,
        "condition_2",
    )
    assert circle_action_feasible(
        H2Decomposition.build(1, {2: 1, 4: 1}, INFINITE)
    ) == (False, "condition_3")
    assert circle_action_feasible(
        H2Decomposition.build(2, {2: 1, 4: 1}, INFINITE)
    ) == (True, None)


def random_decomposition(rng: random.Random) -> H2Decomposition:
    c = {}
    for _ in range(rng.randint(0, 4)):
        p = rng.choice([2, 2, 3, 5])
        q = p ** rng.randint(1, 3)
        c[q] = rng.randint(1, 3)
    k = rng.randint(0, 4)
    barden = rng.choice([0, 1, INFINITE] + [e for e in (1, 2, 3) if (2 ** e) in c])
    try:
        return H2Decomposition.build(k, c, barden)
    except SeifertError:
        return H2Decomposition.build(k, c, 0)


def test_monotone_in_rank():
    rng = random.Random(1234)
    for _ in range(200):
        h = random_decomposition(rng)
        feasible, _ = circle_action_feasible(h)
        if feasible:
            bumped = H2Decomposition(h.k + 1, h.c, h.barden)
            assert circle_action_feasible(bumped)[0]


def test_prime_power_round_trip():
    cases = [
        AbelianGroup.from_invariant_factors(2, [6]),
        AbelianGroup.from_invariant_factors(0, [2, 4]),
        AbelianGroup(0),
        AbelianGroup.from_invariant_factors(1, [2, 6, 60]),
    ]
    assert to_prime_power_decomposition(cases[0]) == (2, {2: 1, 3: 1})
    assert to_prime_power_decomposition(cases[1]) == (0, {2: 1, 4: 1})
    assert to_prime_power_decomposition(cases[2]) == (0, {})
    for g in cases:
        k, c = to_prime_power_decomposition(g)
        assert from_prime_powers(k, c) == g
    rng = random.Random(31)
    for _ in range(100):
        factors = []
        current = 1
        for _ in range(rng.randint(0, 4)):
            current *= rng.choice([2, 2, 3, 5])
            factors.append(current)
        g = AbelianGroup.from_invariant_factors(rng.randint(0, 3), factors)
        k, c = to_prime_power_decomposition(g)
        assert from_prime_powers(k, c) == g
