from itertools import combinations

import pytest

from improperb.core import SetFamily, Witness, fano_plane, k_subsets, mask_of
from improperb.propb import (
    check_witness,
    find_property_b_witness,
    find_property_bj_witness,
    has_property_b,
    has_property_bj,
)

from conftest import (
    brute_property_b,
    brute_property_bj,
    brute_property_bj_fast,
    brute_two_colourable,
    random_family,
)

TRIANGLE = SetFamily.from_lists(2, 3, [[1, 2], [1, 3], [2, 3]])


def test_triangle_has_no_witness():
    assert find_property_b_witness(TRIANGLE) is None


def test_empty_family_witness_is_empty_set():
    w = find_property_b_witness(SetFamily(2, 4, ()))
    assert w == Witness((0,), single=True)
    wj = find_property_bj_witness(SetFamily(2, 4, ()), 3)
    assert wj.sets == (0, 0, 0)
    assert check_witness(SetFamily(2, 4, ()), wj, 3)


def test_fano_has_no_witness():
    assert not brute_property_b(fano_plane())
    assert find_property_b_witness(fano_plane()) is None


def test_bj_single_pair():
    F = SetFamily.from_lists(2, 3, [[1, 2]])
    assert not brute_property_bj(F, 3)
    assert find_property_bj_witness(F, 3) is None
    w = find_property_bj_witness(SetFamily.from_lists(2, 2, [[1, 2]]), 2)
    assert sorted(w.sets) == [mask_of([1]), mask_of([2])]


def test_bj_range():
    with pytest.raises(ValueError):
        find_property_bj_witness(TRIANGLE, 1)
    with pytest.raises(ValueError):
        find_property_bj_witness(TRIANGLE, 4)


def test_check_witness_examples():
    assert not check_witness(TRIANGLE, Witness((mask_of([1]),), single=True))
    for b in range(1 << 7):
        assert not check_witness(fano_plane(), Witness((b,), single=True))
    F = SetFamily.from_lists(2, 4, [[1, 2], [3, 4]])
    assert check_witness(F, Witness((mask_of([1, 3]),), single=True))


def test_deterministic_witness():
    F = SetFamily.from_lists(2, 4, [[1, 2], [3, 4]])
    # lowest element branches "outside B" first
    assert find_property_b_witness(F).sets == (mask_of([2, 4]),)
    assert find_property_b_witness(F) == find_property_b_witness(F)


def _all_families(k, ell, max_size):
    pool = k_subsets(k, ell)
    for size in range(max_size + 1):
        for sets in combinations(pool, size):
            yield SetFamily(k, ell, sets)


@pytest.mark.parametrize("ell", [1, 2, 3, 4, 5])
def test_soundness_exhaustive(ell):
    for k in range(1, min(3, ell) + 1):
        for F in _all_families(k, ell, 6):
            w = find_property_b_witness(F)
            assert (w is not None) == brute_property_b(F)
            if w is not None:
                assert check_witness(F, w)
            for j in range(2, min(ell, 3) + 1):
                wj = find_property_bj_witness(F, j)
                if wj is not None:
                    assert check_witness(F, wj, j)


def test_exhaustive_small_bj():
    for ell in range(2, 5):
        for k in range(1, ell + 1):
            for F in _all_families(k, ell, 4):
                for j in range(2, ell + 1):
                    assert has_property_bj(F, j) == brute_property_bj(F, j)


def test_random_oracle_equivalence(rng):
    for _ in range(10_000):
        ell = rng.randint(2, 9)
        k = rng.randint(2, min(ell, 4))
        F = random_family(rng, k, ell, rng.randint(0, 14))
        assert has_property_b(F) == brute_property_b(F)


def test_brute_force_forms_agree(rng):
    for _ in range(300):
        ell = rng.randint(3, 5)
        k = rng.randint(2, min(ell, 4))
        j = rng.randint(2, 3)
        F = random_family(rng, k, ell, rng.randint(0, 8))
        assert brute_property_bj(F, j) == brute_property_bj_fast(F, j)


def test_random_bj_oracle_equivalence(rng):
    for _ in range(10_000):
        j = rng.randint(2, 3)
        ell = rng.randint(j, 9 if j == 2 else 7)
        k = rng.randint(2, min(ell, 4))
        F = random_family(rng, k, ell, rng.randint(0, 10))
        assert has_property_bj(F, j) == brute_property_bj_fast(F, j)


def test_b2_equals_b(rng):
    for _ in range(2000):
        ell = rng.randint(2, 8)
        k = rng.randint(1, min(ell, 4))
        F = random_family(rng, k, ell, rng.randint(0, 12))
        assert has_property_bj(F, 2) == has_property_b(F)


def test_matches_hypergraph_two_colouring(rng):
    for _ in range(2000):
        ell = rng.randint(2, 9)
        k = rng.randint(2, min(ell, 4))
        F = random_family(rng, k, ell, rng.randint(0, 14))
        assert has_property_b(F) == brute_two_colourable(F)


def test_monotone_under_subfamilies(rng):
    checked = 0
    while checked < 500:
        ell = rng.randint(3, 8)
        k = rng.randint(2, min(ell, 4))
        big = random_family(rng, k, ell, rng.randint(1, 12))
        w = find_property_b_witness(big)
        if w is None:
            continue
        sub = SetFamily(k, ell, tuple(rng.sample(big.sets, rng.randint(0, len(big)))))
        assert check_witness(sub, w)
        assert has_property_b(sub)
        checked += 1
