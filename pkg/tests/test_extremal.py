import math
from itertools import combinations, permutations

import pytest

from improperb.core import SetFamily, elements, fano_plane, k_subsets
from improperb.extremal import (
    ExtremalResult,
    SearchBudget,
    _perm_table,
    bound_shape_m,
    bound_shape_mj,
    compute_m,
    compute_mj,
    is_canonical,
)

from conftest import brute_property_b, brute_property_bj, random_family


def _isomorphic(F: SetFamily, G: SetFamily) -> bool:
    if (F.k, F.ell, len(F)) != (G.k, G.ell, len(G)):
        return False
    target = set(G.sets)
    for perm in permutations(range(F.ell)):
        img = {sum(1 << perm[c - 1] for c in elements(s)) for s in F.sets}
        if img == target:
            return True
    return False


def _brute_min_failing(k, ell, has_property, max_size):
    """Smallest family size without the property, by plain subset enumeration."""
    pool = k_subsets(k, ell)
    for size in range(1, max_size + 1):
        for sets in combinations(pool, size):
            if not has_property(SetFamily(k, ell, sets)):
                return size
    return None


@pytest.mark.parametrize("k, ell, value", [(2, 3, 3), (3, 5, 10)])
def test_formula_values(k, ell, value):
    assert value == math.comb(2 * k - 1, k)
    res = compute_m(k, ell)
    assert (res.status, res.value) == ("exact", value)
    assert res.certificate == SetFamily.complete(k, ell)


@pytest.mark.parametrize("k, ell", [(2, 2), (3, 4), (4, 6), (3, 3)])
def test_infinite_below_2k_minus_1(k, ell):
    res = compute_m(k, ell)
    assert res.status == "infinite"
    assert res.certificate is None
    assert brute_property_b(SetFamily.complete(k, ell))


def test_fano_value_and_certificate():
    res = compute_m(3, 7)
    assert (res.status, res.value) == ("exact", 7)
    assert _isomorphic(res.certificate, fano_plane())
    assert not brute_property_b(res.certificate)


def test_fano_oracle_all_six_families_have_property_b():
    """Plain enumeration of all C(35,6) families of triples against 2^7 candidate sets B."""
    pool = k_subsets(3, 7)
    good = []
    for s in pool:
        m = 0
        for b in range(128):
            if s & b and s & ~b:
                m |= 1 << b
        good.append(m)
    for fam in combinations(range(len(pool)), 6):
        acc = good[fam[0]]
        for i in fam[1:]:
            acc &= good[i]
        assert acc, [elements(pool[i]) for i in fam]
    assert not brute_property_b(fano_plane())


def test_mj_small_values_against_brute_force():
    res = compute_mj(3, 2, 3)
    assert (res.status, res.value) == ("exact", 1)
    assert res.certificate == SetFamily.from_lists(2, 3, [[1, 2]])
    assert _brute_min_failing(2, 3, lambda F: brute_property_bj(F, 3), 3) == 1
    assert compute_mj(2, 2, 2).status == "infinite"
    value = compute_mj(3, 3, 5).value
    assert value == _brute_min_failing(3, 5, lambda F: brute_property_bj(F, 3), 10)


@pytest.mark.parametrize("k, ell", [(2, 3), (2, 4), (2, 5), (2, 6), (3, 4), (3, 5), (3, 6), (3, 7), (4, 6)])
def test_mj2_equals_m(k, ell):
    a, b = compute_m(k, ell), compute_mj(2, k, ell)
    assert (a.status, a.value) == (b.status, b.value)


def test_m2_is_three():
    for ell in range(3, 8):
        res = compute_m(2, ell)
        assert res.value == 3
        assert _isomorphic(res.certificate, SetFamily.complete(2, 3).__class__.from_lists(
            2, ell, [[1, 2], [1, 3], [2, 3]]))


def test_nonincreasing_in_ell():
    for k, top in ((2, 8), (3, 7)):
        values = []
        for ell in range(k, top + 1):
            r = compute_m(k, ell)
            values.append(math.inf if r.status == "infinite" else r.value)
        assert all(a >= b for a, b in zip(values, values[1:])), values


def test_small_values_match_plain_enumeration():
    for k, ell in [(2, 3), (2, 4), (2, 5), (3, 5)]:
        expected = _brute_min_failing(k, ell, brute_property_b, math.comb(ell, k))
        assert compute_m(k, ell).value == expected


@pytest.mark.parametrize("k, ell", [(2, 4), (3, 5), (3, 6), (3, 7)])
def test_certificate_is_critical(k, ell, rng):
    res = compute_m(k, ell)
    cert = res.certificate
    assert len(cert) == res.value
    assert not brute_property_b(cert)
    for s in cert.sets:
        assert brute_property_b(SetFamily(k, ell, tuple(x for x in cert.sets if x != s)))
    for _ in range(300):
        assert brute_property_b(random_family(rng, k, ell, res.value - 1))


def test_budget_gives_sound_lower_bound():
    res = compute_m(3, 7, SearchBudget(max_nodes=50))
    assert res.status == "unknown"
    assert res.value is None
    assert 1 <= res.lower_bound <= 7
    capped = compute_m(3, 7, SearchBudget(max_family_size=4))
    assert capped.status == "unknown" and capped.lower_bound == 5


def test_threads_do_not_change_result():
    a = compute_m(3, 6)
    b = compute_m(3, 6, threads=2)
    assert a == b
    assert compute_mj(3, 3, 6, threads=2) == compute_mj(3, 3, 6)


def test_parameter_errors():
    with pytest.raises(ValueError):
        compute_m(1, 3)
    with pytest.raises(ValueError):
        compute_m(4, 3)
    with pytest.raises(ValueError):
        compute_mj(4, 2, 3)
    with pytest.raises(ValueError):
        SearchBudget(max_nodes=0)


def test_canonical_form():
    table = _perm_table(2, 4)
    sets = k_subsets(2, 4)
    idx = {s: i for i, s in enumerate(sets)}
    path = tuple(sorted(idx[s] for s in SetFamily.from_lists(2, 4, [[1, 2], [1, 3]]).sets))
    other = tuple(sorted(idx[s] for s in SetFamily.from_lists(2, 4, [[3, 4], [2, 4]]).sets))
    assert is_canonical(path, table)
    assert not is_canonical(other, table)


def test_result_json():
    out = compute_m(2, 3).to_json()
    assert out["value"] == 3 and out["certificate"] == [[1, 2], [1, 3], [2, 3]]
    assert ExtremalResult("infinite", None, 0, None, 0).to_json()["value"] == "infinite"


def test_bound_shapes():
    assert bound_shape_m(2) == pytest.approx((math.sqrt(2 / math.log(2)) * 4, 16))
    assert bound_shape_m(3) == pytest.approx((math.sqrt(3 / math.log(3)) * 8, 72))
    lows, highs = zip(*(bound_shape_m(k) for k in range(2, 30)))
    assert all(a < b for a, b in zip(lows, lows[1:]))
    assert all(a < b for a, b in zip(highs, highs[1:]))
    for k in range(2, 20):
        assert bound_shape_mj(2, k)[1] == pytest.approx(k * k * 2 ** k * math.log(2))
    assert bound_shape_mj(2, 3)[0] == pytest.approx(0.5 * (3 / (2 * math.log(3))) ** (1 / 3) * 8)
    for j in range(2, 21):
        for k in range(2, 21):
            lo, hi = bound_shape_mj(j, k)
            assert 0 < lo < math.inf and 0 < hi < math.inf
