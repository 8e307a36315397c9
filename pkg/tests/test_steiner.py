import math
from fractions import Fraction
from itertools import combinations

import mpmath
import pytest

import oracles
from bilist.core import Malformed, RetryExhausted
from bilist.steiner import (
    SetFamily,
    fano_complements,
    fano_lines,
    has_property_a,
    mbar_bounds,
    mbar_exact,
    random_family_upper,
)

GRID = [(k1, k2, l) for l in range(4, 9) for k1 in range(2, l) for k2 in range(2, l) if k1 + k2 <= l]


@pytest.fixture(scope="module")
def grid_results():
    return {p: mbar_exact(*p, max_nodes=10**7) for p in GRID}


def test_property_a_examples():
    fam = SetFamily.from_sets(5, 2, [[0, 1], [0, 2], [0, 3]])
    assert has_property_a(fam, 1) == frozenset({0})
    assert has_property_a(SetFamily.from_sets(4, 2, [[0, 1], [2, 3]]), 1) is None
    assert has_property_a(fano_complements(), 2) is None
    assert has_property_a(fano_complements(), 3) is not None


def test_fano_lines_form_a_steiner_triple_system():
    seen = set()
    for ln in fano_lines():
        for pair in combinations(ln, 2):
            assert pair not in seen
            seen.add(pair)
    assert len(seen) == math.comb(7, 2)


@pytest.mark.parametrize("k1,k2,l,value", [(1, 2, 4, 2), (2, 3, 5, 10), (2, 4, 7, 7)])
def test_mbar_examples(k1, k2, l, value):
    res = mbar_exact(k1, k2, l)
    assert res.exact and res.value == value
    assert len(res.family) == value
    assert has_property_a(res.family, k1) is None


def test_fano_family_is_extremal():
    res = mbar_exact(2, 4, 7)
    # the returned family is a line-complement family of a Fano plane:
    # each pair of points lies outside exactly one block
    for pair in combinations(range(7), 2):
        assert sum(1 for b in res.family.as_sets() if not set(pair) & set(b)) == 1


def test_bounds_examples():
    bd = mbar_bounds(2, 4, 7)
    assert bd.lower == 7 and bd.lower_int == 7
    with mpmath.workdps(50):
        true_upper = 7 * mpmath.log(21)
        gap = mpmath.mpf(bd.upper.numerator) / bd.upper.denominator - true_upper
    assert 0 <= gap < mpmath.mpf(10) ** -29  # rounded outward, and only just
    assert abs(float(bd.upper) - 21.31) < 0.01
    assert bd.upper_int == 21
    for k1, k2 in [(2, 2), (2, 3), (3, 3), (3, 5)]:
        assert mbar_bounds(k1, k2, k1 + k2).lower == math.comb(k1 + k2, k1)
    assert isinstance(mbar_bounds(3, 3, 8).lower, Fraction)
    with pytest.raises(ValueError):
        mbar_bounds(3, 3, 5)


def test_sandwich_on_grid(grid_results):
    for (k1, k2, l), res in grid_results.items():
        bd = mbar_bounds(k1, k2, l)
        if res.exact:
            assert bd.lower <= res.value <= bd.upper
        else:
            assert bd.lower <= res.lower and res.upper <= bd.upper


def test_whole_grid_is_exact(grid_results):
    assert all(r.exact for r in grid_results.values())


def test_complement_duality(grid_results):
    for l in range(4, 9):
        for k2 in range(2, l - 1):
            res = grid_results[(l - k2, k2, l)]
            assert res.value == math.comb(l, k2)


def test_extremal_families_lack_property_a(grid_results):
    for (k1, k2, l), res in grid_results.items():
        assert res.family.ground_size == l and res.family.block_size == k2
        assert has_property_a(res.family, k1) is None
        assert oracles.has_property_a(l, res.family.as_sets(), k1) is False


@pytest.mark.parametrize("k1,k2,l", [(1, 2, 4), (2, 2, 4), (2, 3, 5), (2, 2, 5), (2, 3, 6), (3, 2, 6),
                                     (2, 2, 6), (2, 4, 7), (3, 3, 6)])
def test_one_block_fewer_always_has_property_a(k1, k2, l):
    m = mbar_exact(k1, k2, l).value
    assert oracles.every_family_has_property_a(l, k2, k1, m - 1)
    assert not oracles.every_family_has_property_a(l, k2, k1, m)


def test_node_cap_returns_bracket():
    res = mbar_exact(3, 3, 8, max_nodes=1)
    assert not res.exact
    assert res.lower <= 14 <= res.upper  # the exact value from the uncapped run
    assert res.note["node_cap_at"] == res.lower


def test_random_family_upper():
    for args in [(1, 2, 6), (2, 4, 7), (2, 3, 6)]:
        fam = random_family_upper(*args, seed=3)
        assert has_property_a(fam, args[0]) is None
    fam = random_family_upper(2, 4, 7, seed=0)
    assert len(fam) <= 22
    assert random_family_upper(2, 3, 6, seed=42) == random_family_upper(2, 3, 6, seed=42)


def test_random_family_retry_exhausted():
    with pytest.raises(RetryExhausted):
        random_family_upper(2, 2, 8, seed=0, retries=0)


def test_text_round_trip():
    fam = fano_complements()
    text = fam.to_text()
    assert text.splitlines()[0] == "7 4 7"
    assert SetFamily.from_text(text) == fam
    with pytest.raises(Malformed):
        SetFamily.from_text("7 4 2\n0 1 2 3\n")
    with pytest.raises(Malformed):
        SetFamily.from_text("7 4 x\n")


def test_family_validation():
    with pytest.raises(ValueError):
        SetFamily.from_sets(4, 2, [[0, 1, 2]])
    with pytest.raises(ValueError):
        SetFamily.from_sets(3, 2, [[0, 5]])
    assert len(SetFamily.from_sets(4, 2, [[0, 1], [1, 0]])) == 1
