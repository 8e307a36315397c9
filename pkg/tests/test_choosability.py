import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from bilist.choosability import (
    Hypergraph,
    is_choosable_complete,
    minimal_transversals,
    threshold_a,
    transversal_cover_number,
)
from bilist.colorability import verify_certificate
from bilist.core import Infeasible, SearchTimeout, TooLarge, complete_certificate
from bilist.steiner import fano_complements


def test_transversals_examples():
    assert minimal_transversals(Hypergraph.from_sets(2, [[0], [1]])).as_sets() == [[0, 1]]
    got = sorted(minimal_transversals(Hypergraph.from_sets(4, [[0, 1], [2, 3]])).as_sets())
    assert got == [[0, 2], [0, 3], [1, 2], [1, 3]]


def test_fano_complement_transversals_have_size_at_least_three():
    fam = fano_complements()
    tr = minimal_transversals(Hypergraph(7, fam.blocks))
    assert min(len(t) for t in tr.as_sets()) >= 3
    # brute force: every pair misses some block
    for pair in combinations(range(7), 2):
        assert any(not set(pair) & set(b) for b in fam.as_sets())


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_dualisation_matches_brute_force(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 6)
    edges = [rng.sample(range(n), rng.randint(1, n)) for _ in range(rng.randint(1, 6))]
    tr = minimal_transversals(Hypergraph.from_sets(n, edges))
    assert tr.is_antichain()
    assert sorted(tuple(t) for t in tr.as_sets()) == oracles.minimal_transversals(n, edges)


def test_transversal_cap():
    h = Hypergraph.from_sets(12, [[2 * i, 2 * i + 1] for i in range(6)])
    with pytest.raises(TooLarge):
        minimal_transversals(h, cap=10)


def test_cover_examples():
    tr = minimal_transversals(Hypergraph.from_sets(4, [[0, 1], [2, 3]]))
    assert transversal_cover_number(tr, 2).count == 4
    assert transversal_cover_number(Hypergraph.from_sets(3, [[0, 1, 2]]), 2).count == 1
    fano_tr = minimal_transversals(Hypergraph(7, fano_complements().blocks))
    assert transversal_cover_number(fano_tr, 3).count == 28
    with pytest.raises(Infeasible):
        transversal_cover_number(Hypergraph.from_sets(3, [[0]]), 2)


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_cover_optimal_on_small_instances(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 7)
    k = rng.randint(1, 3)
    lists = [rng.sample(range(n), rng.randint(1, 3)) for _ in range(rng.randint(1, 4))]
    tr = minimal_transversals(Hypergraph.from_sets(n, lists))
    if len(tr.edges) > 20 or any(len(t) < k for t in tr.as_sets()):
        return
    res = transversal_cover_number(tr, k)
    assert res.count == oracles.min_cover(tr.as_sets(), k, n)
    assert all(any(set(f) <= set(t) for f in res.family_sets()) for t in tr.as_sets())


# ---------------------------------------------------------------------------
# thresholds
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("b,ka,kb,expected", [
    (2, 2, 2, 4), (2, 2, 3, 9), (3, 3, 2, 8),
    (1, 1, 1, 1), (1, 1, 3, 3), (1, 1, 5, 5),
    (3, 2, 2, 3), (4, 3, 2, 6), (4, 3, 3, 19),
])
def test_threshold_values(b, ka, kb, expected):
    res = threshold_a(b, ka, kb)
    assert res.a_star == expected
    assert res.proof_note["exhaustive"]
    assert res.witness.graph.a_size == expected
    assert verify_certificate(res.witness).verified


def test_threshold_unbounded():
    res = threshold_a(2, 3, 2)
    assert res.unbounded and res.witness is None


def test_threshold_minus_one_is_colourable_for_every_family():
    # independent route for (b, k_a, k_b) = (2, 2, 2): every pair of B-lists over
    # at most 4 colours and every 3 A-pairs admit a colouring
    pairs = list(combinations(range(4), 2))
    for lb in combinations(pairs, 2):
        for la in combinations(pairs, 3):
            assert oracles.complete_colourable(la, lb)


GRID = [(b, ka, kb) for b in (1, 2, 3) for ka in (1, 2, 3) for kb in (1, 2, 3) if ka <= b]


@pytest.fixture(scope="module")
def grid_values():
    return {p: threshold_a(*p).a_star for p in GRID}


def test_threshold_monotone(grid_values):
    for (b, ka, kb), v in grid_values.items():
        for (b2, ka2, kb2), w in grid_values.items():
            if (b2, ka2, kb2) == (b + 1, ka, kb):
                assert w <= v
            if (b2, ka2, kb2) == (b, ka + 1, kb):
                assert w >= v
            if (b2, ka2, kb2) == (b, ka, kb + 1):
                assert w >= v


@pytest.mark.parametrize("a,b,ka,kb,answer", [
    (3, 2, 2, 2, "YES"), (4, 2, 2, 2, "NO"), (5, 4, 3, 2, "YES"), (6, 4, 3, 2, "NO"), (9, 4, 3, 2, "NO"),
])
def test_is_choosable_complete(a, b, ka, kb, answer):
    d = is_choosable_complete(a, b, ka, kb)
    assert d.answer == answer
    if answer == "NO":
        assert d.witness.graph.a_size == a
        assert verify_certificate(d.witness).verified


def test_no_answer_is_consistent_with_threshold():
    for b, ka, kb in [(3, 2, 2), (3, 3, 2), (2, 2, 3)]:
        t = threshold_a(b, ka, kb).a_star
        assert is_choosable_complete(t - 1, b, ka, kb).choosable
        assert not is_choosable_complete(t, b, ka, kb).choosable


def test_jobs_do_not_change_results():
    r1 = threshold_a(3, 3, 2, jobs=1)
    r2 = threshold_a(3, 3, 2, jobs=2)
    assert r1.a_star == r2.a_star
    assert r1.witness == r2.witness


def test_timeout_reports_bracket():
    with pytest.raises(SearchTimeout) as exc:
        threshold_a(7, 3, 4, timeout=0.05)
    assert exc.value.lower is not None and exc.value.lower >= 1


def test_partial_palette_is_a_bracket():
    with pytest.raises(SearchTimeout):
        is_choosable_complete(2, 3, 2, 2, palette_cap=2)


def test_witness_is_least_colour_search_certificate():
    res = threshold_a(2, 2, 2)
    cert = complete_certificate(res.witness.assignment.lists_a, res.witness.assignment.lists_b, "SEARCH")
    assert cert.assignment == res.witness.assignment
