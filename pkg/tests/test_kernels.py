"""Both kernel backends against each other and against brute force."""

import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from bilist import _pykernels as py
from bilist import kernels
from bilist.kernels import bits, mask_of

BACKENDS = [pytest.param(py, id="python")]
if kernels._c is not None:
    BACKENDS.append(pytest.param(kernels._c, id="cython"))


def rand_masks(rng, count, k, palette):
    return [mask_of(rng.sample(range(palette), k)) for _ in range(count)]


def test_backend_flag():
    assert kernels.BACKEND in ("cython", "python")
    assert (kernels._c is not None) == (kernels.BACKEND == "cython")


@pytest.mark.parametrize("mod", BACKENDS)
@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_separator_matches_subset_enumeration(mod, seed):
    rng = random.Random(seed)
    palette = rng.randint(2, 8)
    ka, kb = rng.randint(1, min(3, palette)), rng.randint(1, min(3, palette))
    la = [rng.sample(range(palette), ka) for _ in range(rng.randint(1, 8))]
    lb = [rng.sample(range(palette), kb) for _ in range(rng.randint(1, 4))]
    s = mod.separator([mask_of(x) for x in la], [mask_of(x) for x in lb], palette)
    assert (s is not None) == oracles.separator_exists(la, lb, palette)
    if s is not None:
        assert all(s & mask_of(x) for x in la)
        assert all(mask_of(x) & ~s for x in lb)


@pytest.mark.parametrize("mod", BACKENDS)
@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_minimal_transversals_match_brute_force(mod, seed):
    rng = random.Random(seed)
    n = rng.randint(1, 6)
    edges = [rng.sample(range(n), rng.randint(1, n)) for _ in range(rng.randint(1, 6))]
    got = sorted(tuple(bits(t)) for t in mod.minimal_transversals([mask_of(e) for e in edges]))
    assert got == oracles.minimal_transversals(n, edges)


@pytest.mark.parametrize("mod", BACKENDS)
@settings(max_examples=120, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_cover_is_optimal(mod, seed):
    rng = random.Random(seed)
    n = rng.randint(3, 7)
    k = rng.randint(1, 3)
    trs = {tuple(sorted(rng.sample(range(n), rng.randint(k, min(n, k + 2))))) for _ in range(rng.randint(1, 12))}
    trs = sorted(trs)
    masks = [mask_of(t) for t in trs]
    fam = mod.cover(masks, k, len(masks))
    best = oracles.min_cover(trs, k, n)
    assert fam is not None and len(fam) == best
    assert all(f.bit_count() == k for f in fam)
    assert all(any(f & t == f for f in fam) for t in masks)
    # a tighter limit must fail
    if best > 0:
        assert mod.cover(masks, k, best - 1) is None


@pytest.mark.parametrize("mod", BACKENDS)
@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_hitting_set(mod, seed):
    rng = random.Random(seed)
    n = rng.randint(2, 8)
    k2 = rng.randint(1, n)
    blocks = sorted({tuple(sorted(rng.sample(range(n), k2))) for _ in range(rng.randint(1, 10))})
    k1 = rng.randint(1, n)
    h = mod.hitting_set([mask_of(b) for b in blocks], k1)
    assert (h is not None) == oracles.has_property_a(n, blocks, k1)
    if h is not None:
        assert h.bit_count() <= k1 and all(h & mask_of(b) for b in blocks)


@pytest.mark.skipif(kernels._c is None, reason="compiled kernels not built")
@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_canonical_family_backends_agree(seed):
    rng = random.Random(seed)
    masks = rand_masks(rng, rng.randint(1, 6), rng.randint(1, 3), rng.randint(3, 9))
    assert kernels._c.canonical_family(masks)[0] == py.canonical_family(masks)[0]
    # invariance under a colour relabelling and list reordering
    perm = list(range(9))
    rng.shuffle(perm)
    moved = [mask_of(perm[c] for c in bits(m)) for m in masks]
    rng.shuffle(moved)
    assert py.canonical_family(moved)[0] == py.canonical_family(masks)[0]


@pytest.mark.skipif(kernels._c is None, reason="compiled kernels not built")
@pytest.mark.parametrize("n,kb", [(4, 2), (6, 2), (6, 3), (7, 3)])
def test_extend_family_backends_agree(n, kb):
    prefix = [mask_of(range(kb))]
    got_c = kernels._c.extend_family(prefix, kb, n, kb)
    got_p = py.extend_family(prefix, kb, n, kb)
    assert got_c == got_p


@pytest.mark.skipif(kernels._c is None, reason="compiled kernels not built")
def test_dispatch_falls_back_for_wide_masks():
    wide = [1 << 70 | 1, 1 << 65 | 2]
    assert kernels.minimal_transversals(wide) == py.minimal_transversals(wide)


def test_node_limit_raised():
    trs = py.minimal_transversals([mask_of(range(j * 3, j * 3 + 3)) for j in range(3)])
    with pytest.raises(kernels.NodeLimit):
        kernels.cover(trs, 2, 27, max_nodes=2)
    assert len(kernels.cover(trs, 2, 27)) == 9
