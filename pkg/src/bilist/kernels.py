"""Backend selection for the search kernels.

The compiled module is used when it imports and every mask involved fits in
64 bits; otherwise the pure-Python module runs.  Setting the environment
variable ``BILIST_PURE=1`` forces the pure-Python path.
"""

import os

from bilist import _pykernels as _py
from bilist._pykernels import NodeLimit, bits, mask_of  # noqa: F401

_c = None
if os.environ.get("BILIST_PURE", "") not in ("1", "true", "yes"):
    try:
        from bilist import _ckernels as _c
    except ImportError:  # extension not built
        _c = None

BACKEND = "cython" if _c is not None else "python"
WIDTH = 63  # masks must stay below bit 63 so that 1 << u never overflows


def _narrow(*groups):
    if _c is None:
        return False
    for g in groups:
        for m in g:
            if m >> WIDTH:
                return False
    return True


def separator(a_masks, b_masks, palette):
    a_masks = list(a_masks)
    b_masks = list(b_masks)
    if palette <= WIDTH and _narrow(a_masks, b_masks):
        return _c.separator(a_masks, b_masks, palette)
    return _py.separator(a_masks, b_masks, palette)


def hitting_set(blocks, k):
    blocks = list(blocks)
    if _narrow(blocks):
        return _c.hitting_set(blocks, k)
    return _py.hitting_set(blocks, k)


def minimal_transversals(edges, cap=10**6):
    edges = list(edges)
    if _narrow(edges):
        return _c.minimal_transversals(edges, cap)
    return _py.minimal_transversals(edges, cap)


def cover(elements, k, limit, max_nodes=None):
    elements = list(elements)
    if _narrow(elements):
        return _c.cover(elements, k, limit, max_nodes)
    return _py.cover(elements, k, limit, max_nodes)


def canonical_family(masks):
    masks = list(masks)
    if len(masks) <= WIDTH and _narrow(masks):
        return _c.canonical_family(masks)
    return _py.canonical_family(masks)


def extend_family(prefix, u, nmax, kb):
    if _c is not None and nmax <= WIDTH and len(prefix) < WIDTH:
        return _c.extend_family(prefix, u, nmax, kb)
    return _py.extend_family(prefix, u, nmax, kb)


def scan_extensions(prefix, u, n, kb, ka, limit):
    if _c is not None and n <= WIDTH:
        return _c.scan_extensions(prefix, u, n, kb, ka, limit)
    return _py.scan_extensions(prefix, u, n, kb, ka, limit)
