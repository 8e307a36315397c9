"""Property A and the extremal number M-bar(k1, k2, l).

A family of k2-subsets of [l] has Property A(k1, k2, l) when some k1-set
meets every block.  M-bar(k1, k2, l) is the least size of a family without
it.  A k1-set S misses block F exactly when F lies inside [l] minus S, so a
family lacks Property A iff every complement [l] - S (|S| = k1) contains a
block: M-bar is a set-cover number, solved here with the exact cover kernel.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import mpmath
import numpy as np

from bilist import kernels
from bilist.core import Malformed, RetryExhausted, TooLarge
from bilist.kernels import NodeLimit, bits, mask_of

RNG_ALGORITHM = "numpy.PCG64/SeedSequence"


@dataclass(frozen=True)
class SetFamily:
    ground_size: int
    block_size: int
    blocks: tuple  # bitmasks, sorted, distinct

    def __post_init__(self):
        bl = sorted(set(int(b) for b in self.blocks))
        for b in bl:
            if b.bit_count() != self.block_size:
                raise ValueError(f"block {bits(b)} does not have {self.block_size} elements")
            if b >> self.ground_size:
                raise ValueError(f"block {bits(b)} leaves the ground set [{self.ground_size}]")
        object.__setattr__(self, "blocks", tuple(bl))

    @classmethod
    def from_sets(cls, ground_size, block_size, sets):
        return cls(ground_size, block_size, tuple(mask_of(s) for s in sets))

    def as_sets(self):
        return [bits(b) for b in self.blocks]

    def __len__(self):
        return len(self.blocks)

    def to_text(self):
        lines = [f"{self.ground_size} {self.block_size} {len(self.blocks)}"]
        lines += [" ".join(str(x) for x in s) for s in sorted(self.as_sets())]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        rows = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        if not rows:
            raise Malformed("empty set-family text", 1, 1)
        try:
            l, k2, m = (int(x) for x in rows[0].split())
        except ValueError:
            raise Malformed("header must be 'l k2 m'", 1, 1) from None
        if len(rows) - 1 != m:
            raise Malformed(f"header announces {m} blocks, found {len(rows) - 1}", 1, 1)
        sets = []
        for n, r in enumerate(rows[1:], start=2):
            try:
                sets.append([int(x) for x in r.split()])
            except ValueError:
                raise Malformed("block lines hold integers", n, 1) from None
        return cls.from_sets(l, k2, sets)


def fano_lines():
    return [(0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5)]


def fano_complements() -> SetFamily:
    return SetFamily.from_sets(7, 4, [[x for x in range(7) if x not in ln] for ln in fano_lines()])


def has_property_a(family: SetFamily, k1: int):
    """A k1-subset of [l] meeting every block, or None."""
    if k1 > family.ground_size:
        raise ValueError("k1 exceeds the ground set")
    if not family.blocks:
        return frozenset(range(k1))
    h = kernels.hitting_set(family.blocks, k1)
    if h is None:
        return None
    s = set(bits(h))
    for x in range(family.ground_size):
        if len(s) >= k1:
            break
        s.add(x)
    return frozenset(s)


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MbarBounds:
    k1: int
    k2: int
    l: int
    lower: Fraction
    upper: Fraction  # rational just above the real upper bound (outward rounded)
    exact: int | None = None

    @property
    def lower_int(self):
        return math.ceil(self.lower)

    @property
    def upper_int(self):
        # the real bound is strict, so the integer value is at most floor(upper)
        return math.floor(self.upper)


def mbar_lower(k1, k2, l) -> Fraction:
    return Fraction(math.factorial(l) * math.factorial(l - k1 - k2),
                    math.factorial(l - k2) * math.factorial(l - k1))


def mbar_bounds(k1, k2, l, exact=None) -> MbarBounds:
    if l < k1 + k2:
        raise ValueError("need l >= k1 + k2")
    lo = mbar_lower(k1, k2, l)
    with mpmath.workdps(40):
        up = mpmath.mpf(lo.numerator) / lo.denominator * mpmath.log(math.comb(l, k1))
        # round outward to a rational slightly above
        up_frac = Fraction(int(mpmath.ceil(up * 10**30)), 10**30)
    return MbarBounds(k1, k2, l, lo, up_frac, exact)


# ---------------------------------------------------------------------------
# exact value
# ---------------------------------------------------------------------------

@dataclass
class MbarResult:
    k1: int
    k2: int
    l: int
    value: int | None
    family: SetFamily | None
    lower: int
    upper: int | None
    note: dict

    @property
    def exact(self):
        return self.value is not None


def _complement_elements(k1, l):
    full = (1 << l) - 1
    return [full & ~mask_of(s) for s in combinations(range(l), k1)]


def _second_block_reps(k2, l):
    """One block per orbit of the stabiliser of {0..k2-1}: by overlap size."""
    first = list(range(k2))
    rest = list(range(k2, l))
    reps = []
    for i in range(k2 - 1, -1, -1):
        need = k2 - i
        if need > len(rest):
            continue
        reps.append(mask_of(first[:i] + rest[:need]))
    return reps


def _feasible(elements, k2, l, m, max_nodes):
    """Family of at most m blocks, every element containing a block, or None."""
    b0 = mask_of(range(k2))
    if m < 1:
        return None
    rest0 = [e for e in elements if e & b0 != b0]
    if not rest0:
        return [b0]
    if m < 2:
        return None
    nodes = 0
    for b1 in _second_block_reps(k2, l):
        rest = [e for e in rest0 if e & b1 != b1]
        if not rest:
            return [b0, b1]
        try:
            cov = kernels.cover(rest, k2, m - 2, max_nodes)
        except NodeLimit:
            raise
        if cov is not None:
            return [b0, b1] + cov
    return None


def mbar_exact(k1, k2, l, max_nodes=None, timeout=None) -> MbarResult:
    """Least size of a k2-uniform family on [l] lacking Property A(k1).

    Iterative deepening on the size from the lower bound.  Each size is a
    depth-limited exact cover search after fixing the first block and one
    representative per orbit of the second block.  When the node or time
    budget runs out the result carries a bracket and ``value`` is None.
    """
    if not (1 <= k1 and 1 <= k2 and k1 + k2 <= l):
        raise ValueError("need k1, k2 >= 1 and l >= k1 + k2")
    bnd = mbar_bounds(k1, k2, l)
    elements = _complement_elements(k1, l)
    lo = max(1, bnd.lower_int)
    hi_known = None
    hi_family = None
    deadline = None if timeout is None else time.monotonic() + timeout
    t0 = time.monotonic()
    note = {"sizes_refuted": [], "backend": kernels.BACKEND}
    m = lo
    while True:
        if deadline is not None and time.monotonic() > deadline:
            break
        try:
            fam = _feasible(elements, k2, l, m, max_nodes)
        except NodeLimit:
            note["node_cap_at"] = m
            break
        if fam is not None:
            family = SetFamily(l, k2, tuple(fam))
            if has_property_a(family, k1) is not None:
                raise AssertionError("cover search returned a family with Property A")
            note["seconds"] = round(time.monotonic() - t0, 3)
            return MbarResult(k1, k2, l, len(family), family, len(family), len(family), note)
        note["sizes_refuted"].append(m)
        m += 1
    # bracket: everything below m is refuted; a random family gives an upper bound
    try:
        rf = random_family_upper(k1, k2, l, seed=0, retries=50)
        hi_known, hi_family = len(rf), rf
    except RetryExhausted:
        hi_known = math.comb(l, k2)
    note["seconds"] = round(time.monotonic() - t0, 3)
    return MbarResult(k1, k2, l, None, hi_family, m, min(hi_known, bnd.upper_int) if hi_family is None else hi_known, note)


# ---------------------------------------------------------------------------
# random construction from the upper-bound argument
# ---------------------------------------------------------------------------

def random_family_upper(k1, k2, l, seed=0, retries=100) -> SetFamily:
    """m = ceil(upper bound) uniform random k2-blocks, redrawn until the
    family lacks Property A(k1).  Seeds for retries are spawned from ``seed``."""
    bnd = mbar_bounds(k1, k2, l)
    m = math.ceil(bnd.upper)
    ss = np.random.SeedSequence(seed)
    children = ss.spawn(retries)
    for child in children:
        rng = np.random.Generator(np.random.PCG64(child))
        blocks = []
        for _ in range(m):
            blocks.append(mask_of(int(x) for x in rng.choice(l, size=k2, replace=False)))
        fam = SetFamily(l, k2, tuple(blocks))
        if has_property_a(fam, k1) is None:
            return fam
    raise RetryExhausted(f"no family without Property A({k1},{k2},{l}) in {retries} draws of {m} blocks")
