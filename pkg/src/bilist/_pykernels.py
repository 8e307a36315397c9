"""Pure-Python search kernels.

Every set is a Python int bitmask (bit ``i`` set means element ``i`` is in
the set), so there is no width limit.  The Cython module ``_ckernels``
exposes the same functions with the same semantics for masks narrower than
64 bits; ``bilist.kernels`` picks between the two.
"""

from __future__ import annotations

from itertools import combinations, permutations, product


class NodeLimit(Exception):
    """A search exceeded its node budget."""


def bits(mask):
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mask_of(items):
    m = 0
    for x in items:
        m |= 1 << x
    return m


# ---------------------------------------------------------------------------
# separator search (complete bipartite colourability)
# ---------------------------------------------------------------------------

def separator(a_masks, b_masks, palette):
    """Return S with S & a != 0 for all A-lists and ~S & b != 0 for all B-lists.

    DPLL over colours: A-lists are positive clauses (some colour in S),
    B-lists negative clauses (some colour outside S).  Returns None when no
    such S exists.
    """
    full = (1 << palette) - 1
    pos = sorted(set(a_masks))
    neg = sorted(set(b_masks))
    if any(c == 0 for c in pos) or any(c == 0 for c in neg):
        return None
    return _dpll(pos, neg, 0, 0, full)


def _propagate(pos, neg, ins, outs):
    changed = True
    while changed:
        changed = False
        for c in pos:
            if c & ins:
                continue
            free = c & ~outs
            if not free:
                return None
            if free & (free - 1) == 0:
                ins |= free
                changed = True
        for c in neg:
            if c & outs:
                continue
            free = c & ~ins
            if not free:
                return None
            if free & (free - 1) == 0:
                outs |= free
                changed = True
    return ins, outs


def _dpll(pos, neg, ins, outs, full):
    res = _propagate(pos, neg, ins, outs)
    if res is None:
        return None
    ins, outs = res
    best = None
    best_width = None
    positive = True
    for c in pos:
        if c & ins:
            continue
        w = (c & ~outs).bit_count()
        if best_width is None or w < best_width:
            best, best_width, positive = c & ~outs, w, True
    for c in neg:
        if c & outs:
            continue
        w = (c & ~ins).bit_count()
        if best_width is None or w < best_width:
            best, best_width, positive = c & ~ins, w, False
    if best is None:
        return ins
    x = best & -best
    if positive:
        order = ((ins | x, outs), (ins, outs | x))
    else:
        order = ((ins, outs | x), (ins | x, outs))
    for i2, o2 in order:
        r = _dpll(pos, neg, i2, o2, full)
        if r is not None:
            return r
    return None


# ---------------------------------------------------------------------------
# hitting sets / Property A
# ---------------------------------------------------------------------------

def hitting_set(blocks, k):
    """Smallest-first DFS for a set of at most k elements meeting every block."""
    blocks = sorted(set(blocks))
    if any(b == 0 for b in blocks):
        return None

    def rec(chosen, depth):
        for blk in blocks:
            if not blk & chosen:
                break
        else:
            return chosen
        if depth == k:
            return None
        for x in bits(blk):
            r = rec(chosen | (1 << x), depth + 1)
            if r is not None:
                return r
        return None

    return rec(0, 0)


# ---------------------------------------------------------------------------
# minimal transversals (Berge dualisation)
# ---------------------------------------------------------------------------

def minimize(sets):
    """Drop every set that strictly contains another; result sorted by (size, value)."""
    uniq = sorted(set(sets), key=lambda s: (s.bit_count(), s))
    kept = []
    for s in uniq:
        if not any(t & s == t for t in kept):
            kept.append(s)
    return kept


def minimal_transversals(edges, cap=10**6):
    trans = [0]
    for e in edges:
        hit = [t for t in trans if t & e]
        miss = [t for t in trans if not t & e]
        new = list(hit)
        for t in miss:
            for x in bits(e):
                new.append(t | (1 << x))
        trans = minimize(new)
        if len(trans) > cap:
            raise NodeLimit(f"more than {cap} transversals")
    return trans


# ---------------------------------------------------------------------------
# set cover by k-subsets of transversals
# ---------------------------------------------------------------------------

def cover(elements, k, limit, max_nodes=None):
    """Minimum family of k-sets such that every element contains one of them.

    ``elements`` are bitmasks, each of size >= k.  Returns the chosen k-sets
    (sorted) when a cover of size <= ``limit`` exists, otherwise None.
    Raises NodeLimit when ``max_nodes`` branch nodes are exceeded.
    """
    elements = sorted(set(elements), key=lambda s: (s.bit_count(), s))
    n = len(elements)
    if n == 0:
        return []
    if limit < 0:
        return None
    limit = min(limit, n)
    cand_index = {}
    for e in elements:
        for sub in combinations(bits(e), k):
            cand_index.setdefault(mask_of(sub), 0)
    cands = sorted(cand_index)
    cov = []
    for c in cands:
        m = 0
        for i, e in enumerate(elements):
            if e & c == c:
                m |= 1 << i
        cov.append(m)
    by_elem = [[j for j, m in enumerate(cov) if m >> i & 1] for i in range(n)]
    # elements i, j can share a k-set iff |e_i & e_j| >= k
    clash = []
    for i, e in enumerate(elements):
        m = 0
        for j, f in enumerate(elements):
            if i != j and (e & f).bit_count() >= k:
                m |= 1 << j
        clash.append(m)

    def packing(unc):
        blocked = 0
        count = 0
        rest = unc
        while rest:
            low = rest & -rest
            i = low.bit_length() - 1
            rest ^= low
            if not blocked >> i & 1:
                count += 1
                blocked |= clash[i]
        return count

    best = [None]
    bound = [limit + 1]
    nodes = [0]

    def rec(unc, chosen, forbidden):
        nodes[0] += 1
        if max_nodes is not None and nodes[0] > max_nodes:
            raise NodeLimit(f"cover search exceeded {max_nodes} nodes")
        if not unc:
            if len(chosen) < bound[0]:
                bound[0] = len(chosen)
                best[0] = list(chosen)
            return
        if len(chosen) + packing(unc) >= bound[0]:
            return
        pick = None
        pick_opts = None
        rest = unc
        while rest:
            low = rest & -rest
            i = low.bit_length() - 1
            rest ^= low
            opts = [j for j in by_elem[i] if not forbidden >> j & 1]
            if pick_opts is None or len(opts) < len(pick_opts):
                pick, pick_opts = i, opts
                if len(opts) <= 1:
                    break
        if not pick_opts:
            return
        pick_opts.sort(key=lambda j: (-(cov[j] & unc).bit_count(), j))
        forb = forbidden
        for j in pick_opts:
            chosen.append(cands[j])
            rec(unc & ~cov[j], chosen, forb)
            chosen.pop()
            forb |= 1 << j
            if len(chosen) + 1 >= bound[0]:
                break

    rec((1 << n) - 1, [], 0)
    if best[0] is None:
        return None
    return sorted(best[0])


# ---------------------------------------------------------------------------
# canonical form of a family of lists (colour relabelling + list order)
# ---------------------------------------------------------------------------

M64 = (1 << 64) - 1
REFINE_ROUNDS = 3


def mix64(x):
    """splitmix64 finaliser, used to hash refinement labels."""
    x = (x + 0x9E3779B97F4A7C15) & M64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & M64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & M64
    return x ^ (x >> 31)


def list_labels(masks):
    """Isomorphism-invariant label per list (colour/list refinement, 3 rounds)."""
    members = [bits(m) for m in masks]
    cl = {}
    for mem in members:
        for c in mem:
            cl[c] = cl.get(c, 0) + 1
    ll = [0] * len(masks)
    for rnd in range(REFINE_ROUNDS + 1):
        ll = [sum(mix64(cl[c]) for c in mem) & M64 for mem in members]
        if rnd == REFINE_ROUNDS:
            break
        acc = dict.fromkeys(cl, 0)
        for i, mem in enumerate(members):
            h = mix64((ll[i] + 1) & M64)
            for c in mem:
                acc[c] = (acc[c] + h) & M64
        cl = {c: mix64(cl[c] ^ acc[c]) for c in cl}
    return ll


def list_orders(masks):
    """Every list order that sorts the refinement labels in decreasing order."""
    ll = list_labels(masks)
    idx = sorted(range(len(masks)), key=lambda i: ll[i], reverse=True)
    cells = []
    for i in idx:
        if cells and ll[cells[-1][0]] == ll[i]:
            cells[-1].append(i)
        else:
            cells.append([i])
    for parts in product(*(permutations(c) for c in cells)):
        yield [i for p in parts for i in p]


def column_codes(masks, order):
    b = len(order)
    codes = {}
    for pos, i in enumerate(order):
        w = 1 << (b - 1 - pos)
        for c in bits(masks[i]):
            codes[c] = codes.get(c, 0) | w
    return codes


def canonical_family(masks):
    """Canonical form of a family of colour lists.

    Returns ``(key, canon)``.  ``key`` is the greatest (lexicographically)
    decreasing-sorted tuple of colour membership codes over the admissible
    list orders; ``canon`` lists the relabelled lists in that order, colour
    ``i`` being the one with the ``i``-th code.  Two families get the same
    result exactly when one is a relabelling/reordering of the other.
    """
    masks = list(masks)
    b = len(masks)
    best = None
    for order in list_orders(masks):
        key = tuple(sorted(column_codes(masks, order).values(), reverse=True))
        if best is None or key > best:
            best = key
    if best is None:
        return (), ()
    canon = []
    for pos in range(b):
        w = 1 << (b - 1 - pos)
        canon.append(mask_of(i for i, code in enumerate(best) if code & w))
    return best, tuple(canon)


def extend_family(prefix, u, nmax, kb):
    """Canonical one-list extensions of a canonical family over colours 0..u-1.

    The new list takes ``kb - f`` old colours and the ``f`` fresh colours
    ``u..u+f-1`` (``u + f <= nmax``); it must differ from every existing list.
    Returns the sorted distinct canonical forms.
    """
    prefix = tuple(prefix)
    seen = set()
    for f in range(0, min(kb, nmax - u) + 1):
        j = kb - f
        if j > u:
            continue
        new_part = mask_of(range(u, u + f))
        for sub in combinations(range(u), j):
            lst = mask_of(sub) | new_part
            if lst in prefix:
                continue
            seen.add(canonical_family(prefix + (lst,))[1])
    return sorted(seen)


# ---------------------------------------------------------------------------
# extension scan for the choosability enumeration
# ---------------------------------------------------------------------------

def small_hitting_sets(masks, universe, size):
    """All subsets of ``universe`` (a count) of the given size meeting every mask."""
    out = []
    for sub in combinations(range(universe), size):
        s = mask_of(sub)
        if all(s & m for m in masks):
            out.append(s)
    return out


def scan_extensions(prefix, u, n, kb, ka, limit):
    """Extensions of ``prefix`` (lists over colours 0..u-1) by one k_b-list.

    The new list uses ``j`` old colours and ``kb - j`` fresh colours
    ``u, u+1, ...`` so that the final union is exactly ``n``.  Returns the
    new lists for which the family has no transversal smaller than ``ka`` and
    at most ``limit`` transversals of size exactly ``ka``.
    """
    j = kb - (n - u)
    if n < u or j < 0 or j > u:
        return []
    new_part = mask_of(range(u, n))
    small = [small_hitting_sets(prefix, u, s) for s in range(ka + 1)]
    if n > u and any(small[s] for s in range(ka - 1)):
        # a (<= ka-2)-set of old colours plus one fresh colour is a small transversal
        return []
    # once no transversal is smaller than ka, every ka-transversal is minimal;
    # those using a fresh colour are an old (ka-1)-transversal plus that colour
    base = (n - u) * len(small[ka - 1]) if ka >= 1 else 0
    out = []
    existing = set(prefix)
    for sub in combinations(range(u), j):
        lst = mask_of(sub) | new_part
        if lst in existing:
            continue
        bad = False
        for s in range(ka):
            for h in small[s]:
                if h & lst:
                    bad = True
                    break
            if bad:
                break
        if bad:
            continue
        cnt = base
        if cnt > limit:
            continue
        for h in small[ka]:
            if h & lst:
                cnt += 1
                if cnt > limit:
                    break
        if cnt <= limit:
            out.append(lst)
    return sorted(out)
