# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernels (masks narrower than 64 bits).

Same functions and same results as ``_pykernels``; the dispatcher in
``bilist.kernels`` only routes here when every mask fits in 64 bits.
"""

from libc.stdlib cimport malloc, free, calloc, qsort
from libc.string cimport memcpy, memset
from libc.stdint cimport uint64_t, int64_t

from bilist._pykernels import NodeLimit

ctypedef uint64_t u64

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


cdef inline int popc(u64 x) noexcept nogil:
    return __builtin_popcountll(x)


cdef inline int ctz(u64 x) noexcept nogil:
    return __builtin_ctzll(x)


def _as_sorted_unique(masks):
    return sorted(set(int(m) for m in masks))


# ---------------------------------------------------------------------------
# separator search
# ---------------------------------------------------------------------------

cdef int _propagate(u64* pos, int npos, u64* neg, int nneg, u64* ins, u64* outs) noexcept nogil:
    cdef int changed = 1
    cdef int i
    cdef u64 free_
    while changed:
        changed = 0
        for i in range(npos):
            if pos[i] & ins[0]:
                continue
            free_ = pos[i] & ~outs[0]
            if free_ == 0:
                return 0
            if free_ & (free_ - 1) == 0:
                ins[0] |= free_
                changed = 1
        for i in range(nneg):
            if neg[i] & outs[0]:
                continue
            free_ = neg[i] & ~ins[0]
            if free_ == 0:
                return 0
            if free_ & (free_ - 1) == 0:
                outs[0] |= free_
                changed = 1
    return 1


cdef int _dpll(u64* pos, int npos, u64* neg, int nneg, u64 ins, u64 outs, u64* result) noexcept nogil:
    if not _propagate(pos, npos, neg, nneg, &ins, &outs):
        return 0
    cdef u64 best = 0
    cdef int best_width = -1
    cdef int positive = 1
    cdef int i, w
    for i in range(npos):
        if pos[i] & ins:
            continue
        w = popc(pos[i] & ~outs)
        if best_width < 0 or w < best_width:
            best = pos[i] & ~outs
            best_width = w
            positive = 1
    for i in range(nneg):
        if neg[i] & outs:
            continue
        w = popc(neg[i] & ~ins)
        if best_width < 0 or w < best_width:
            best = neg[i] & ~ins
            best_width = w
            positive = 0
    if best_width < 0:
        result[0] = ins
        return 1
    cdef u64 x = best & (~best + 1)
    if positive:
        if _dpll(pos, npos, neg, nneg, ins | x, outs, result):
            return 1
        return _dpll(pos, npos, neg, nneg, ins, outs | x, result)
    if _dpll(pos, npos, neg, nneg, ins, outs | x, result):
        return 1
    return _dpll(pos, npos, neg, nneg, ins | x, outs, result)


def separator(a_masks, b_masks, palette):
    pos_l = _as_sorted_unique(a_masks)
    neg_l = _as_sorted_unique(b_masks)
    if any(c == 0 for c in pos_l) or any(c == 0 for c in neg_l):
        return None
    cdef int npos = len(pos_l), nneg = len(neg_l)
    cdef u64* pos = <u64*>malloc((npos + 1) * sizeof(u64))
    cdef u64* neg = <u64*>malloc((nneg + 1) * sizeof(u64))
    cdef u64 result = 0
    cdef int ok
    try:
        for i in range(npos):
            pos[i] = pos_l[i]
        for i in range(nneg):
            neg[i] = neg_l[i]
        with nogil:
            ok = _dpll(pos, npos, neg, nneg, 0, 0, &result)
    finally:
        free(pos)
        free(neg)
    return int(result) if ok else None


# ---------------------------------------------------------------------------
# hitting sets
# ---------------------------------------------------------------------------

cdef int _hit(u64* blocks, int nb, u64 chosen, int depth, int k, u64* out) noexcept nogil:
    cdef int i
    cdef u64 blk = 0
    cdef int found = 0
    for i in range(nb):
        if not (blocks[i] & chosen):
            blk = blocks[i]
            found = 1
            break
    if not found:
        out[0] = chosen
        return 1
    if depth == k:
        return 0
    while blk:
        if _hit(blocks, nb, chosen | (blk & (~blk + 1)), depth + 1, k, out):
            return 1
        blk &= blk - 1
    return 0


def hitting_set(blocks, k):
    bl = _as_sorted_unique(blocks)
    if any(b == 0 for b in bl):
        return None
    cdef int nb = len(bl)
    cdef u64* arr = <u64*>malloc((nb + 1) * sizeof(u64))
    cdef u64 out = 0
    cdef int ok, kk = k
    try:
        for i in range(nb):
            arr[i] = bl[i]
        with nogil:
            ok = _hit(arr, nb, 0, 0, kk, &out)
    finally:
        free(arr)
    return int(out) if ok else None


# ---------------------------------------------------------------------------
# minimal transversals
# ---------------------------------------------------------------------------

cdef int _cmp_size_value(const void* a, const void* b) noexcept nogil:
    cdef u64 x = (<u64*>a)[0]
    cdef u64 y = (<u64*>b)[0]
    cdef int px = popc(x), py = popc(y)
    if px != py:
        return -1 if px < py else 1
    if x == y:
        return 0
    return -1 if x < y else 1


cdef int _cmp_u64(const void* a, const void* b) noexcept nogil:
    cdef u64 x = (<u64*>a)[0]
    cdef u64 y = (<u64*>b)[0]
    if x == y:
        return 0
    return -1 if x < y else 1


cdef int _cmp_u64_desc(const void* a, const void* b) noexcept nogil:
    return -_cmp_u64(a, b)


cdef Py_ssize_t _minimize(u64* buf, Py_ssize_t n) noexcept nogil:
    """Sort by (size, value), drop duplicates and supersets; returns new length."""
    qsort(buf, n, sizeof(u64), _cmp_size_value)
    cdef Py_ssize_t kept = 0, i, j
    cdef u64 s
    cdef int bad
    for i in range(n):
        s = buf[i]
        bad = 0
        for j in range(kept):
            if buf[j] & s == buf[j]:
                bad = 1
                break
        if not bad:
            buf[kept] = s
            kept += 1
    return kept


def minimal_transversals(edges, cap=10**6):
    edge_list = [int(e) for e in edges]
    cdef Py_ssize_t cap_ = cap
    cdef Py_ssize_t cur_n = 1, new_n, capacity = 1024, need, i
    cdef u64* cur = <u64*>malloc(capacity * sizeof(u64))
    cdef u64* nxt = <u64*>malloc(capacity * sizeof(u64))
    cdef u64* tmp
    cdef u64 e, t, x
    cur[0] = 0
    try:
        for e_py in edge_list:
            e = e_py
            need = cur_n * (popc(e) + 1) + 1
            if need > capacity:
                while capacity < need:
                    capacity *= 2
                free(nxt)
                nxt = <u64*>malloc(capacity * sizeof(u64))
                tmp = <u64*>malloc(capacity * sizeof(u64))
                memcpy(tmp, cur, cur_n * sizeof(u64))
                free(cur)
                cur = tmp
            new_n = 0
            with nogil:
                for i in range(cur_n):
                    t = cur[i]
                    if t & e:
                        nxt[new_n] = t
                        new_n += 1
                for i in range(cur_n):
                    t = cur[i]
                    if not (t & e):
                        x = e
                        while x:
                            nxt[new_n] = t | (x & (~x + 1))
                            new_n += 1
                            x &= x - 1
                new_n = _minimize(nxt, new_n)
            tmp = cur
            cur = nxt
            nxt = tmp
            cur_n = new_n
            if cur_n > cap_:
                raise NodeLimit(f"more than {cap} transversals")
        return [int(cur[i]) for i in range(cur_n)]
    finally:
        free(cur)
        free(nxt)


# ---------------------------------------------------------------------------
# set cover
# ---------------------------------------------------------------------------

cdef struct CoverCtx:
    int n              # elements
    int W              # words per element bitset
    int nc             # candidates
    int WC             # words per candidate bitset
    u64* cov           # nc * W
    u64* clash         # n * W
    int* by_elem       # n * nc (candidate ids), lengths in by_len
    int* by_len
    int bound
    int* chosen        # stack of candidate ids
    int* best
    int best_len
    long long nodes
    long long max_nodes
    int overflow
    u64* unc_stack     # (limit + 2) * W
    u64* forb_stack    # (limit + 2) * WC
    int* opts_stack    # (limit + 2) * nc
    int* gain_stack    # nc scratch per depth
    u64* blocked       # W scratch


cdef inline int _isempty(u64* a, int W) noexcept nogil:
    cdef int w
    for w in range(W):
        if a[w]:
            return 0
    return 1


cdef int _packing(CoverCtx* c, u64* unc) noexcept nogil:
    cdef int W = c.W, w, i, count = 0, k
    cdef u64 rest
    memset(c.blocked, 0, W * sizeof(u64))
    for w in range(W):
        rest = unc[w]
        while rest:
            i = w * 64 + ctz(rest)
            rest &= rest - 1
            if not (c.blocked[i >> 6] >> (i & 63)) & 1:
                count += 1
                for k in range(W):
                    c.blocked[k] |= c.clash[i * W + k]
    return count


cdef void _sort_opts(int* opts, int* gains, int m) noexcept nogil:
    # insertion sort by (-gain, id)
    cdef int i, j, o, g
    for i in range(1, m):
        o = opts[i]
        g = gains[i]
        j = i - 1
        while j >= 0 and (gains[j] < g or (gains[j] == g and opts[j] > o)):
            opts[j + 1] = opts[j]
            gains[j + 1] = gains[j]
            j -= 1
        opts[j + 1] = o
        gains[j + 1] = g


cdef void _cover_rec(CoverCtx* c, int depth) noexcept nogil:
    cdef int W = c.W, WC = c.WC
    cdef u64* unc = c.unc_stack + depth * W
    cdef u64* forb = c.forb_stack + depth * WC
    cdef u64* unc2
    cdef u64* forb2
    cdef int w, i, j, t, m, best_m, g, k
    cdef u64 rest
    cdef int* opts
    cdef int* gains
    cdef int pick_found
    c.nodes += 1
    if c.max_nodes >= 0 and c.nodes > c.max_nodes:
        c.overflow = 1
        return
    if _isempty(unc, W):
        if depth < c.bound:
            c.bound = depth
            c.best_len = depth
            memcpy(c.best, c.chosen, depth * sizeof(int))
        return
    if depth + _packing(c, unc) >= c.bound:
        return
    opts = c.opts_stack + depth * c.nc
    gains = c.gain_stack + depth * c.nc
    best_m = -1
    pick_found = 0
    for w in range(W):
        rest = unc[w]
        while rest:
            i = w * 64 + ctz(rest)
            rest &= rest - 1
            m = 0
            for t in range(c.by_len[i]):
                j = c.by_elem[i * c.nc + t]
                if not (forb[j >> 6] >> (j & 63)) & 1:
                    m += 1
            if best_m < 0 or m < best_m:
                best_m = m
                m = 0
                for t in range(c.by_len[i]):
                    j = c.by_elem[i * c.nc + t]
                    if not (forb[j >> 6] >> (j & 63)) & 1:
                        opts[m] = j
                        m += 1
                if best_m <= 1:
                    pick_found = 1
                    break
        if pick_found:
            break
    if best_m <= 0:
        return
    for t in range(best_m):
        j = opts[t]
        g = 0
        for k in range(W):
            g += popc(c.cov[j * W + k] & unc[k])
        gains[t] = g
    _sort_opts(opts, gains, best_m)
    unc2 = c.unc_stack + (depth + 1) * W
    forb2 = c.forb_stack + (depth + 1) * WC
    memcpy(forb2, forb, WC * sizeof(u64))
    for t in range(best_m):
        j = opts[t]
        for k in range(W):
            unc2[k] = unc[k] & ~c.cov[j * W + k]
        c.chosen[depth] = j
        _cover_rec(c, depth + 1)
        if c.overflow:
            return
        # the child may have overwritten forb2 deeper down only at depth + 2
        forb2[j >> 6] |= (<u64>1) << (j & 63)
        if depth + 1 >= c.bound:
            break


def cover(elements, k, limit, max_nodes=None):
    from itertools import combinations
    els = sorted(set(int(e) for e in elements), key=lambda s: (bin(s).count("1"), s))
    cdef int n = len(els)
    if n == 0:
        return []
    if limit < 0:
        return None
    limit = min(limit, n)
    cand_set = set()
    for e in els:
        bl = [i for i in range(64) if e >> i & 1]
        for sub in combinations(bl, k):
            m = 0
            for x in sub:
                m |= 1 << x
            cand_set.add(m)
    cands = sorted(cand_set)
    cdef int nc = len(cands)
    cdef int W = (n + 63) // 64
    cdef int WC = (nc + 63) // 64
    cdef int lim = limit
    cdef int depth_slots = min(lim, n) + 2
    cdef CoverCtx c
    cdef int i, j, kk = k
    cdef u64 cm, em
    cdef u64* el = <u64*>malloc(n * sizeof(u64))
    cdef u64* ca = <u64*>malloc(nc * sizeof(u64))
    c.n = n
    c.W = W
    c.nc = nc
    c.WC = WC
    c.cov = <u64*>calloc(nc * W, sizeof(u64))
    c.clash = <u64*>calloc(n * W, sizeof(u64))
    c.by_elem = <int*>malloc(n * nc * sizeof(int))
    c.by_len = <int*>calloc(n, sizeof(int))
    c.bound = lim + 1
    c.chosen = <int*>malloc(depth_slots * sizeof(int))
    c.best = <int*>malloc(depth_slots * sizeof(int))
    c.best_len = -1
    c.nodes = 0
    c.max_nodes = -1 if max_nodes is None else max_nodes
    c.overflow = 0
    c.unc_stack = <u64*>calloc(depth_slots * W, sizeof(u64))
    c.forb_stack = <u64*>calloc(depth_slots * WC, sizeof(u64))
    c.opts_stack = <int*>malloc(depth_slots * nc * sizeof(int))
    c.gain_stack = <int*>malloc(depth_slots * nc * sizeof(int))
    c.blocked = <u64*>malloc(W * sizeof(u64))
    try:
        for i in range(n):
            el[i] = els[i]
        for j in range(nc):
            ca[j] = cands[j]
        with nogil:
            for j in range(nc):
                cm = ca[j]
                for i in range(n):
                    if el[i] & cm == cm:
                        c.cov[j * W + (i >> 6)] |= (<u64>1) << (i & 63)
                        c.by_elem[i * nc + c.by_len[i]] = j
                        c.by_len[i] += 1
            for i in range(n):
                em = el[i]
                for j in range(n):
                    if i != j and popc(em & el[j]) >= kk:
                        c.clash[i * W + (j >> 6)] |= (<u64>1) << (j & 63)
            for i in range(n):
                c.unc_stack[i >> 6] |= (<u64>1) << (i & 63)
            _cover_rec(&c, 0)
        if c.overflow:
            raise NodeLimit(f"cover search exceeded {max_nodes} nodes")
        if c.best_len < 0:
            return None
        return sorted(cands[c.best[i]] for i in range(c.best_len))
    finally:
        free(el)
        free(ca)
        free(c.cov)
        free(c.clash)
        free(c.by_elem)
        free(c.by_len)
        free(c.chosen)
        free(c.best)
        free(c.unc_stack)
        free(c.forb_stack)
        free(c.opts_stack)
        free(c.gain_stack)
        free(c.blocked)


# ---------------------------------------------------------------------------
# canonical form
# ---------------------------------------------------------------------------

cdef int REFINE_ROUNDS = 3

cdef inline u64 mix64(u64 x) noexcept nogil:
    x = x + <u64>0x9E3779B97F4A7C15
    x = (x ^ (x >> 30)) * <u64>0xBF58476D1CE4E5B9
    x = (x ^ (x >> 27)) * <u64>0x94D049BB133111EB
    return x ^ (x >> 31)


cdef struct CanonCtx:
    int b
    int u                # number of distinct colours
    u64* masks           # b masks in compact colour labels 0..u-1
    int* order           # current order (positions -> list id)
    int* cell_end        # for each position, end (exclusive) of its cell
    int* used
    u64* codes           # u scratch
    u64* best            # u best key
    int have_best


cdef void _eval_order(CanonCtx* c) noexcept nogil:
    cdef int pos, i
    cdef u64 w, m
    memset(c.codes, 0, c.u * sizeof(u64))
    for pos in range(c.b):
        w = (<u64>1) << (c.b - 1 - pos)
        m = c.masks[c.order[pos]]
        while m:
            c.codes[ctz(m)] |= w
            m &= m - 1
    qsort(c.codes, c.u, sizeof(u64), _cmp_u64_desc)
    if not c.have_best:
        memcpy(c.best, c.codes, c.u * sizeof(u64))
        c.have_best = 1
        return
    for i in range(c.u):
        if c.codes[i] != c.best[i]:
            if c.codes[i] > c.best[i]:
                memcpy(c.best, c.codes, c.u * sizeof(u64))
            return


cdef void _perm_rec(CanonCtx* c, int pos, int* cell_members, int* cell_start) noexcept nogil:
    cdef int s, e, t, lid
    if pos == c.b:
        _eval_order(c)
        return
    s = cell_start[pos]
    e = c.cell_end[pos]
    for t in range(s, e):
        lid = cell_members[t]
        if c.used[lid]:
            continue
        c.used[lid] = 1
        c.order[pos] = lid
        _perm_rec(c, pos + 1, cell_members, cell_start)
        c.used[lid] = 0


def canonical_family(masks):
    ml = [int(m) for m in masks]
    cdef int b = len(ml)
    if b == 0:
        return (), ()
    if b > 64:
        raise ValueError("too many lists for the compiled kernel")
    cdef u64 union = 0
    for m in ml:
        union |= <u64>m
    cdef int u = popc(union)
    cdef int colmap[64]
    cdef int i, j, pos, rnd, cidx
    cdef u64 x, h
    cdef CanonCtx c
    cdef u64 compact[64]
    cdef u64 cl[64]
    cdef u64 acc[64]
    cdef u64 ll[64]
    cdef int idx[64]
    cdef int cell_start[64]
    cdef int cell_end[64]
    cdef int order[64]
    cdef int used[64]
    cdef u64 codes[64]
    cdef u64 best[64]
    j = 0
    x = union
    while x:
        colmap[ctz(x)] = j
        j += 1
        x &= x - 1
    for i in range(b):
        compact[i] = 0
        x = <u64>ml[i]
        while x:
            compact[i] |= (<u64>1) << colmap[ctz(x)]
            x &= x - 1
    with nogil:
        for cidx in range(u):
            cl[cidx] = 0
        for i in range(b):
            x = compact[i]
            while x:
                cl[ctz(x)] += 1
                x &= x - 1
        rnd = 0
        while True:
            for i in range(b):
                h = 0
                x = compact[i]
                while x:
                    h += mix64(cl[ctz(x)])
                    x &= x - 1
                ll[i] = h
            if rnd == REFINE_ROUNDS:
                break
            for cidx in range(u):
                acc[cidx] = 0
            for i in range(b):
                h = mix64(ll[i] + 1)
                x = compact[i]
                while x:
                    acc[ctz(x)] += h
                    x &= x - 1
            for cidx in range(u):
                cl[cidx] = mix64(cl[cidx] ^ acc[cidx])
            rnd += 1
        # stable sort of list ids by label, decreasing
        for i in range(b):
            idx[i] = i
        for i in range(1, b):
            j = i - 1
            pos = idx[i]
            while j >= 0 and ll[idx[j]] < ll[pos]:
                idx[j + 1] = idx[j]
                j -= 1
            idx[j + 1] = pos
        i = 0
        while i < b:
            j = i
            while j < b and ll[idx[j]] == ll[idx[i]]:
                j += 1
            for pos in range(i, j):
                cell_start[pos] = i
                cell_end[pos] = j
            i = j
        for i in range(b):
            used[i] = 0
        c.b = b
        c.u = u
        c.masks = compact
        c.order = order
        c.cell_end = cell_end
        c.used = used
        c.codes = codes
        c.best = best
        c.have_best = 0
        _perm_rec(&c, 0, idx, cell_start)
    key = tuple(int(best[i]) for i in range(u))
    canon = []
    for pos in range(b):
        w = 1 << (b - 1 - pos)
        m = 0
        for i in range(u):
            if key[i] & w:
                m |= 1 << i
        canon.append(m)
    return key, tuple(canon)


def extend_family(prefix, u, nmax, kb):
    prefix = tuple(int(p) for p in prefix)
    pset = set(prefix)
    seen = set()
    cdef int uu = u, f, j, fmax = min(kb, nmax - u)
    cdef u64 new_part, sub, lim, t
    for f in range(0, fmax + 1):
        j = kb - f
        if j > uu:
            continue
        new_part = 0
        for i in range(uu, uu + f):
            new_part |= (<u64>1) << i
        if j == 0:
            if new_part not in pset:
                seen.add(canonical_family(prefix + (int(new_part),))[1])
            continue
        sub = ((<u64>1) << j) - 1
        lim = (<u64>1) << uu
        while sub < lim:
            lst = int(sub | new_part)
            if lst not in pset:
                seen.add(canonical_family(prefix + (lst,))[1])
            t = sub | (sub - 1)
            sub = (t + 1) | (((~t & (t + 1)) - 1) >> (ctz(sub) + 1))
    return sorted(seen)


# ---------------------------------------------------------------------------
# extension scan
# ---------------------------------------------------------------------------

cdef Py_ssize_t _small_hits(u64* pre, int npre, int u, int size, u64* out) noexcept nogil:
    """All size-subsets of 0..u-1 meeting every prefix list, written to out."""
    cdef Py_ssize_t cnt = 0
    cdef u64 sub, lim, t
    cdef int i, ok
    if size == 0:
        if npre == 0:
            out[0] = 0
            return 1
        return 0
    if size > u:
        return 0
    sub = ((<u64>1) << size) - 1
    lim = (<u64>1) << u
    while sub < lim:
        ok = 1
        for i in range(npre):
            if not (sub & pre[i]):
                ok = 0
                break
        if ok:
            out[cnt] = sub
            cnt += 1
        t = sub | (sub - 1)
        sub = (t + 1) | (((~t & (t + 1)) - 1) >> (ctz(sub) + 1))
    return cnt


cdef Py_ssize_t _binom(int n, int k) noexcept nogil:
    cdef Py_ssize_t r = 1
    cdef int i
    if k < 0 or k > n:
        return 0
    for i in range(k):
        r = r * (n - i) // (i + 1)
    return r


def scan_extensions(prefix, u, n, kb, ka, limit):
    cdef int uu = u, nn = n, kbb = kb, kaa = ka
    cdef long long lim_ = limit
    cdef int j = kbb - (nn - uu)
    if nn < uu or j < 0 or j > uu:
        return []
    pre_l = [int(p) for p in prefix]
    cdef int npre = len(pre_l)
    cdef int i, s
    cdef u64* pre = <u64*>malloc((npre + 1) * sizeof(u64))
    cdef u64** small = <u64**>calloc(kaa + 1, sizeof(u64*))
    cdef Py_ssize_t* nsmall = <Py_ssize_t*>calloc(kaa + 1, sizeof(Py_ssize_t))
    cdef u64 new_part = 0, sub, lst, t, lim
    cdef long long base, cnt
    cdef Py_ssize_t h
    cdef int bad
    out = []
    try:
        for i in range(npre):
            pre[i] = pre_l[i]
        for i in range(uu, nn):
            new_part |= (<u64>1) << i
        for s in range(kaa + 1):
            small[s] = <u64*>malloc((_binom(uu, s) + 1) * sizeof(u64))
            nsmall[s] = _small_hits(pre, npre, uu, s, small[s])
        if nn > uu:
            for s in range(kaa - 1):
                if nsmall[s]:
                    return []
        base = (nn - uu) * nsmall[kaa - 1] if kaa >= 1 else 0
        pset = set(pre_l)
        found = []
        if j == 0:
            sub = 0
            lim = 1
        else:
            sub = ((<u64>1) << j) - 1
            lim = (<u64>1) << uu
        while sub < lim:
            lst = sub | new_part
            bad = 0
            for s in range(kaa):
                for h in range(nsmall[s]):
                    if small[s][h] & lst:
                        bad = 1
                        break
                if bad:
                    break
            if not bad:
                cnt = base
                if cnt <= lim_:
                    for h in range(nsmall[kaa]):
                        if small[kaa][h] & lst:
                            cnt += 1
                            if cnt > lim_:
                                break
                    if cnt <= lim_:
                        found.append(lst)
            if j == 0:
                break
            t = sub | (sub - 1)
            sub = (t + 1) | (((~t & (t + 1)) - 1) >> (ctz(sub) + 1))
        for lst in found:
            if int(lst) not in pset:
                out.append(int(lst))
        return sorted(out)
    finally:
        free(pre)
        for s in range(kaa + 1):
            if small[s] != NULL:
                free(small[s])
        free(small)
        free(nsmall)
