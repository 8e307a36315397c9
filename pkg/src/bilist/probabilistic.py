"""Resampling samplers that turn the existence arguments into algorithms,
and exact enumeration checks for the coupon-collection estimate.

Every sampler records the seed, the budget, the number of resampling steps
and the generator name, and re-verifies its result before returning it.
Running out of budget is an ordinary outcome, not an exception.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, permutations, product

import mpmath
import numpy as np

from bilist import bounds
from bilist.core import BipartiteGraph, ListAssignment, ParamPoint, ProperColouring, TooLarge
from bilist.kernels import bits, mask_of

RNG_ALGORITHM = "numpy.PCG64/SeedSequence"
DEFAULT_BUDGET = 10**5
OK = "OK"
EXHAUSTED = "BUDGET_EXHAUSTED"


def make_rng(seed):
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


@dataclass
class SamplerOutcome:
    status: str
    result: object
    resample_count: int
    seed: int
    budget: int
    rng: str = RNG_ALGORITHM
    notes: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.status == OK


# ---------------------------------------------------------------------------
# independent transversals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PartitionedHypergraph:
    vertex_count: int
    edges: tuple  # tuples of vertex ids
    parts: tuple  # tuples of vertex ids, all of one size

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(tuple(sorted(e)) for e in self.edges))
        object.__setattr__(self, "parts", tuple(tuple(p) for p in self.parts))
        seen = [p for part in self.parts for p in part]
        if sorted(seen) != list(range(self.vertex_count)):
            raise ValueError("parts must be disjoint and cover every vertex")
        if len({len(p) for p in self.parts}) > 1:
            raise ValueError("parts must have equal size")
        for e in self.edges:
            if not e or e[-1] >= self.vertex_count or e[0] < 0:
                raise ValueError(f"edge {e} is empty or leaves the vertex set")

    @property
    def part_size(self):
        return len(self.parts[0]) if self.parts else 0

    def part_of(self):
        out = [0] * self.vertex_count
        for i, part in enumerate(self.parts):
            for v in part:
                out[v] = i
        return out

    def max_part_degree_sum(self):
        deg = [0] * self.vertex_count
        for e in self.edges:
            for v in e:
                deg[v] += 1
        return max((sum(deg[v] for v in part) for part in self.parts), default=0)

    def lemma_holds(self):
        """Hypothesis l^k >= e(k(D-1)+1) for a k-uniform hypergraph."""
        if not self.edges:
            return True
        k = len(self.edges[0])
        d = self.max_part_degree_sum()
        return bounds.ge_e_times(self.part_size ** k, k * (d - 1) + 1)


def is_independent_transversal(h: PartitionedHypergraph, chosen):
    part_of = h.part_of()
    if sorted(part_of[v] for v in chosen) != list(range(len(h.parts))):
        return False
    s = set(chosen)
    return not any(all(v in s for v in e) for e in h.edges)


def sample_independent_transversal(h: PartitionedHypergraph, seed=0, budget=DEFAULT_BUDGET) -> SamplerOutcome:
    """One uniform vertex per part; while some edge lies inside the choice,
    redraw the parts of the lowest-indexed such edge."""
    rng = make_rng(seed)
    part_of = h.part_of()
    size = h.part_size
    choice = [part[int(x)] for part, x in zip(h.parts, rng.integers(0, size, len(h.parts)))] if h.parts else []
    # edges indexed by vertex, so only edges touching redrawn parts are re-examined
    by_vertex = [[] for _ in range(h.vertex_count)]
    for idx, e in enumerate(h.edges):
        for v in e:
            by_vertex[v].append(idx)

    def violated(idx):
        return all(choice[part_of[v]] == v for v in h.edges[idx])

    bad = {idx for idx in range(len(h.edges)) if violated(idx)}
    count = 0
    while bad:
        if count >= budget:
            return SamplerOutcome(EXHAUSTED, None, count, seed, budget)
        idx = min(bad)
        parts = sorted({part_of[v] for v in h.edges[idx]})
        touched = set()
        for p in parts:
            touched.update(by_vertex[choice[p]])
            choice[p] = h.parts[p][int(rng.integers(0, size))]
            touched.update(by_vertex[choice[p]])
        for t in touched:
            if violated(t):
                bad.add(t)
            else:
                bad.discard(t)
        count += 1
    if not is_independent_transversal(h, choice):
        raise AssertionError("sampler returned a dependent transversal")
    return SamplerOutcome(OK, tuple(choice), count, seed, budget)


def list_instance_hypergraph(graph: BipartiteGraph, assignment: ListAssignment):
    """Hypergraph whose independent transversals are B-colourings that leave
    every A-vertex a free colour.

    Vertices are pairs (w, c) with c in L(w), grouped by w.  For each
    A-vertex v, every injective way of placing the colours of L(v) on
    distinct neighbours whose lists contain them is an edge.
    Returns (hypergraph, pairs) where pairs[id] = (w, c).
    """
    pairs = []
    index = {}
    parts = []
    for w, lst in enumerate(assignment.lists_b):
        part = []
        for c in lst:
            index[(w, c)] = len(pairs)
            part.append(len(pairs))
            pairs.append((w, c))
        parts.append(part)
    edges = set()
    for v, lst in enumerate(assignment.lists_a):
        nb = graph.neighbours_a(v)
        for ws in permutations(nb, len(lst)):
            if all((w, c) in index for w, c in zip(ws, lst)):
                edges.add(tuple(sorted(index[(w, c)] for w, c in zip(ws, lst))))
    return PartitionedHypergraph(len(pairs), tuple(sorted(edges)), tuple(parts)), pairs


def _finish_a(graph, assignment, colours_b):
    colours_a = []
    for v, lst in enumerate(assignment.lists_a):
        used = {colours_b[w] for w in graph.neighbours_a(v)}
        free = [c for c in lst if c not in used]
        if not free:
            return None
        colours_a.append(free[0])
    return ProperColouring(tuple(colours_a), tuple(colours_b))


def transversal_colouring(graph, assignment, seed=0, budget=DEFAULT_BUDGET) -> SamplerOutcome:
    """Proper colouring through an independent transversal of the encoding."""
    h, pairs = list_instance_hypergraph(graph, assignment)
    out = sample_independent_transversal(h, seed, budget)
    out.notes["lemma_hypothesis"] = h.lemma_holds()
    out.notes["edges"] = len(h.edges)
    if not out.ok:
        return out
    colours_b = [None] * graph.b_size
    for vid in out.result:
        w, c = pairs[vid]
        colours_b[w] = c
    col = _finish_a(graph, assignment, colours_b)
    if col is None or not col.is_proper(graph, assignment):
        raise AssertionError("independent transversal did not extend to a proper colouring")
    out.result = col
    return out


# ---------------------------------------------------------------------------
# coupon-collection sampler
# ---------------------------------------------------------------------------

def sample_coupon_colouring(graph: BipartiteGraph, assignment: ListAssignment, seed=0,
                            budget=DEFAULT_BUDGET) -> SamplerOutcome:
    """Uniform colours on B; while some A-vertex sees every colour of its
    list on its neighbours, redraw the colours of the lowest-indexed such
    vertex's neighbourhood.  A is then coloured greedily."""
    rng = make_rng(seed)
    a_n, b_n = graph.a_size, graph.b_size
    lists_b = assignment.lists_b
    kb = assignment.k_b
    nbrs_a = [graph.neighbours_a(i) for i in range(a_n)]
    nbrs_b = [graph.neighbours_b(j) for j in range(b_n)]
    in_list = [set(lst) for lst in assignment.lists_a]
    colours_b = [lists_b[w][int(x)] for w, x in enumerate(rng.integers(0, kb, b_n))] if b_n else []
    seen = [dict() for _ in range(a_n)]
    covered = [0] * a_n
    for v in range(a_n):
        for w in nbrs_a[v]:
            c = colours_b[w]
            seen[v][c] = seen[v].get(c, 0) + 1
            if seen[v][c] == 1 and c in in_list[v]:
                covered[v] += 1
    need = [len(x) for x in in_list]
    bad = {v for v in range(a_n) if covered[v] == need[v]}

    def recolour(w, new):
        old = colours_b[w]
        if old == new:
            return
        colours_b[w] = new
        for v in nbrs_b[w]:
            s = seen[v]
            s[old] -= 1
            if s[old] == 0 and old in in_list[v]:
                covered[v] -= 1
            s[new] = s.get(new, 0) + 1
            if s[new] == 1 and new in in_list[v]:
                covered[v] += 1
            if covered[v] == need[v]:
                bad.add(v)
            else:
                bad.discard(v)

    count = 0
    while bad:
        if count >= budget:
            return SamplerOutcome(EXHAUSTED, None, count, seed, budget)
        v = min(bad)
        ws = nbrs_a[v]
        draws = rng.integers(0, kb, len(ws))
        for w, x in zip(ws, draws):
            recolour(w, lists_b[w][int(x)])
        count += 1
    col = _finish_a(graph, assignment, colours_b)
    if col is None or not col.is_proper(graph, assignment):
        raise AssertionError("coupon sampler produced an improper colouring")
    return SamplerOutcome(OK, col, count, seed, budget)


# ---------------------------------------------------------------------------
# palette bipartition for complete graphs
# ---------------------------------------------------------------------------

@dataclass
class PaletteSplit:
    to_b: frozenset
    to_a: frozenset
    colouring: ProperColouring


def _split_colouring(assignment, to_b, mode, eps, p):
    to_a_ok = [any(c not in to_b for c in lst) for lst in assignment.lists_a]
    if mode == "EQ1":
        if not all(to_a_ok):
            return None
        if not all(any(c in to_b for c in lst) for lst in assignment.lists_b):
            return None
        ca = tuple(min(c for c in lst if c not in to_b) for lst in assignment.lists_a)
        cb = tuple(min(c for c in lst if c in to_b) for lst in assignment.lists_b)
        return ProperColouring(ca, cb)
    need = (1 - eps) * assignment.k_b * p
    if not all(sum(1 for c in lst if c in to_b) >= need for lst in assignment.lists_b):
        return None
    exceptional = [v for v, ok in enumerate(to_a_ok) if not ok]
    if not len(exceptional) < need:
        return None
    ca = tuple(min(c for c in lst if c not in to_b) if ok else lst[0]
               for lst, ok in zip(assignment.lists_a, to_a_ok))
    used = set(ca)
    cb = []
    for lst in assignment.lists_b:
        free = [c for c in lst if c in to_b and c not in used]
        if not free:
            return None
        cb.append(free[0])
    return ProperColouring(ca, tuple(cb))


def sample_palette_split(assignment: ListAssignment, p, epsilon=0.5, mode="EQ1", seed=0,
                         budget=DEFAULT_BUDGET) -> SamplerOutcome:
    """Each colour goes to L_B with probability p, else to L_A; redraw the
    whole split until the colouring rule for ``mode`` succeeds."""
    if mode not in ("EQ1", "EQ2"):
        raise ValueError("mode must be EQ1 or EQ2")
    a, b = assignment.a_size, assignment.b_size
    point = ParamPoint.complete(a, b, assignment.k_a, assignment.k_b)
    notes = {}
    if 0 < p < 1 and 0 < epsilon < 1:
        cu1, cu2 = bounds.check_completeupper(point, p, epsilon)
        notes["inequality_holds"] = (cu1 if mode == "EQ1" else cu2).holds
        if not notes["inequality_holds"]:
            notes["warning"] = f"the {mode} inequality fails at this point; success is not guaranteed"
    if (p <= 0 and b > 0) or (p >= 1 and a > 0 and mode == "EQ1"):
        notes["degenerate"] = "every draw fails for this p"
        return SamplerOutcome(EXHAUSTED, None, 0, seed, budget, notes=notes)
    rng = make_rng(seed)
    graph = BipartiteGraph.complete_graph(a, b)
    palette = assignment.palette
    draws = 0
    while True:
        coins = rng.random(palette) < p
        to_b = frozenset(int(c) for c in np.flatnonzero(coins))
        col = _split_colouring(assignment, to_b, mode, epsilon, p)
        if col is not None:
            if not col.is_proper(graph, assignment):
                raise AssertionError("palette split produced an improper colouring")
            to_a = frozenset(range(palette)) - to_b
            return SamplerOutcome(OK, PaletteSplit(to_b, to_a, col), draws, seed, budget, notes=notes)
        draws += 1
        if draws >= budget:
            return SamplerOutcome(EXHAUSTED, None, draws, seed, budget, notes=notes)


# ---------------------------------------------------------------------------
# exact check of the negative-correlation estimate
# ---------------------------------------------------------------------------

@dataclass
class CorrelationReport:
    list_v: tuple
    neighbour_lists: tuple
    k_b: int
    pr_tv: Fraction
    pr_tvc: dict
    product: Fraction
    bound_max: Fraction
    bound_jensen: object  # Fraction when exact, otherwise (lo, hi) certified rationals
    bound_theorem: object
    subsets_ok: bool
    product_le_max: bool
    product_le_jensen: bool
    displays_differ: bool

    @property
    def ok(self):
        return self.pr_tv <= self.product and self.subsets_ok and self.product_le_max and self.product_le_jensen


def _power_bound(y: Fraction, num: int, den: int, k: int):
    """(1 - y^(num/den))^k, exactly when den divides num, else a certified
    rational enclosure (lo, hi)."""
    if y == 0:
        return Fraction(1)
    if num % den == 0:
        return (1 - y ** (num // den)) ** k
    with mpmath.workdps(60):
        val = (1 - mpmath.power(mpmath.mpf(y.numerator) / y.denominator, mpmath.mpf(num) / den)) ** k
        lo = Fraction(int(mpmath.floor(val * 10**50)), 10**50)
        hi = Fraction(int(mpmath.ceil(val * 10**50)), 10**50)
    return (lo, hi)


def _le_power_bound(x: Fraction, y: Fraction, num: int, den: int, k: int):
    """Exact decision of x <= (1 - y^(num/den))^k for 0 <= x, 0 <= y < 1."""
    if y == 0:
        return x <= 1
    if num % den == 0:
        return x <= (1 - y ** (num // den)) ** k
    # x <= (1 - z)^k with z = y^(num/den)  <=>  x^(1/k) <= 1 - z.  Equality is
    # impossible here (z is irrational or both sides are exact), so a rational
    # q strictly between the two sides certifies the answer exactly.
    for digits in (80, 200, 600):
        with mpmath.workdps(digits):
            s = mpmath.root(mpmath.mpf(x.numerator) / x.denominator, k)
            r = 1 - mpmath.power(mpmath.mpf(y.numerator) / y.denominator, mpmath.mpf(num) / den)
            q = Fraction(int(mpmath.nint(((s + r) / 2) * 10**digits)), 10**digits)
        if r > s:
            if x <= q ** k and y ** num <= (1 - q) ** den:
                return True
        else:
            if x >= q ** k and y ** num >= (1 - q) ** den and (x > q ** k or y ** num > (1 - q) ** den):
                return False
    raise ArithmeticError("could not separate the two sides of the Jensen comparison")


def check_negative_correlation(list_v, neighbour_lists, k_b=None, limit=10**6) -> CorrelationReport:
    """Exact probabilities for one A-vertex v whose neighbours colour
    uniformly from their lists.

    Checks Pr(T_v) <= prod_c Pr(T_{v,c}), the same inequality for every
    subset I of L(v), and compares the product with the closed-form bounds
    using exponents deg(v), k_B deg(v)/k_A and deg(v) min(1, k_B/k_A).
    """
    list_v = tuple(sorted(list_v))
    neighbour_lists = tuple(tuple(sorted(x)) for x in neighbour_lists)
    if k_b is None:
        k_b = len(neighbour_lists[0]) if neighbour_lists else 1
    for x in neighbour_lists:
        if len(x) != k_b:
            raise ValueError("neighbour lists must all have k_b colours")
    k_a = len(list_v)
    deg = len(neighbour_lists)
    total = k_b ** deg
    if total > limit:
        raise TooLarge(f"{total} outcomes exceed the enumeration limit {limit}")
    pos = {c: i for i, c in enumerate(list_v)}
    # tally outcomes by the set of L(v)-colours that appear
    tally = {}
    for outcome in product(*neighbour_lists):
        m = 0
        for c in outcome:
            if c in pos:
                m |= 1 << pos[c]
        tally[m] = tally.get(m, 0) + 1
    full = (1 << k_a) - 1

    def pr_all(mask):
        return Fraction(sum(n for m, n in tally.items() if m & mask == mask), total)

    pr_tv = pr_all(full)
    pr_c = {c: pr_all(1 << pos[c]) for c in list_v}
    y = Fraction(k_b - 1, k_b)
    for c in list_v:
        x_c = sum(1 for lst in neighbour_lists if c in lst)
        if pr_c[c] != 1 - y ** x_c:
            raise AssertionError(f"Pr(T_v,{c}) disagrees with the closed form")
    subsets_ok = True
    for r in range(k_a + 1):
        for idx in combinations(range(k_a), r):
            mask = mask_of(idx)
            rhs = math.prod((pr_c[list_v[i]] for i in idx), start=Fraction(1))
            if pr_all(mask) > rhs:
                subsets_ok = False
    prod_all = math.prod(pr_c.values(), start=Fraction(1))
    bound_max = (1 - y ** deg) ** k_a
    jensen = _power_bound(y, k_b * deg, k_a, k_a)
    theorem = _power_bound(y, deg * min(k_a, k_b), k_a, k_a)
    le_jensen = _le_power_bound(prod_all, y, k_b * deg, k_a, k_a)
    return CorrelationReport(list_v, neighbour_lists, k_b, pr_tv, pr_c, prod_all, bound_max, jensen, theorem,
                             subsets_ok, prod_all <= bound_max, le_jensen, k_b > k_a)


def star_patterns(deg, k_a, k_b):
    """All neighbour-list patterns around v up to relabelling.

    Only the trace of each neighbour list on L(v) = {0..k_A-1} matters, the
    remaining colours of a list are fresh.  Traces are taken as multisets
    and reduced under permutations of L(v).
    """
    traces = [t for r in range(min(k_a, k_b) + 1) for t in combinations(range(k_a), r)]
    seen = set()
    out = []
    fresh_base = k_a
    for combo in combinations_with_replacement(range(len(traces)), deg):
        pattern = [traces[i] for i in combo]
        key = min(tuple(sorted(tuple(sorted(perm[c] for c in t)) for t in pattern))
                  for perm in permutations(range(k_a)))
        if key in seen:
            continue
        seen.add(key)
        lists = []
        nxt = fresh_base
        for t in key:
            extra = list(range(nxt, nxt + k_b - len(t)))
            nxt += k_b - len(t)
            lists.append(tuple(sorted(list(t) + extra)))
        out.append((tuple(range(k_a)), tuple(lists)))
    return out


# ---------------------------------------------------------------------------
# random instances
# ---------------------------------------------------------------------------

def random_bipartite(a, b, d_a, d_b, rng) -> BipartiteGraph:
    """Random bipartite graph by pairing degree stubs; repeated pairs are
    dropped so the degrees are at most d_a and d_b."""
    if a * d_a != b * d_b:
        raise ValueError("need a*d_a == b*d_b")
    stubs_b = np.repeat(np.arange(b), d_b)
    rng.shuffle(stubs_b)
    stubs_a = np.repeat(np.arange(a), d_a)
    edges = sorted({(int(i), int(j)) for i, j in zip(stubs_a, stubs_b)})
    return BipartiteGraph.from_edges(a, b, edges)


def random_lists(count, k, palette, rng):
    return [sorted(int(x) for x in rng.choice(palette, size=k, replace=False)) for _ in range(count)]


def random_instance(a, b, d_a, d_b, k_a, k_b, palette, seed):
    rng = make_rng(seed)
    g = random_bipartite(a, b, d_a, d_b, rng)
    la = ListAssignment.build(random_lists(a, k_a, palette, rng), random_lists(b, k_b, palette, rng), k_a, k_b)
    return g, la
