"""Exhaustive (k_A, k_B)-choosability of complete bipartite graphs.

For fixed B-lists F_B, the graph K_{a,b} with A-lists F_A has no proper
colouring exactly when every transversal of F_B contains some A-list (a
colouring is a colour set S hitting all A-lists whose complement hits all
B-lists, i.e. a transversal of F_B containing no A-list is what the A side
must avoid).  So the least bad ``a`` for F_B is a set-cover number: the
fewest k_A-sets such that each minimal transversal of F_B contains one.
The threshold a* is the minimum of that number over all B-families.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from bilist import kernels
from bilist.colorability import verify_certificate
from bilist.core import (
    Infeasible,
    SearchTimeout,
    TooLarge,
    complete_certificate,
)
from bilist.kernels import NodeLimit, bits, mask_of

DEFAULT_TRANSVERSAL_CAP = 10**6


@dataclass(frozen=True)
class Hypergraph:
    vertex_count: int
    edges: tuple

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(int(e) for e in self.edges))
        for e in self.edges:
            if e == 0:
                raise ValueError("hypergraph edges must be nonempty")
            if e >> self.vertex_count:
                raise ValueError("edge uses a vertex outside the vertex set")

    @classmethod
    def from_sets(cls, vertex_count, sets):
        return cls(vertex_count, tuple(mask_of(s) for s in sets))

    def is_antichain(self):
        es = self.edges
        return all(not (es[i] & es[j] == es[i]) for i in range(len(es)) for j in range(len(es)) if i != j)

    def as_sets(self):
        return [bits(e) for e in self.edges]


def minimal_transversals(h: Hypergraph, cap: int = DEFAULT_TRANSVERSAL_CAP) -> Hypergraph:
    """All inclusion-minimal sets meeting every edge (Berge dualisation)."""
    try:
        tr = kernels.minimal_transversals(h.edges, cap)
    except NodeLimit as exc:
        raise TooLarge(str(exc)) from None
    out = Hypergraph(h.vertex_count, tuple(tr))
    if len(out.edges) <= 2000 and not out.is_antichain():
        raise AssertionError("dualisation produced a non-antichain")
    return out


@dataclass(frozen=True)
class CoverResult:
    count: int
    family: tuple  # k_a-sets as bitmasks
    forced: int = 0

    def family_sets(self):
        return [bits(m) for m in self.family]


def transversal_cover_number(transversals: Hypergraph, k_a: int, limit=None, max_nodes=None):
    """Fewest k_a-sets such that every given transversal contains one.

    Returns a CoverResult, or None when ``limit`` is given and the optimum
    exceeds it.  Transversals smaller than ``k_a`` raise Infeasible.
    """
    edges = transversals.edges
    if any(e.bit_count() < k_a for e in edges):
        raise Infeasible(f"some transversal has fewer than {k_a} elements")
    if limit is None:
        limit = len(edges)
    try:
        fam = kernels.cover(edges, k_a, limit, max_nodes)
    except NodeLimit as exc:
        raise TooLarge(str(exc)) from None
    if fam is None:
        return None
    forced = sum(1 for e in edges if e.bit_count() == k_a)
    return CoverResult(len(fam), tuple(fam), forced)


# ---------------------------------------------------------------------------
# threshold search
# ---------------------------------------------------------------------------

@dataclass
class ThresholdResult:
    b: int
    k_a: int
    k_b: int
    a_star: int | None  # None means UNBOUNDED
    witness: object = None
    proof_note: dict = field(default_factory=dict)

    @property
    def unbounded(self):
        return self.a_star is None


@dataclass
class Decision:
    answer: str  # "YES" (choosable) or "NO"
    witness: object = None
    note: dict = field(default_factory=dict)

    @property
    def choosable(self):
        return self.answer == "YES"


def completeupper_lower_bound(b, k_a, k_b):
    """Largest integer a0 such that every a < a0 is covered by the first
    palette-split inequality for some p, so K_{a,b} is choosable for a < a0.
    """
    from bilist.bounds import optimize_eq1_a

    return optimize_eq1_a(b, k_a, k_b)


def _union_size(fam):
    u = 0
    for m in fam:
        u |= m
    return u.bit_length()


def _levels(b, kb, n):
    """Canonical families of b-1 distinct kb-lists with union <= n that can
    still reach union exactly n with one more list."""
    lev = [((), 0)]
    stats = [1]
    for j in range(1, b):
        nxt = set()
        for pre, u in lev:
            for ch in kernels.extend_family(pre, u, n, kb):
                uu = _union_size(ch)
                if uu + (b - j) * kb >= n:
                    nxt.add((ch, uu))
        lev = sorted(nxt)
        stats.append(len(lev))
    return lev, stats


def _evaluate_chunk(args):
    """Final-level scan of a slice of prefixes.

    Returns (best, witness_family, cover_family, counters) where ``best`` is
    the least cover size <= limit found in this slice (first in order wins).
    """
    prefixes, n, kb, ka, limit, stop_at, deadline, max_nodes, tcap = args
    best = None
    wit = None
    cov = None
    counters = {"families": 0, "covers": 0}
    for pre, u in prefixes:
        if deadline is not None and time.monotonic() > deadline:
            return best, wit, cov, counters, True
        if n - u > kb:
            continue
        cur_limit = limit if best is None else best - 1
        if cur_limit < 0:
            break
        for lst in kernels.scan_extensions(pre, u, n, kb, ka, cur_limit):
            fam = pre + (lst,)
            counters["families"] += 1
            try:
                tr = kernels.minimal_transversals(fam, tcap)
            except NodeLimit:
                raise TooLarge(f"more than {tcap} minimal transversals") from None
            if min(t.bit_count() for t in tr) < ka:
                continue
            counters["covers"] += 1
            try:
                res = kernels.cover(tr, ka, cur_limit, max_nodes)
            except NodeLimit:
                raise TooLarge(f"cover search exceeded {max_nodes} nodes") from None
            if res is not None:
                best = len(res)
                wit = fam
                cov = res
                cur_limit = best - 1
                if stop_at is not None and best <= stop_at:
                    return best, wit, cov, counters, False
    return best, wit, cov, counters, False


def _search(b, ka, kb, cap, stop_at=None, timeout=None, max_nodes=None, jobs=1,
            tcap=DEFAULT_TRANSVERSAL_CAP, initial_limit=None):
    """Iterative deepening over the palette size n = kb..cap.

    With ``stop_at`` set, returns as soon as some family has cover number
    <= stop_at.  Otherwise finds the minimum over all families.
    """
    deadline = None if timeout is None else time.monotonic() + timeout
    best = None
    best_n = None
    witness = None
    cover_fam = None
    note = {"palettes": [], "families_scanned": 0, "covers_solved": 0, "backend": kernels.BACKEND}
    limit0 = initial_limit if initial_limit is not None else 10**9
    if stop_at is not None:
        limit0 = min(limit0, stop_at)
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs and jobs > 1 else None
    try:
        for n in range(kb, cap + 1):
            if deadline is not None and time.monotonic() > deadline:
                raise _Timeout(n)
            lev, stats = _levels(b, kb, n)
            note["palettes"].append({"n": n, "level_sizes": stats})
            limit = limit0 if best is None else min(limit0, best - 1)
            if limit < 0:
                break
            if pool is None:
                chunks = [lev]
            else:
                size = max(1, math.ceil(len(lev) / (4 * jobs)))
                chunks = [lev[i:i + size] for i in range(0, len(lev), size)]
            args = [(c, n, kb, ka, limit, stop_at, deadline, max_nodes, tcap) for c in chunks]
            results = map(_evaluate_chunk, args) if pool is None else pool.map(_evaluate_chunk, args)
            timed_out = False
            for r_best, r_wit, r_cov, counters, r_to in results:
                note["families_scanned"] += counters["families"]
                note["covers_solved"] += counters["covers"]
                timed_out = timed_out or r_to
                if r_best is not None and (best is None or r_best < best):
                    best, witness, cover_fam, best_n = r_best, r_wit, r_cov, n
            if timed_out:
                raise _Timeout(n)
            if stop_at is not None and best is not None and best <= stop_at:
                break
    except _Timeout as t:
        note["timeout_at_palette"] = t.n
        return best, witness, cover_fam, best_n, note, True
    finally:
        if pool is not None:
            pool.shutdown()
    return best, witness, cover_fam, best_n, note, False


class _Timeout(Exception):
    def __init__(self, n):
        super().__init__(n)
        self.n = n


def _certificate(fam_b, cover_fam, ka, kb, a=None, provenance="SEARCH", notes=""):
    lists_b = [bits(m) for m in fam_b]
    lists_a = [bits(m) for m in cover_fam]
    if a is not None and len(lists_a) < a:
        # extra A-vertices repeat the first list; more A-vertices never help colouring
        lists_a = lists_a + [lists_a[0]] * (a - len(lists_a))
    cert = complete_certificate(lists_a, lists_b, provenance, notes, ka, kb)
    if not verify_certificate(cert).verified:
        raise AssertionError("search produced a certificate that does not verify")
    return cert


def threshold_a(b, k_a, k_b, palette_cap=None, timeout=None, max_nodes=None, jobs=1,
                transversal_cap=DEFAULT_TRANSVERSAL_CAP):
    """Least a such that K_{a,b} is not (k_a, k_b)-choosable.

    Exact when the search finishes over palettes up to ``palette_cap``
    (default b*k_b, which covers every B-family).  Raises SearchTimeout with
    a bracket when the time budget runs out.
    """
    if min(b, k_a, k_b) < 1:
        raise ValueError("b, k_a, k_b must be positive")
    if k_a > b:
        return ThresholdResult(b, k_a, k_b, None, None, {"reason": "k_a > b: A-lists outlast any B-colouring"})
    cap = b * k_b if palette_cap is None else palette_cap
    t0 = time.monotonic()
    best, fam_b, cov, best_n, note, timed_out = _search(
        b, k_a, k_b, cap, None, timeout, max_nodes, jobs, transversal_cap)
    note["seconds"] = round(time.monotonic() - t0, 3)
    note["palette_cap"] = cap
    note["exhaustive"] = not timed_out and cap >= b * k_b
    if timed_out:
        lower = completeupper_lower_bound(b, k_a, k_b)
        wit = None if best is None else _certificate(fam_b, cov, k_a, k_b)
        raise SearchTimeout(f"threshold search for b={b}, k_a={k_a}, k_b={k_b} ran out of time",
                            lower=lower, upper=best, witness=wit)
    if best is None:
        raise Infeasible(f"no B-family over at most {cap} colours blocks k_a={k_a}")
    note["witness_palette"] = best_n
    cert = _certificate(fam_b, cov, k_a, k_b, notes=f"threshold witness for b={b}, k_a={k_a}, k_b={k_b}")
    return ThresholdResult(b, k_a, k_b, best, cert, note)


def is_choosable_complete(a, b, k_a, k_b, palette_cap=None, timeout=None, max_nodes=None, jobs=1,
                          transversal_cap=DEFAULT_TRANSVERSAL_CAP):
    """YES if K_{a,b} is (k_a, k_b)-choosable, else NO with a verified certificate.

    The search stops at the first B-family whose cover number is <= a.
    """
    if k_a > b:
        return Decision("YES", None, {"reason": "k_a > b"})
    cap = b * k_b if palette_cap is None else palette_cap
    t0 = time.monotonic()
    best, fam_b, cov, best_n, note, timed_out = _search(
        b, k_a, k_b, cap, a, timeout, max_nodes, jobs, transversal_cap)
    note["seconds"] = round(time.monotonic() - t0, 3)
    if best is not None and best <= a:
        note["witness_palette"] = best_n
        cert = _certificate(fam_b, cov, k_a, k_b, a,
                            notes=f"K_{{{a},{b}}} is not ({k_a},{k_b})-choosable")
        return Decision("NO", cert, note)
    if timed_out:
        lower = completeupper_lower_bound(b, k_a, k_b)
        raise SearchTimeout(f"choosability search for K_{{{a},{b}}} ran out of time",
                            lower=lower, upper=None)
    if cap < b * k_b:
        note["partial"] = f"only palettes <= {cap} were searched"
        raise SearchTimeout("palette cap below b*k_b: only a partial answer",
                            lower=completeupper_lower_bound(b, k_a, k_b), upper=None)
    return Decision("YES", None, note)
