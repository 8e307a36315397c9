"""Explicit non-choosable list assignments, each emitted as a certificate.

Every generator re-runs the colourability verifier on what it built before
returning, so a bug in a construction surfaces as an exception rather than
as a bad certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

from bilist import bounds
from bilist.colorability import verify_certificate
from bilist.core import (
    BipartiteGraph,
    ListAssignment,
    NonChoosabilityCertificate,
    PropertyAHolds,
    ScaleError,
    SizeCap,
    complete_certificate,
)
from bilist.kernels import bits, mask_of
from bilist.steiner import (
    SetFamily,
    fano_complements,
    fano_lines,
    has_property_a,
    mbar_bounds,
    mbar_exact,
    random_family_upper,
)

DEFAULT_CAP = 10**6


def _checked(cert):
    v = verify_certificate(cert)
    if not v.verified:
        raise AssertionError(f"{cert.provenance} construction is colourable: {v.colouring}")
    return cert


# ---------------------------------------------------------------------------
# classic: K_{delta^k, k}
# ---------------------------------------------------------------------------

def classic_lists(k, delta):
    lists_b = [list(range(j * delta, (j + 1) * delta)) for j in range(k)]
    lists_a = [list(t) for t in product(*lists_b)]
    return lists_a, lists_b


def construct_classic(k, delta, cap=DEFAULT_CAP) -> NonChoosabilityCertificate:
    """k disjoint delta-lists on B, every transversal k-tuple on A."""
    if k < 1 or delta < 1:
        raise ValueError("k and delta must be positive")
    if delta ** k > cap:
        raise SizeCap(f"delta^k = {delta ** k} exceeds the cap {cap}")
    lists_a, lists_b = classic_lists(k, delta)
    return _checked(complete_certificate(lists_a, lists_b, "CLASSIC",
                                         notes=f"k={k} delta={delta}"))


# ---------------------------------------------------------------------------
# Steiner-type: families without Property A on both sides
# ---------------------------------------------------------------------------

def transversal_number(fam: SetFamily):
    """Least t with a t-set meeting every block."""
    if not fam.blocks:
        return 0
    for t in range(1, fam.ground_size + 1):
        if has_property_a(fam, t) is not None:
            return t
    return fam.ground_size + 1


def construct_steiner(fam_a: SetFamily, fam_b: SetFamily, k1=None, k2=None) -> NonChoosabilityCertificate:
    """A-lists = blocks of fam_a, B-lists = blocks of fam_b on K_{|fam_a|,|fam_b|}.

    fam_a must lack Property A(k1) and fam_b Property A(k2) with
    k1 + k2 + 1 >= l.  When k1 or k2 is omitted the largest admissible value
    (transversal number minus one) is used.
    """
    if fam_a.ground_size != fam_b.ground_size:
        raise ValueError("families live on different ground sets")
    l = fam_a.ground_size
    for name, fam, k in (("A", fam_a, k1), ("B", fam_b, k2)):
        if k is not None:
            w = has_property_a(fam, k)
            if w is not None:
                raise PropertyAHolds(f"the {name}-family has Property A({k}, {fam.block_size}, {l}): "
                                     f"{sorted(w)} meets every block", which=name, witness=sorted(w))
    if k1 is None:
        k1 = transversal_number(fam_a) - 1
    if k2 is None:
        k2 = transversal_number(fam_b) - 1
    if k1 + k2 + 1 < l:
        # name the side whose obstruction is too weak, with a hitting set as witness
        need = l - 1 - k2
        w = has_property_a(fam_a, min(need, l))
        raise PropertyAHolds(f"need k1 + k2 + 1 >= {l}; the A-family has Property A({need}) "
                             f"via {sorted(w) if w else None}", which="A", witness=sorted(w) if w else None)
    notes = f"l={l} k1={k1} k2={k2}"
    return _checked(complete_certificate([bits(x) for x in fam_a.blocks], [bits(x) for x in fam_b.blocks],
                                         "STEINER", notes=notes))


def all_subsets_family(l, k) -> SetFamily:
    return SetFamily.from_sets(l, k, combinations(range(l), k))


def construct_fano_k35() -> NonChoosabilityCertificate:
    return construct_steiner(all_subsets_family(7, 3), fano_complements(), 4, 2)


def fano_k28_lists():
    """The 35 triples minus the 7 Fano lines.

    A triple meets the complement of every line except itself, so the 28
    non-line triples are exactly the 3-transversals of the B-family; the 7
    lines are contained in no transversal and cannot block any colouring.
    """
    lines = {tuple(sorted(ln)) for ln in fano_lines()}
    return [list(t) for t in combinations(range(7), 3) if t not in lines]


def construct_fano_k28() -> NonChoosabilityCertificate:
    fam_b = fano_complements()
    return _checked(complete_certificate(fano_k28_lists(), fam_b.as_sets(), "STEINER",
                                         notes="35 triples of [7] minus the 7 Fano lines; B = line complements"))


# ---------------------------------------------------------------------------
# boundary case k_A = b - 1
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundaryParams:
    b: int
    delta: int

    def __post_init__(self):
        if self.b < 3 or self.delta < 2:
            raise ValueError("need b >= 3 and delta >= 2")

    @property
    def q(self):
        return self.delta // (self.b - 1)

    @property
    def r(self):
        return self.delta % (self.b - 1)


def _b4_expression(delta, l12, l13, l23):
    s = l12 + l13 + l23
    return (delta ** 3 - s * delta ** 2 + s * s * delta
            - (l12 + l13) * (l12 + l23) * (l13 + l23))


def _b4_triple(delta):
    best = None
    for l12 in range(1, delta + 1):
        for l13 in range(1, delta + 1 - l12):
            for l23 in range(1, delta + 1):
                if l12 + l23 > delta or l13 + l23 > delta:
                    continue
                v = _b4_expression(delta, l12, l13, l23)
                if best is None or v < best[0]:
                    best = (v, (l12, l13, l23))
    return best


def boundary_lists_b(b, delta):
    """B-lists of the extremal boundary assignment and their private parts.

    b = 4 uses the non-trivial intersecting pattern (L12, L13, L23 nonempty)
    with the overlap sizes minimising the counting expression.  Other b use
    the star pattern: v1 shares disjoint blocks with v2..v_{b-1}, v_b is
    disjoint, and the b-1 parts of v1's list are split as evenly as possible,
    larger parts first.
    """
    nxt = iter(range(10**9))
    if b == 4:
        _, (l12, l13, l23) = _b4_triple(delta)
        s12 = [next(nxt) for _ in range(l12)]
        s13 = [next(nxt) for _ in range(l13)]
        s23 = [next(nxt) for _ in range(l23)]
        lists = [s12 + s13, s12 + s23, s13 + s23, []]
        info = {"pattern": "non-trivial", "l12": l12, "l13": l13, "l23": l23}
    else:
        q, r = divmod(delta, b - 1)
        parts = [q + 1] * r + [q] * (b - 1 - r)
        lists = [[] for _ in range(b)]
        for j in range(1, b - 1):
            shared = [next(nxt) for _ in range(parts[j])]
            lists[0] += shared
            lists[j] += shared
        info = {"pattern": "trivial", "parts": parts}
    privates = []  # colours of each list seen by no other B-vertex
    for lst in lists:
        extra = [next(nxt) for _ in range(delta - len(lst))]
        privates.append(extra)
        lst += extra
    return lists, privates, info


def boundary_lists(b, delta, cap=DEFAULT_CAP):
    lists_b, privates, info = boundary_lists_b(b, delta)
    masks = [mask_of(x) for x in lists_b]
    palette = sorted({c for x in lists_b for c in x})
    lists_a = []
    count = 0
    for s in combinations(palette, b - 1):
        m = mask_of(s)
        if all(m & x for x in masks):
            lists_a.append(list(s))
            count += 1
            if count > cap:
                raise SizeCap(f"boundary construction exceeds {cap} A-lists")
    # all-private b-transversals: drop the colour of the last vertex
    n_priv = math.prod(len(p) for p in privates[:-1])
    if len(lists_a) + n_priv > cap:
        raise SizeCap(f"boundary construction exceeds {cap} A-lists")
    for t in product(*privates[:-1]):
        lists_a.append(list(t))
    return lists_a, lists_b, info


def construct_boundary(params, delta=None, cap=DEFAULT_CAP) -> NonChoosabilityCertificate:
    """Extremal (b-1, delta)-assignment on K_{a,b} for the boundary case.

    Accepts a BoundaryParams or (b, delta).  The number of A-lists is
    compared with the closed-form threshold and the comparison is recorded
    in the notes; the certificate is verified mechanically either way.
    """
    if not isinstance(params, BoundaryParams):
        params = BoundaryParams(params, delta)
    b, d = params.b, params.delta
    lists_a, lists_b, info = boundary_lists(b, d, cap)
    formula = bounds.boundary_threshold(b, d)
    agree = len(lists_a) == formula
    info.update({"a": len(lists_a), "formula": formula, "agrees": agree, "q": params.q, "r": params.r})
    notes = " ".join(f"{k}={v}" for k, v in info.items())
    return _checked(complete_certificate(lists_a, lists_b, "BOUNDARY", notes=notes, k_a=b - 1, k_b=d))


# ---------------------------------------------------------------------------
# recursive gadget: sparser than complete
# ---------------------------------------------------------------------------

@dataclass
class GadgetLevel:
    level: int
    a_size: int
    b_size: int
    lists_a: list
    lists_b: list
    edges: list
    designated: int  # index of b_i in B
    restricted: list  # colours b_i can still take
    palette_span: int = 0

    def graph(self):
        return BipartiteGraph.from_edges(self.a_size, self.b_size, self.edges)


def _gadget_first(k, delta):
    lists_b = [list(range(j * delta, (j + 1) * delta)) for j in range(k)]
    pinch = lists_b[0][0]
    lists_a = [[pinch] + list(t) for t in product(*lists_b[1:])]
    edges = [(i, j) for i in range(len(lists_a)) for j in range(k)]
    return GadgetLevel(1, len(lists_a), k, lists_a, lists_b, edges, 0, lists_b[0][1:], k * delta)


def _gadget_next(prev: GadgetLevel, k, delta):
    i = prev.level
    span = prev.palette_span
    lists_a, lists_b, edges = [], [], []
    heads, restricted = [], []
    for c in range(k):
        off = c * span
        a0, b0 = len(lists_a), len(lists_b)
        lists_a += [[x + off for x in lst] for lst in prev.lists_a]
        lists_b += [[x + off for x in lst] for lst in prev.lists_b]
        edges += [(u + a0, v + b0) for u, v in prev.edges]
        heads.append(prev.designated + b0)
        restricted.append([x + off for x in prev.restricted])
    pinch = restricted[0][0]
    for t in product(*restricted[1:]):
        u = len(lists_a)
        lists_a.append([pinch] + list(t))
        edges += [(u, v) for v in heads]
    return GadgetLevel(i + 1, len(lists_a), len(lists_b), lists_a, lists_b, edges,
                       heads[0], restricted[0][1:], k * span)


def gadget_levels(k, delta, cap=DEFAULT_CAP):
    """G_1 .. G_delta with their list assignments and designated vertices."""
    if k < 2 or delta < 2:
        raise ValueError("need k, delta >= 2")
    levels = [_gadget_first(k, delta)]
    while levels[-1].level < delta:
        size = k * (levels[-1].a_size + levels[-1].b_size)
        if size > cap:
            raise SizeCap(f"gadget level {levels[-1].level + 1} exceeds {cap} vertices")
        levels.append(_gadget_next(levels[-1], k, delta))
    return levels


def construct_gadget(k, delta, cap=DEFAULT_CAP) -> NonChoosabilityCertificate:
    top = gadget_levels(k, delta, cap)[-1]
    g = top.graph()
    la = ListAssignment.build(top.lists_a, top.lists_b, k, delta)
    notes = (f"k={k} delta={delta} max_deg_a={g.max_degree_a} max_deg_b={g.max_degree_b} "
             f"designated_b={top.designated}")
    return _checked(NonChoosabilityCertificate(g, la, "GADGET", notes=notes))


def gadget_degree_sum(k, delta):
    return sum(i ** (k - 1) for i in range(1, delta + 1))


# ---------------------------------------------------------------------------
# segment construction for large k_A
# ---------------------------------------------------------------------------

@dataclass
class Cond3Report:
    k: int
    delta: float
    c: Fraction
    m_formula: float
    segments_formula: float
    t_formula: float
    b_size_formula: float
    a_size_upper: float
    m: int | None = None
    segments: int | None = None
    t: int | None = None
    a_size: int | None = None
    b_size: int | None = None
    a_family_source: str | None = None
    extra: dict = field(default_factory=dict)

    def as_dict(self):
        d = dict(self.__dict__)
        d["c"] = str(self.c)
        return d


def cond3_report(k, Delta) -> Cond3Report:
    """The formula side of the construction (natural logarithms)."""
    c = Fraction(1, 4 * k * (k - 1))
    L = math.log(Delta)
    m = float(c) * (Delta / L) ** (1 / k) * L
    segs = math.log(m) / (2 * (k - 1))  # (k-1) * segments = (log m)/2
    t = math.log(m) / 2
    seg_len = math.ceil(m / segs)
    b_size = segs * math.comb(seg_len, k)
    mi = max(2, int(round(m / 2)) * 2)
    ti = max(1, int(round(t)))
    try:
        a_up = float(mbar_bounds(ti, mi // 2, mi).upper) if ti + mi // 2 <= mi else float("nan")
    except (ValueError, OverflowError):
        a_up = float("nan")
    return Cond3Report(k, Delta, c, m, segs, t, b_size, a_up)


def _segments(m, count):
    base, extra = divmod(m, count)
    out, start = [], 0
    for s in range(count):
        size = base + (1 if s < extra else 0)
        out.append(list(range(start, start + size)))
        start += size
    return out


def construct_witness_cond3(k, Delta, m=None, segments=None, m_cap=16, max_nodes=10**7):
    """Certificate plus parameter report for the segment construction.

    Without ``m`` the size comes from the formula and, when it exceeds
    ``m_cap``, ScaleError carries the report.  With explicit ``m`` (even)
    and ``segments`` a desk-scale instance is built: B gets every k-subset
    of each segment, A gets a family of (m/2)-sets without Property
    A((k-1)*segments, m/2, m).
    """
    rep = cond3_report(k, Delta)
    if m is None:
        m = int(round(rep.m_formula / 2)) * 2
        if m > m_cap:
            raise ScaleError(f"m = {rep.m_formula:.1f} is beyond the desk cap {m_cap}", report=rep.as_dict())
    if m % 2 or m < 2 * k:
        raise ValueError("m must be even and at least 2k")
    if segments is None:
        segments = max(1, int(round(rep.segments_formula)))
    segs = _segments(m, segments)
    if min(len(s) for s in segs) < k:
        raise ValueError("every segment needs at least k colours")
    t = (k - 1) * segments
    half = m // 2
    if t + half > m:
        raise ScaleError(f"(k-1)*segments = {t} exceeds m/2 = {half}", report=rep.as_dict())
    lists_b = [list(x) for s in segs for x in combinations(s, k)]
    if m <= m_cap:
        res = mbar_exact(t, half, m, max_nodes=max_nodes)
        fam = res.family
        source = "exact" if res.exact else "bracket-upper"
    else:
        fam = random_family_upper(t, half, m, seed=0)
        source = "random"
    if fam is None or has_property_a(fam, t) is not None:
        raise AssertionError("A-side family has Property A")
    lists_a = fam.as_sets()
    rep.m, rep.segments, rep.t = m, segments, t
    rep.a_size, rep.b_size, rep.a_family_source = len(lists_a), len(lists_b), source
    notes = f"k={k} Delta={Delta} m={m} segments={segments} t={t} A-family={source}"
    cert = _checked(complete_certificate(lists_a, lists_b, "WITNESS", notes=notes, k_a=half, k_b=k))
    return cert, rep


def b_union_miss_max(k, m, segments):
    """Largest number of colours of [m] left unused by a choice of one colour
    per B-list, by exhaustive search over all choice functions."""
    segs = _segments(m, segments)
    best = 0
    for s in segs:
        subsets = list(combinations(s, k))
        local = 0
        for choice in product(*subsets):
            local = max(local, len(s) - len(set(choice)))
        best += local
    return best
