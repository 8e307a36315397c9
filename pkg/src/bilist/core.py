"""Value types shared by every module: graphs, list assignments, colourings,
certificates and parameter points, plus canonical forms and certificate I/O.

Colours are dense integers ``0..palette-1``.  Sets of colours and adjacency
rows are Python ints used as bitsets, so there is no width limit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import permutations, product

from bilist import kernels
from bilist.kernels import bits, mask_of

SCHEMA = "bilist-cert/1"
CLAIMS = ("NOT_LIST_COLOURABLE",)
PROVENANCES = ("CLASSIC", "STEINER", "BOUNDARY", "GADGET", "WITNESS", "SEARCH")


# ---------------------------------------------------------------------------
# errors
# ---------------------------------------------------------------------------

class BilistError(Exception):
    code = "ERROR"


class Malformed(BilistError):
    code = "MALFORMED"

    def __init__(self, msg, line=None, column=None):
        if line is not None:
            msg = f"line {line}, column {column}: {msg}"
        super().__init__(msg)
        self.line = line
        self.column = column


class Inconsistent(BilistError):
    code = "INCONSISTENT"


class ShapeMismatch(BilistError):
    code = "SHAPE_MISMATCH"


class TooLarge(BilistError):
    code = "TOO_LARGE"

    def __init__(self, msg, bracket=None):
        super().__init__(msg)
        self.bracket = bracket


class Infeasible(BilistError):
    code = "INFEASIBLE"


class SearchTimeout(BilistError):
    """Raised when a search hits its time or node budget; carries a bracket."""

    code = "TIMEOUT"

    def __init__(self, msg, lower=None, upper=None, witness=None):
        super().__init__(msg)
        self.lower = lower
        self.upper = upper
        self.witness = witness


class SizeCap(BilistError):
    code = "SIZE"


class PropertyAHolds(BilistError):
    code = "PROPERTY_A_HOLDS"

    def __init__(self, msg, which=None, witness=None):
        super().__init__(msg)
        self.which = which
        self.witness = witness


class RetryExhausted(BilistError):
    code = "RETRY_EXHAUSTED"


class ScaleError(BilistError):
    code = "SCALE"

    def __init__(self, msg, report=None):
        super().__init__(msg)
        self.report = report


class RegionTooLarge(BilistError):
    code = "REGION_TOO_LARGE"


# ---------------------------------------------------------------------------
# graphs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BipartiteGraph:
    """Bipartite graph with parts A (``a_size``) and B (``b_size``).

    ``rows[i]`` is the bitset of B-neighbours of A-vertex ``i``; complete
    graphs store no rows.
    """

    a_size: int
    b_size: int
    rows: tuple = ()
    complete: bool = False

    def __post_init__(self):
        if self.a_size < 0 or self.b_size < 0:
            raise Inconsistent("part sizes must be non-negative")
        if self.complete:
            if self.rows:
                raise Inconsistent("a complete graph stores no adjacency rows")
            return
        if len(self.rows) != self.a_size:
            raise Inconsistent(f"expected {self.a_size} adjacency rows, got {len(self.rows)}")
        limit = 1 << self.b_size
        for i, r in enumerate(self.rows):
            if r < 0 or r >= limit:
                raise Inconsistent(f"row {i} references a B-vertex >= {self.b_size}")

    @classmethod
    def complete_graph(cls, a, b):
        return cls(a, b, (), True)

    @classmethod
    def from_edges(cls, a, b, edges):
        rows = [0] * a
        for i, j in edges:
            if not (0 <= i < a and 0 <= j < b):
                raise Inconsistent(f"edge ({i}, {j}) out of range for parts {a}, {b}")
            rows[i] |= 1 << j
        return cls(a, b, tuple(rows), False)

    def row(self, i):
        if self.complete:
            return (1 << self.b_size) - 1
        return self.rows[i]

    def neighbours_a(self, i):
        return bits(self.row(i))

    def neighbours_b(self, j):
        if self.complete:
            return list(range(self.a_size))
        return [i for i in range(self.a_size) if self.rows[i] >> j & 1]

    def has_edge(self, i, j):
        return bool(self.row(i) >> j & 1)

    def edges(self):
        return [(i, j) for i in range(self.a_size) for j in bits(self.row(i))]

    def degrees_a(self):
        return [self.row(i).bit_count() for i in range(self.a_size)]

    def degrees_b(self):
        if self.complete:
            return [self.a_size] * self.b_size
        deg = [0] * self.b_size
        for r in self.rows:
            for j in bits(r):
                deg[j] += 1
        return deg

    @property
    def max_degree_a(self):
        return max(self.degrees_a(), default=0)

    @property
    def max_degree_b(self):
        return max(self.degrees_b(), default=0)

    @property
    def min_degree_b(self):
        return min(self.degrees_b(), default=0)


# ---------------------------------------------------------------------------
# list assignments and colourings
# ---------------------------------------------------------------------------

def _norm_lists(lists):
    return tuple(tuple(sorted(int(c) for c in lst)) for lst in lists)


@dataclass(frozen=True)
class ListAssignment:
    """Uniform list assignment: ``k_a`` colours per A-vertex, ``k_b`` per B-vertex.

    Every colour in ``0..palette-1`` must occur in some list.  Use
    :meth:`build` to relabel arbitrary colours densely.
    """

    palette: int
    lists_a: tuple
    lists_b: tuple
    k_a: int
    k_b: int

    def __post_init__(self):
        object.__setattr__(self, "lists_a", _norm_lists(self.lists_a))
        object.__setattr__(self, "lists_b", _norm_lists(self.lists_b))
        for side, lists, k in (("A", self.lists_a, self.k_a), ("B", self.lists_b, self.k_b)):
            for v, lst in enumerate(lists):
                if len(lst) != k or len(set(lst)) != k:
                    raise Inconsistent(f"{side}-list {v} must hold exactly {k} distinct colours: {list(lst)}")
                for c in lst:
                    if c < 0 or c >= self.palette:
                        raise Inconsistent(f"{side}-list {v} uses colour {c} outside palette {self.palette}")
        used = set()
        for lst in self.lists_a + self.lists_b:
            used.update(lst)
        if len(used) != self.palette:
            raise Inconsistent(f"palette {self.palette} but only {len(used)} colours are used")

    @classmethod
    def build(cls, lists_a, lists_b, k_a=None, k_b=None):
        """Relabel colours densely by sorted original value and build."""
        lists_a = [list(x) for x in lists_a]
        lists_b = [list(x) for x in lists_b]
        used = sorted({c for lst in lists_a + lists_b for c in lst})
        relabel = {c: i for i, c in enumerate(used)}
        if k_a is None:
            k_a = len(lists_a[0]) if lists_a else 0
        if k_b is None:
            k_b = len(lists_b[0]) if lists_b else 0
        return cls(
            len(used),
            [[relabel[c] for c in lst] for lst in lists_a],
            [[relabel[c] for c in lst] for lst in lists_b],
            k_a,
            k_b,
        )

    @property
    def a_size(self):
        return len(self.lists_a)

    @property
    def b_size(self):
        return len(self.lists_b)

    @property
    def masks_a(self):
        return [mask_of(lst) for lst in self.lists_a]

    @property
    def masks_b(self):
        return [mask_of(lst) for lst in self.lists_b]


@dataclass(frozen=True)
class ProperColouring:
    colours_a: tuple
    colours_b: tuple

    def violations(self, graph, assignment):
        """Return a list of human-readable problems (empty when proper)."""
        out = []
        if len(self.colours_a) != graph.a_size or len(self.colours_b) != graph.b_size:
            return ["colouring shape does not match the graph"]
        for i, c in enumerate(self.colours_a):
            if c not in assignment.lists_a[i]:
                out.append(f"A-vertex {i} coloured {c} outside its list")
        for j, c in enumerate(self.colours_b):
            if c not in assignment.lists_b[j]:
                out.append(f"B-vertex {j} coloured {c} outside its list")
        for i in range(graph.a_size):
            for j in bits(graph.row(i)):
                if self.colours_a[i] == self.colours_b[j]:
                    out.append(f"edge ({i}, {j}) is monochromatic")
        return out

    def is_proper(self, graph, assignment):
        return not self.violations(graph, assignment)


def check_shapes(graph, assignment):
    if graph.a_size != assignment.a_size or graph.b_size != assignment.b_size:
        raise ShapeMismatch(
            f"graph has parts {graph.a_size}, {graph.b_size} but the assignment has "
            f"{assignment.a_size} A-lists and {assignment.b_size} B-lists"
        )


@dataclass(frozen=True)
class NonChoosabilityCertificate:
    graph: BipartiteGraph
    assignment: ListAssignment
    provenance: str
    claim: str = "NOT_LIST_COLOURABLE"
    notes: str = ""

    def __post_init__(self):
        if self.claim not in CLAIMS:
            raise Inconsistent(f"unknown claim {self.claim!r}")
        if self.provenance not in PROVENANCES:
            raise Inconsistent(f"unknown provenance {self.provenance!r}")
        check_shapes(self.graph, self.assignment)

    @property
    def k_a(self):
        return self.assignment.k_a

    @property
    def k_b(self):
        return self.assignment.k_b

    def point(self):
        if self.graph.complete:
            return ParamPoint.complete(self.graph.a_size, self.graph.b_size, self.k_a, self.k_b)
        return ParamPoint.degree(self.graph.max_degree_a, self.graph.max_degree_b, self.k_a, self.k_b)


@dataclass(frozen=True)
class ParamPoint:
    """Parameters at which conditions are evaluated.

    In COMPLETE mode ``a`` and ``b`` are the part sizes of K_{a,b}; then the
    maximum A-degree is ``b`` and the maximum B-degree is ``a``.
    """

    mode: str
    delta_a: int
    delta_b: int
    k_a: int
    k_b: int
    a: int = 0
    b: int = 0

    def __post_init__(self):
        if self.mode not in ("DEGREE", "COMPLETE"):
            raise Inconsistent(f"unknown mode {self.mode!r}")
        for name in ("delta_a", "delta_b", "k_a", "k_b"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise Inconsistent(f"{name} must be a positive integer, got {v!r}")

    @classmethod
    def degree(cls, delta_a, delta_b, k_a, k_b):
        return cls("DEGREE", delta_a, delta_b, k_a, k_b)

    @classmethod
    def complete(cls, a, b, k_a, k_b):
        return cls("COMPLETE", b, a, k_a, k_b, a, b)

    def fields(self):
        out = {"mode": self.mode, "delta_a": self.delta_a, "delta_b": self.delta_b,
               "k_a": self.k_a, "k_b": self.k_b}
        if self.mode == "COMPLETE":
            out["a"] = self.a
            out["b"] = self.b
        return out


# ---------------------------------------------------------------------------
# canonical form of an assignment
# ---------------------------------------------------------------------------

def _a_side_labels(lists_a, code):
    """Colour invariants from the A-lists, given each colour's B-code."""
    colours = sorted(code)
    members = {c: [] for c in colours}
    for idx, lst in enumerate(lists_a):
        for c in lst:
            members[c].append(idx)
    lab = {c: kernels._py.mix64(code[c] + 7) for c in colours}
    for _ in range(kernels._py.REFINE_ROUNDS):
        ll = [sum(kernels._py.mix64(lab[c]) for c in lst) & kernels._py.M64 for lst in lists_a]
        lab = {
            c: kernels._py.mix64(lab[c] ^ (sum(kernels._py.mix64(ll[i] + 1) for i in members[c]) & kernels._py.M64))
            for c in colours
        }
    return {c: (-len(members[c]), lab[c]) for c in colours}


def canonicalize_assignment(assignment: ListAssignment) -> ListAssignment:
    """Canonical representative of the orbit under colour relabelling and
    permutations of the A-vertices and of the B-vertices.

    The B-lists are put in the canonical form of ``kernels.canonical_family``.
    Colours sharing a B-membership code form blocks of consecutive labels.
    Inside each block, colours are ordered by an A-side invariant (A-degree
    first, larger first) and every labelling that respects those cells is
    tried; the least sorted tuple of A-lists wins.  The result is idempotent
    and identical for all members of an orbit.
    """
    b_masks = assignment.masks_b
    py = kernels._py
    if b_masks:
        best_key, _ = kernels.canonical_family(b_masks)
        orders = [o for o in py.list_orders(b_masks)
                  if tuple(sorted(py.column_codes(b_masks, o).values(), reverse=True)) == best_key]
    else:
        best_key, orders = (), [[]]
    best_a = None
    best_b = None
    for order in orders:
        code = py.column_codes(b_masks, order)
        for c in range(assignment.palette):
            code.setdefault(c, 0)
        inv = _a_side_labels(assignment.lists_a, code)
        # blocks in decreasing code order, then cells by invariant
        groups = {}
        for c in range(assignment.palette):
            groups.setdefault((-code[c], inv[c]), []).append(c)
        cells = [groups[k] for k in sorted(groups)]
        for choice in product(*(permutations(cell) for cell in cells)):
            relabel = {}
            nxt = 0
            for cell in choice:
                for c in cell:
                    relabel[c] = nxt
                    nxt += 1
            la = tuple(sorted(tuple(sorted(relabel[c] for c in lst)) for lst in assignment.lists_a))
            if best_a is None or la < best_a:
                best_a = la
                best_b = tuple(sorted(tuple(sorted(relabel[c] for c in lst)) for lst in assignment.lists_b))
    return ListAssignment(assignment.palette, best_a, best_b, assignment.k_a, assignment.k_b)


# ---------------------------------------------------------------------------
# certificate serialisation
# ---------------------------------------------------------------------------

def certificate_to_dict(cert: NonChoosabilityCertificate) -> dict:
    g = cert.graph
    graph = {"complete": g.complete, "a": g.a_size, "b": g.b_size}
    if not g.complete:
        graph["edges"] = [[i, j] for i, j in sorted(g.edges())]
    return {
        "schema": SCHEMA,
        "claim": cert.claim,
        "provenance": cert.provenance,
        "graph": graph,
        "k_a": cert.k_a,
        "k_b": cert.k_b,
        "palette": cert.assignment.palette,
        "lists_a": [list(x) for x in cert.assignment.lists_a],
        "lists_b": [list(x) for x in cert.assignment.lists_b],
        "notes": cert.notes,
    }


def write_certificate(cert: NonChoosabilityCertificate) -> str:
    d = certificate_to_dict(cert)
    lines = ["{"]
    keys = list(d)
    for n, key in enumerate(keys):
        sep = "," if n < len(keys) - 1 else ""
        val = d[key]
        if key in ("lists_a", "lists_b") or (key == "graph" and "edges" in val):
            if key == "graph":
                head = {k: v for k, v in val.items() if k != "edges"}
                inner = json.dumps(head)[:-1]
                edges = ",\n    ".join(json.dumps(e) for e in val["edges"])
                lines.append(f'  "graph": {inner}, "edges": [\n    {edges}\n  ]}}{sep}')
            else:
                body = ",\n    ".join(json.dumps(x) for x in val)
                lines.append(f'  "{key}": [\n    {body}\n  ]{sep}' if val else f'  "{key}": []{sep}')
        else:
            lines.append(f"  {json.dumps(key)}: {json.dumps(val)}{sep}")
    lines.append("}")
    return "\n".join(lines) + "\n"


_FIELDS = ("schema", "claim", "provenance", "graph", "k_a", "k_b", "palette", "lists_a", "lists_b", "notes")


def _want_int(d, key, where="certificate"):
    v = d.get(key)
    if isinstance(v, bool) or not isinstance(v, int):
        raise Malformed(f"{where} field {key!r} must be an integer")
    return v


def read_certificate(text) -> NonChoosabilityCertificate:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise Malformed(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(d, dict):
        raise Malformed("certificate must be an object", 1, 1)
    missing = [k for k in _FIELDS if k not in d]
    extra = [k for k in d if k not in _FIELDS]
    if missing:
        raise Malformed(f"missing fields: {', '.join(missing)}")
    if extra:
        raise Malformed(f"unknown fields: {', '.join(extra)}")
    if d["schema"] != SCHEMA:
        raise Malformed(f"unsupported schema {d['schema']!r}")
    g = d["graph"]
    if not isinstance(g, dict) or "complete" not in g:
        raise Malformed("graph must be an object with a 'complete' flag")
    a = _want_int(g, "a", "graph")
    b = _want_int(g, "b", "graph")
    if not isinstance(g["complete"], bool):
        raise Malformed("graph field 'complete' must be a boolean")
    if g["complete"]:
        if "edges" in g:
            raise Malformed("complete graphs must not list edges")
        graph = BipartiteGraph.complete_graph(a, b)
    else:
        if "edges" not in g:
            raise Malformed("non-complete graphs must list edges")
        edges = g["edges"]
        if not isinstance(edges, list) or not all(
            isinstance(e, list) and len(e) == 2 and all(isinstance(x, int) for x in e) for e in edges
        ):
            raise Malformed("edges must be a list of [a_idx, b_idx] pairs")
        graph = BipartiteGraph.from_edges(a, b, [tuple(e) for e in edges])
    for key in ("lists_a", "lists_b"):
        v = d[key]
        if not isinstance(v, list) or not all(
            isinstance(x, list) and all(isinstance(c, int) and not isinstance(c, bool) for c in x) for x in v
        ):
            raise Malformed(f"{key} must be a list of integer lists")
    if not isinstance(d["notes"], str):
        raise Malformed("notes must be a string")
    assignment = ListAssignment(
        _want_int(d, "palette"), d["lists_a"], d["lists_b"], _want_int(d, "k_a"), _want_int(d, "k_b")
    )
    try:
        return NonChoosabilityCertificate(graph, assignment, d["provenance"], d["claim"], d["notes"])
    except ShapeMismatch as exc:
        raise Inconsistent(str(exc)) from None


def load_certificate(path) -> NonChoosabilityCertificate:
    with open(path, "rb") as fh:
        return read_certificate(fh.read())


def save_certificate(cert, path):
    with open(path, "w") as fh:
        fh.write(write_certificate(cert))


def complete_certificate(lists_a, lists_b, provenance, notes="", k_a=None, k_b=None):
    """Certificate on K_{|A|,|B|} with the given lists (colours relabelled densely)."""
    la = ListAssignment.build(lists_a, lists_b, k_a, k_b)
    g = BipartiteGraph.complete_graph(la.a_size, la.b_size)
    return NonChoosabilityCertificate(g, la, provenance, notes=notes)
