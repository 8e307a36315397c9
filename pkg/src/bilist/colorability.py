"""Deciding whether a fixed list assignment on a bipartite graph has a proper
colouring.  This is the verifier behind every certificate.
"""

from __future__ import annotations

from dataclasses import dataclass

from bilist import kernels
from bilist.core import (
    BipartiteGraph,
    Inconsistent,
    ListAssignment,
    ProperColouring,
    check_shapes,
)
from bilist.kernels import bits, mask_of


@dataclass(frozen=True)
class SeparatorQuery:
    """Colour-side form of a complete bipartite instance.

    ``a_clauses``/``b_clauses`` are the list bitsets of the A- and B-vertices.
    """

    palette: int
    a_clauses: tuple
    b_clauses: tuple
    k_a: int = 0
    k_b: int = 0

    def __post_init__(self):
        for name, clauses, k in (("A", self.a_clauses, self.k_a), ("B", self.b_clauses, self.k_b)):
            for c in clauses:
                if c >> self.palette:
                    raise Inconsistent(f"{name}-clause uses a colour outside the palette")
                if k and c.bit_count() != k:
                    raise Inconsistent(f"{name}-clause width {c.bit_count()} differs from {k}")

    @classmethod
    def from_assignment(cls, assignment: ListAssignment):
        return cls(assignment.palette, tuple(assignment.masks_a), tuple(assignment.masks_b),
                   assignment.k_a, assignment.k_b)


def separator_exists(query: SeparatorQuery):
    """Colour set S meeting every A-list whose complement meets every B-list, or None."""
    s = kernels.separator(query.a_clauses, query.b_clauses, query.palette)
    if s is None:
        return None
    return frozenset(bits(s))


def _colouring_from_separator(assignment, s):
    colours_a = tuple(min(c for c in lst if c in s) for lst in assignment.lists_a)
    colours_b = tuple(min(c for c in lst if c not in s) for lst in assignment.lists_b)
    return ProperColouring(colours_a, colours_b)


def search_masks(graph, list_a, list_b):
    """Backtracking over B-colours with forward checking of the A-lists.

    Lists are colour bitmasks and need not be uniform, which lets callers
    pin a vertex to a sub-list.  The uncoloured B-vertices are split into
    groups that share no A-neighbour and each group is solved on its own,
    so independent parts of a sparse graph never multiply their search
    trees.  Returns (colours_a, colours_b) or None.
    """
    a_n, b_n = graph.a_size, graph.b_size
    nbrs_b = [graph.neighbours_b(j) for j in range(b_n)]
    nbrs_a = [graph.neighbours_a(i) for i in range(a_n)]
    deg = [len(x) for x in nbrs_b]
    # colours of B-vertex j ordered by how many neighbouring A-lists they block
    prefs = []
    for j in range(b_n):
        load = {c: sum(1 for i in nbrs_b[j] if list_a[i] >> c & 1) for c in bits(list_b[j])}
        prefs.append(sorted(load, key=lambda c: (load[c], c)))
    counts = [dict() for _ in range(a_n)]
    blocked = [0] * a_n
    colours_b = [None] * b_n
    trail = []

    def place(j, c):
        hurt = []
        for i in nbrs_b[j]:
            cnt = counts[i].get(c, 0)
            counts[i][c] = cnt + 1
            if cnt == 0:
                blocked[i] |= 1 << c
                hurt.append(i)
        colours_b[j] = c
        trail.append(j)
        return hurt

    def undo(mark):
        while len(trail) > mark:
            j = trail.pop()
            c = colours_b[j]
            for i in nbrs_b[j]:
                cnt = counts[i][c] - 1
                counts[i][c] = cnt
                if cnt == 0:
                    blocked[i] &= ~(1 << c)
            colours_b[j] = None

    def groups(todo):
        seen, out = set(), []
        for start in sorted(todo):
            if start in seen:
                continue
            seen.add(start)
            comp, stack = [start], [start]
            while stack:
                j = stack.pop()
                for i in nbrs_b[j]:
                    for j2 in nbrs_a[i]:
                        if j2 in todo and j2 not in seen:
                            seen.add(j2)
                            comp.append(j2)
                            stack.append(j2)
            out.append(comp)
        return out

    def solve(todo):
        if not todo:
            return True
        comps = groups(todo)
        if len(comps) > 1:
            mark = len(trail)
            for comp in comps:
                if not solve(set(comp)):
                    undo(mark)
                    return False
            return True
        j = min(todo, key=lambda x: (-deg[x], x))
        rest = todo - {j}
        for c in prefs[j]:
            mark = len(trail)
            hurt = place(j, c)
            if all(list_a[i] & ~blocked[i] for i in hurt) and solve(rest):
                return True
            undo(mark)
        return False

    if any(m == 0 for m in list_a) or any(m == 0 for m in list_b):
        return None
    if not solve(set(range(b_n))):
        return None
    colours_a = tuple(min(bits(list_a[i] & ~blocked[i])) for i in range(a_n))
    return colours_a, tuple(colours_b)


def _search_general(graph, assignment):
    found = search_masks(graph, assignment.masks_a, assignment.masks_b)
    return None if found is None else ProperColouring(*found)


def find_proper_colouring(graph: BipartiteGraph, assignment: ListAssignment):
    """A proper colouring from the lists, or None when none exists.

    Complete graphs go through the separator search; other graphs through
    backtracking on the B side.  Any colouring found is re-checked from
    scratch before it is returned.
    """
    check_shapes(graph, assignment)
    if graph.complete:
        s = separator_exists(SeparatorQuery.from_assignment(assignment))
        col = None if s is None else _colouring_from_separator(assignment, s)
    else:
        col = _search_general(graph, assignment)
    if col is not None:
        problems = col.violations(graph, assignment)
        if problems:
            raise AssertionError("search produced an improper colouring: " + "; ".join(problems))
    return col


@dataclass(frozen=True)
class Verification:
    status: str  # "VERIFIED" or "REFUTED"
    colouring: ProperColouring | None = None

    @property
    def verified(self):
        return self.status == "VERIFIED"


def verify_certificate(cert) -> Verification:
    col = find_proper_colouring(cert.graph, cert.assignment)
    if col is None:
        return Verification("VERIFIED")
    return Verification("REFUTED", col)


def is_colourable(graph, assignment):
    return find_proper_colouring(graph, assignment) is not None


def complete_colourable(a_masks, b_masks, palette):
    """Bitmask-level shortcut used by the searches."""
    return kernels.separator(list(a_masks), list(b_masks), palette) is not None


__all__ = [
    "SeparatorQuery",
    "separator_exists",
    "find_proper_colouring",
    "verify_certificate",
    "Verification",
    "is_colourable",
    "complete_colourable",
    "search_masks",
    "mask_of",
]
