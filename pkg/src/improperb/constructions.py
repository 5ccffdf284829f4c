"""Explicit instances: complete t-improperly multipartite graphs, adversarial
list assignments that admit no t-improper colouring, and colourings read off
Property B(j) witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from . import propb
from .core import (
    Graph,
    ListAssignment,
    SetFamily,
    ValidationError,
    Witness,
    elements,
    validate_list_assignment,
    validate_partition,
)
from .defect import defect_vector, is_t_improper

STYLES = ("empty", "disjoint_cliques")


@dataclass(frozen=True)
class MultipartiteSpec:
    part_sizes: tuple[int, ...]
    t: int = 0
    within_part_style: str = "empty"

    def __post_init__(self):
        object.__setattr__(self, "part_sizes", tuple(self.part_sizes))
        if len(self.part_sizes) < 2:
            raise ValidationError("need at least two parts")
        if any(n < 1 for n in self.part_sizes):
            raise ValidationError("parts must be non-empty")
        if self.t < 0:
            raise ValidationError("t must be non-negative")
        if self.within_part_style not in STYLES:
            raise ValidationError(f"unknown style {self.within_part_style!r}")


def _complete_multipartite_edges(parts):
    edges = []
    for a, b in combinations(range(len(parts)), 2):
        edges += [(u, v) for u in parts[a] for v in parts[b]]
    return edges


def _parts_from_sizes(sizes):
    parts, start = [], 0
    for n in sizes:
        parts.append(tuple(range(start, start + n)))
        start += n
    return tuple(parts)


def build_multipartite(spec: MultipartiteSpec) -> tuple[Graph, tuple[tuple[int, ...], ...]]:
    """Complete j-partite graph whose parts are independent or unions of cliques on t+1 vertices."""
    parts = _parts_from_sizes(spec.part_sizes)
    edges = _complete_multipartite_edges(parts)
    if spec.within_part_style == "disjoint_cliques":
        size = spec.t + 1
        for p in parts:
            for i in range(0, len(p), size):
                edges += list(combinations(p[i:i + size], 2))
    G = Graph.from_edges(sum(spec.part_sizes), edges)
    if any(G.induced_max_degree(p) > spec.t for p in parts):
        raise ValidationError("a part exceeds the defect bound")
    return G, parts


def adversarial_multipartite(F: SetFamily, j: int, t: int):
    """(graph, partition, lists) on K_{n_1,...,n_j} with no t-improper L-colouring.

    ``F`` must lack Property B(j).  The first part receives one vertex per
    set of ``F``; every other part receives t*k + 1 consecutive copies of
    each set, in family order.
    """
    if t < 0:
        raise ValidationError("t must be non-negative")
    has = propb.has_property_b(F) if j == 2 else propb.has_property_bj(F, j)
    if has:
        raise ValidationError(f"family has Property B({j}); the construction needs a family without it")
    copies = t * F.k + 1
    sizes = [len(F)] + [copies * len(F)] * (j - 1)
    parts = _parts_from_sizes(sizes)
    G = Graph.from_edges(sum(sizes), _complete_multipartite_edges(parts))
    lists = list(F.sets)
    for _ in range(j - 1):
        for s in F.sets:
            lists += [s] * copies
    return G, parts, ListAssignment(F.k, F.ell, tuple(lists))


def witness_colouring(G: Graph, parts, L: ListAssignment, w: Witness, t: int | None = None):
    """Colour each vertex of part i with the least colour of L(v) in B_i.

    For a single-set witness B on two parts, part 0 draws from B and part 1
    from the complement of B.  When ``t`` is given the result is checked to
    be t-improper.
    """
    validate_list_assignment(G, L)
    parts = validate_partition(parts, G.n)
    universe = (1 << L.ell) - 1
    if w.single:
        if len(parts) != 2:
            raise ValidationError("a single-set witness colours exactly two parts")
        pools = (w.sets[0], universe & ~w.sets[0])
    else:
        if len(w.sets) != len(parts):
            raise ValidationError("witness and partition sizes differ")
        pools = w.sets
    colour = [0] * G.n
    for pool, part in zip(pools, parts):
        for v in part:
            avail = L.lists[v] & pool
            if not avail:
                raise ValidationError(f"list of vertex {v} misses its witness set; witness is invalid")
            colour[v] = elements(avail & -avail)[0]
    colour = tuple(colour)
    if t is not None and not is_t_improper(G, colour, t):
        raise AssertionError("witness colouring is not t-improper; a part exceeds the defect bound")
    return colour


def defective_colour_classes(c, G: Graph, t: int):
    """Colour classes of a t-improper colouring, ordered by colour."""
    if len(c) != G.n:
        raise ValidationError("colouring does not match the graph")
    if max(defect_vector(G, c), default=0) > t:
        raise ValidationError("colouring is not t-improper")
    classes: dict[int, list[int]] = {}
    for v, col in enumerate(c):
        classes.setdefault(col, []).append(v)
    parts = tuple(tuple(classes[col]) for col in sorted(classes))
    assert all(G.induced_max_degree(p) <= t for p in parts)
    return parts
