"""Brute-force oracles and graph corpora shared by the tests.

The oracles deliberately avoid the package's search code: they enumerate
raw candidate spaces and check definitions directly.
"""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import combinations, product

import networkx as nx
import numpy as np
import pytest

from improperb.core import Graph, SetFamily, elements


def brute_property_b(F: SetFamily) -> bool:
    return any(all(s & b and s & ~b for s in F.sets) for b in range(1 << F.ell))


def brute_property_bj(F: SetFamily, j: int) -> bool:
    """Try every labelling of [l] by {0 = unused, 1..j}."""
    for lab in product(range(j + 1), repeat=F.ell):
        bs = [0] * (j + 1)
        for e, x in enumerate(lab):
            bs[x] |= 1 << e
        if all(s & bs[i] for i in range(1, j + 1) for s in F.sets):
            return True
    return False


@lru_cache(maxsize=None)
def _labellings(j: int, ell: int) -> np.ndarray:
    """Row per labelling of [l] by {0..j}; column i holds the mask of label i."""
    labs = np.array(list(product(range(j + 1), repeat=ell)), dtype=np.int64)
    weights = 1 << np.arange(ell, dtype=np.int64)
    return np.stack([((labs == i) * weights).sum(axis=1) for i in range(j + 1)], axis=1)


def brute_property_bj_fast(F: SetFamily, j: int) -> bool:
    """Vectorised form of ``brute_property_bj`` over all (j+1)^l labellings."""
    masks = _labellings(j, F.ell)
    ok = np.ones(len(masks), dtype=bool)
    for s in F.sets:
        for i in range(1, j + 1):
            ok &= (masks[:, i] & s) != 0
    return bool(ok.any())


def brute_two_colourable(F: SetFamily) -> bool:
    """Hypergraph 2-colouring by a separate element-by-element backtracker."""
    colour = [None] * F.ell
    members = [elements(s) for s in F.sets]

    def ok():
        for es in members:
            cs = [colour[e - 1] for e in es]
            if None not in cs and len(set(cs)) == 1:
                return False
        return True

    def rec(i):
        if not ok():
            return False
        if i == F.ell:
            return True
        for c in (0, 1):
            colour[i] = c
            if rec(i + 1):
                return True
        colour[i] = None
        return False

    return rec(0)


def brute_defects(G: Graph, c) -> list[int]:
    return [sum(1 for u in range(G.n) if G.has_edge(u, v) and c[u] == c[v]) for v in range(G.n)]


def brute_colourable(G: Graph, lists, t: int) -> bool:
    for c in product(*(elements(s) for s in lists)):
        if max(brute_defects(G, c), default=0) <= t:
            return True
    return False


def brute_chi_t(G: Graph, t: int) -> int:
    for k in range(1, G.n + 1):
        if any(max(brute_defects(G, c), default=0) <= t for c in product(range(k), repeat=G.n)):
            return k
    return 0


def random_family(rng: random.Random, k: int, ell: int, size: int) -> SetFamily:
    pool = [sum(1 << (e - 1) for e in c) for c in combinations(range(1, ell + 1), k)]
    return SetFamily(k, ell, tuple(rng.sample(pool, min(size, len(pool)))))


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    return Graph.from_edges(n, [e for e in combinations(range(n), 2) if rng.random() < p])


def from_nx(g) -> Graph:
    g = nx.convert_node_labels_to_integers(g)
    return Graph.from_edges(g.number_of_nodes(), g.edges())


def atlas_graphs(max_n: int) -> list[Graph]:
    """Every graph on 1..max_n vertices up to isomorphism (max_n <= 7)."""
    return [from_nx(g) for g in nx.graph_atlas_g() if 1 <= g.number_of_nodes() <= max_n]


def bipartite_atlas(max_n: int) -> list[Graph]:
    return [from_nx(g) for g in nx.graph_atlas_g()
            if 1 <= g.number_of_nodes() <= max_n and nx.is_bipartite(g)]


@pytest.fixture
def rng():
    return random.Random(20240611)


def brute_choosable(G: Graph, k: int, ell: int, t: int):
    """(choosable, first bad assignment) by enumerating all C(l,k)^n assignments.

    Every t-improper colouring in [l]^n is listed up front; an assignment
    is good iff some listed colouring picks from each list.
    """
    colourings = [c for c in product(range(1, ell + 1), repeat=G.n)
                  if max(brute_defects(G, c), default=0) <= t]
    pool = [sum(1 << (e - 1) for e in c) for c in combinations(range(1, ell + 1), k)]
    # fits[v][i]: bitset over colourings whose colour at v lies in pool[i]
    fits = [[sum(1 << r for r, c in enumerate(colourings) if s >> (c[v] - 1) & 1) for s in pool]
            for v in range(G.n)]
    chosen = []

    def rec(v, alive):
        if not alive:
            return False
        if v == G.n:
            return True
        for i in range(len(pool)):
            chosen.append(pool[i])
            if not rec(v + 1, alive & fits[v][i]):
                return False
            chosen.pop()
        return True

    if rec(0, (1 << len(colourings)) - 1):
        return True, None
    return False, tuple(chosen + [pool[0]] * (G.n - len(chosen)))
