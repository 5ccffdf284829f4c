"""Exact solvers for t-improper (defective) colouring and list colouring.

A colouring is t-improper when every vertex has at most t neighbours of
its own colour.  Backtrackers keep, per colour, the bit mask of vertices
holding it, plus the mask of *saturated* vertices whose defect already
equals t; colour c is open for v iff v would see at most t neighbours of
colour c and none of them is saturated.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations, product

import numpy as np

from .core import (
    Graph,
    ListAssignment,
    ValidationError,
    elements,
    full_mask,
    k_subsets,
    list_assignment_unchecked,
    popcount,
    validate_list_assignment,
)


class BudgetExceeded(RuntimeError):
    pass


# ------------------------------------------------------------ verification

def defect_vector(G: Graph, c) -> tuple[int, ...]:
    """Number of same-coloured neighbours of each vertex."""
    if len(c) != G.n or any(x is None for x in c):
        raise ValidationError("colouring is incomplete")
    return tuple(sum(1 for u in G.neighbours(v) if c[u] == c[v]) for v in range(G.n))


def is_t_improper(G: Graph, c, t: int) -> bool:
    return max(defect_vector(G, c), default=0) <= t


def is_list_colouring(L: ListAssignment, c) -> bool:
    return len(c) == L.n and all(L.lists[v] >> (c[v] - 1) & 1 for v in range(L.n))


# ------------------------------------------------------------ backtracking

def _degree_order(G: Graph) -> list[int]:
    return sorted(range(G.n), key=lambda v: (-G.degree(v), v))


def _backtrack(G: Graph, lists, t: int, order, symmetric_k: int = 0):
    """First t-improper colouring with c(v) in lists[v], or None.

    ``symmetric_k`` > 0 means all lists are [k]; colours are then
    interchangeable and vertex number r in ``order`` may only open colour
    max-used + 1.
    """
    n = G.n
    adj = G.adj
    colour = [0] * n
    cls: dict[int, int] = {}
    defect = [0] * n
    sat = 0
    choices = [elements(lists[v]) for v in range(n)]

    def rec(r, sat, top):
        if r == n:
            return True
        v = order[r]
        nb = adj[v]
        for c in choices[v]:
            if symmetric_k and c > top + 1:
                break
            same = nb & cls.get(c, 0)
            if same & sat:
                continue
            cnt = popcount(same)
            if cnt > t:
                continue
            colour[v] = c
            cls[c] = cls.get(c, 0) | 1 << v
            defect[v] = cnt
            new_sat = sat
            if cnt == t:
                new_sat |= 1 << v
            m = same
            while m:
                low = m & -m
                u = low.bit_length() - 1
                defect[u] += 1
                if defect[u] == t:
                    new_sat |= low
                m ^= low
            if rec(r + 1, new_sat, max(top, c)):
                return True
            m = same
            while m:
                low = m & -m
                defect[low.bit_length() - 1] -= 1
                m ^= low
            cls[c] ^= 1 << v
            colour[v] = 0
        return False

    if rec(0, sat, 0):
        return tuple(colour)
    return None


def find_t_improper_list_colouring(G: Graph, L: ListAssignment, t: int):
    """A t-improper L-colouring of G, or None when none exists."""
    validate_list_assignment(G, L)
    if t < 0:
        raise ValueError("t must be non-negative")
    return _backtrack(G, L.lists, t, _degree_order(G))


def find_t_improper_k_colouring(G: Graph, k: int, t: int):
    """A t-improper colouring of G with colours from [k], or None."""
    if k < 1 or t < 0:
        raise ValueError("need k >= 1 and t >= 0")
    return _backtrack(G, (full_mask(k),) * G.n, t, _degree_order(G), symmetric_k=k)


def chi_t(G: Graph, t: int) -> int:
    """t-improper chromatic number."""
    for k in range(1, G.n + 1):
        if find_t_improper_k_colouring(G, k, t) is not None:
            return k
    return 0


# ------------------------------------------------------------ choosability

@dataclass(frozen=True)
class ChoosabilityVerdict:
    choosable: bool
    bad_assignment: ListAssignment | None
    assignments_examined: int
    complete: bool

    def to_json(self) -> dict:
        bad = self.bad_assignment
        return {
            "choosable": self.choosable if self.complete else None,
            "complete": self.complete,
            "assignments_examined": self.assignments_examined,
            "bad_assignment": [elements(s) for s in bad.lists] if bad else None,
        }


@lru_cache(maxsize=None)
def _candidates(used: int, k: int, ell: int) -> tuple[int, ...]:
    """Lists for the next vertex when colours 1..used already occur.

    Unused colours are interchangeable, so fresh colours are always the
    block used+1, used+2, ... (restricted growth).
    """
    out = []
    for fresh in range(0, k + 1):
        if used + fresh > ell or k - fresh > used:
            continue
        block = ((1 << fresh) - 1) << used
        for old in combinations(range(used), k - fresh):
            m = block
            for c in old:
                m |= 1 << c
            out.append(m)
    out.sort()
    return tuple(out)


SYM_LIMIT = 7   # prefix canonicity under Sym(used colours) while used <= this


@lru_cache(maxsize=None)
def _sym_table(u: int) -> np.ndarray:
    """Row p maps a colour mask inside [u] to its image under the p-th permutation."""
    table = np.empty((math.factorial(u), 1 << u), dtype=np.int32)
    for p, perm in enumerate(permutations(range(u))):
        for m in range(1 << u):
            img = 0
            for c in range(u):
                if m >> c & 1:
                    img |= 1 << perm[c]
            table[p, m] = img
    return table


def _prefix_is_lex_least(prefix: list[int], used: int) -> bool:
    if used > SYM_LIMIT or len(prefix) < 2:
        return True
    table = _sym_table(used)
    pre = np.asarray(prefix)
    imgs = table[:, pre]
    diff = imgs != pre
    has = diff.any(axis=1)
    if not has.any():
        return True
    rows = np.nonzero(has)[0]
    first = diff[rows].argmax(axis=1)
    return not (imgs[rows, first] < pre[first]).any()


class _Plan:
    """Per-step bookkeeping for processing vertices in index order.

    The frontier after step r is the set of processed vertices that still
    have an unprocessed neighbour; partial colourings are remembered only
    through their frontier entries (colour, defect).
    """

    def __init__(self, G: Graph):
        n = G.n
        self.n = n
        last_nb = [max([v] + G.neighbours(v)) for v in range(n)]
        frontier: list[int] = []
        self.nb_pos, self.keep, self.stays, self.closes = [], [], [], []
        for v in range(n):
            pos = {u: i for i, u in enumerate(frontier)}
            self.nb_pos.append(tuple(pos[u] for u in G.neighbours(v) if u < v))
            nxt = [u for u in frontier if last_nb[u] > v]
            self.keep.append(tuple(pos[u] for u in nxt))
            stays = last_nb[v] > v
            self.stays.append(stays)
            if stays:
                nxt.append(v)
            frontier = nxt
            # vertices whose closed neighbourhood is fully listed after step v
            self.closes.append(tuple(w for w in [v] + G.neighbours(v)
                                     if max([w] + G.neighbours(w)) == v))
        self.nbrs = [tuple(G.neighbours(v)) for v in range(n)]


def _step(states, plan: _Plan, v: int, lst: int, t: int):
    """Extend every frontier state by colouring v from ``lst``."""
    nb_pos = plan.nb_pos[v]
    keep = plan.keep[v]
    stays = plan.stays[v]
    colours = elements(lst)
    out = set()
    for s in states:
        for c in colours:
            hit = [p for p in nb_pos if s[p][0] == c]
            if len(hit) > t:
                continue
            if any(s[p][1] == t for p in hit):
                continue
            if hit:
                row = list(s)
                for p in hit:
                    row[p] = (c, row[p][1] + 1)
            else:
                row = s
            nxt = tuple(row[p] for p in keep)
            if stays:
                nxt += ((c, len(hit)),)
            out.add(nxt)
    return out


def _blocked_everywhere(states, plan: _Plan, v: int, t: int, used: int) -> int:
    """Colours (mask inside [used]) that no frontier state lets v take."""
    nb_pos = plan.nb_pos[v]
    z = full_mask(used)
    for s in states:
        blocked = 0
        count: dict[int, int] = {}
        for p in nb_pos:
            c, d = s[p]
            count[c] = count.get(c, 0) + 1
            if d == t:
                blocked |= 1 << (c - 1)
        for c, cnt in count.items():
            if cnt > t:
                blocked |= 1 << (c - 1)
        z &= blocked
        if not z:
            break
    return z


def _normal_form_ok(plan: _Plan, lists: list[int], w: int) -> bool:
    """Every colour of L(w) is offered by some neighbour, unless the neighbours' colours all lie in L(w)."""
    union = 0
    for u in plan.nbrs[w]:
        union |= lists[u]
    return not (lists[w] & ~union and union & ~lists[w])


class _Search:
    def __init__(self, G, k, ell, t, node_cap, symmetry=True):
        self.G, self.k, self.ell, self.t = G, k, ell, t
        self.plan = _Plan(G)
        self.node_cap = node_cap
        self.nodes = 0
        self.symmetry = symmetry

    def run(self, prefix: list[int], states, used: int):
        """Bad completion of ``prefix`` (full list of masks) or None; raises BudgetExceeded."""
        n, k, t, plan = self.G.n, self.k, self.t, self.plan
        r = len(prefix)
        if not states:
            return prefix + [full_mask(k)] * (n - r)
        if r == n:
            return None
        if r == n - 1 and r > 0:
            self._tick()
            z = _blocked_everywhere(states, plan, r, t, used)
            if popcount(z) >= k:
                chosen = 0
                for c in elements(z)[:k]:
                    chosen |= 1 << (c - 1)
                return prefix + [chosen]
            return None
        for lst in _candidates(used, k, self.ell):
            self._tick()
            cand = prefix + [lst]
            new_used = max(used, lst.bit_length())
            if self.symmetry and not _prefix_is_lex_least(cand, new_used):
                continue
            if not all(_normal_form_ok(plan, cand, w) for w in plan.closes[r]):
                continue
            res = self.run(cand, _step(states, plan, r, lst, t), new_used)
            if res is not None:
                return res
        return None

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.node_cap:
            raise BudgetExceeded


def _branch_job(args):
    G, k, ell, t, node_cap, first_two = args
    search = _Search(G, k, ell, t, node_cap)
    states = {()}
    used = 0
    for r, lst in enumerate(first_two):
        states = _step(states, search.plan, r, lst, t)
        used = max(used, lst.bit_length())
    try:
        return search.run(list(first_two), states, used), search.nodes, True
    except BudgetExceeded:
        return None, search.nodes, False


def is_t_improper_kl_choosable(G: Graph, k: int, ell: int, t: int,
                               max_nodes: int = 10_000_000, threads: int = 1) -> ChoosabilityVerdict:
    """Decide whether every (k, ell)-list-assignment of G admits a t-improper colouring.

    Lists are enumerated vertex by vertex in index order, up to renaming
    of colours: fresh colours enter in increasing order and, while at most
    ``SYM_LIMIT`` colours are in play, prefixes that are not
    lexicographically least under a colour permutation are dropped.  The
    set of partial colourings is carried along the enumeration, so each
    assignment is decided as it is built.

    One further reduction is sound: if c is in L(v) but in no neighbour's
    list, swapping c for a colour c' outside L(v) keeps a bad assignment
    bad (a colouring using c' at v can use c instead).  Hence a bad
    assignment exists iff one exists in which, for every v, each colour
    of L(v) occurs in a neighbour's list or every neighbour colour lies
    in L(v).  Assignments violating this are skipped.
    """
    if not 1 <= k <= ell <= 64:
        raise ValueError(f"need 1 <= k <= l <= 64, got k={k} l={ell}")
    if t < 0:
        raise ValueError("t must be non-negative")
    if G.n == 0:
        return ChoosabilityVerdict(True, None, 0, True)

    plan = _Plan(G)
    first = full_mask(k)
    states = _step({()}, plan, 0, first, t)
    bad = None
    nodes = 1
    complete = True
    if G.n == 1 or not states:
        bad = [first] * G.n if not states else None
    elif threads <= 1 or G.n <= 2:
        search = _Search(G, k, ell, t, max_nodes)
        search.nodes = nodes
        try:
            bad = search.run([first], states, k)
        except BudgetExceeded:
            complete = False
        nodes = search.nodes
    else:
        branches = []
        for lst in _candidates(k, k, ell):
            pre = [first, lst]
            if _prefix_is_lex_least(pre, max(k, lst.bit_length())) and \
                    all(_normal_form_ok(plan, pre, w) for w in plan.closes[1]):
                branches.append(pre)
        jobs = [(G, k, ell, t, max_nodes, tuple(b)) for b in branches]
        with ProcessPoolExecutor(threads) as pool:
            for res, used, ok in pool.map(_branch_job, jobs):
                nodes += used
                complete = complete and ok
                if bad is None and res is not None:
                    bad = res
        if bad is not None:
            complete = True
        if nodes > max_nodes:
            complete = complete and bad is not None

    if bad is not None:
        L = list_assignment_unchecked(k, ell, bad)
        if _backtrack(G, L.lists, t, _degree_order(G)) is not None:
            raise AssertionError("reported falsifier is colourable")
        return ChoosabilityVerdict(False, L, nodes, True)
    return ChoosabilityVerdict(complete, None, nodes, complete)


def is_t_improper_kl_choosable_naive(G: Graph, k: int, ell: int, t: int) -> ChoosabilityVerdict:
    """Plain enumeration of all C(ell,k)^n assignments, each solved from scratch."""
    order = _degree_order(G)
    examined = 0
    for lists in product(k_subsets(k, ell), repeat=G.n):
        examined += 1
        if _backtrack(G, lists, t, order) is None:
            return ChoosabilityVerdict(False, ListAssignment(k, ell, lists), examined, True)
    return ChoosabilityVerdict(True, None, examined, True)


def ch_t_upper_via_spectrum_cap(G: Graph, t: int, k: int, max_nodes: int = 10_000_000,
                                threads: int = 1) -> bool:
    """Decide t-improper k-choosability (every spectrum l >= k) of a small graph.

    An assignment to n vertices uses at most n*k colours and colour names
    are interchangeable, so (k, n*k)-choosability already covers every
    larger spectrum.
    """
    ell = max(k, G.n * k)
    verdict = is_t_improper_kl_choosable(G, k, ell, t, max_nodes=max_nodes, threads=threads)
    if not verdict.complete:
        raise BudgetExceeded(f"gave up after {verdict.assignments_examined} nodes")
    return verdict.choosable


def ch_t(G: Graph, t: int, max_nodes: int = 10_000_000) -> int:
    """t-improper choice number of a tiny graph."""
    for k in range(1, G.n + 1):
        if ch_t_upper_via_spectrum_cap(G, t, k, max_nodes=max_nodes):
            return k
    return 0


# ------------------------------------------------------------ degeneracy

def degeneracy_order(G: Graph) -> tuple[int, list[int]]:
    """(degeneracy, removal order) by repeatedly deleting a minimum-degree vertex."""
    deg = G.degrees()
    alive = set(range(G.n))
    order = []
    best = 0
    while alive:
        v = min(alive, key=lambda x: (deg[x], x))
        best = max(best, deg[v])
        order.append(v)
        alive.remove(v)
        for u in G.neighbours(v):
            if u in alive:
                deg[u] -= 1
    return best, order


def degeneracy(G: Graph) -> int:
    return degeneracy_order(G)[0]


def greedy_list_colouring(G: Graph, L: ListAssignment, t: int = 0):
    """Colour in reverse degeneracy order, taking the smallest admissible list colour.

    Each vertex meets at most degeneracy-many coloured neighbours, so lists
    of size degeneracy + 1 never run dry.  Returns None if some list does.
    """
    validate_list_assignment(G, L)
    _, order = degeneracy_order(G)
    colour = [0] * G.n
    defect = [0] * G.n
    for v in reversed(order):
        nbrs = [u for u in G.neighbours(v) if colour[u]]
        for c in elements(L.lists[v]):
            same = [u for u in nbrs if colour[u] == c]
            if len(same) <= t and all(defect[u] < t for u in same):
                colour[v] = c
                defect[v] = len(same)
                for u in same:
                    defect[u] += 1
                break
        else:
            return None
    return tuple(colour)
