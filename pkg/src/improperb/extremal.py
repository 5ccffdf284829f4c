"""Exact M(k, l) and M(j, k, l) by orderly generation of set families.

Families are tuples of indices into the sorted list of all k-subsets of
[l].  Level m holds one representative per colour-permutation orbit of
m-member families that still have the property; a family is kept only if
it is the lexicographically least image of itself under every permutation
of [l].  That test is hereditary when the largest index is dropped, so
every orbit is reached through its own canonical prefix.

Whether a family has the property is tracked incrementally: each set owns
a bit mask over all candidate witnesses (subsets B of [l] for Property B,
labellings [l] -> [j] for Property B(j)), and a family has the property
iff the AND of its members' masks is non-zero.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

import numpy as np

from . import propb
from .core import SetFamily, elements, k_subsets

PERM_LIMIT = 9          # full l! isomorphism rejection up to this spectrum
CANDIDATE_LIMIT = 1 << 22


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int = 50_000_000
    max_family_size: int | None = None

    def __post_init__(self):
        if self.max_nodes < 1:
            raise ValueError("max_nodes must be positive")
        if self.max_family_size is not None and self.max_family_size < 1:
            raise ValueError("max_family_size must be positive")


@dataclass(frozen=True)
class ExtremalResult:
    """Outcome of an extremal search.

    ``status`` is ``"exact"`` (``value`` holds M and ``certificate`` a smallest
    family without the property), ``"infinite"``, or ``"unknown"`` when the
    budget ran out; ``lower_bound`` is always a proven lower bound on M.
    """

    status: str
    value: int | None
    lower_bound: int
    certificate: SetFamily | None
    nodes: int

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "value": self.value if self.status == "exact" else self.status,
            "lower_bound": self.lower_bound,
            "certificate": self.certificate.as_lists() if self.certificate else None,
            "budget_used": self.nodes,
        }


# ---------------------------------------------------------------- tables

@lru_cache(maxsize=None)
def _property_b_masks(k: int, ell: int) -> tuple[int, ...]:
    """Per k-set, the bit mask over all B in 2^[l] with S meeting B and S not inside B."""
    B = np.arange(1 << ell, dtype=np.int64)
    out = []
    for s in k_subsets(k, ell):
        ok = ((B & s) != 0) & ((s & ~B) != 0)
        out.append(_pack(ok))
    return tuple(out)


@lru_cache(maxsize=None)
def _property_bj_masks(j: int, k: int, ell: int) -> tuple[int, ...]:
    """Per k-set, the bit mask over labellings [l] -> [j] under which S sees all j labels.

    Labelling every element is no loss: elements outside all B_i can join
    B_1 without breaking disjointness or the transversal condition.
    """
    idx = np.arange(j ** ell, dtype=np.int64)
    digits = np.empty((j ** ell, ell), dtype=np.int8)
    rest = idx.copy()
    for e in range(ell):
        digits[:, e] = rest % j
        rest //= j
    out = []
    for s in k_subsets(k, ell):
        cols = digits[:, [c - 1 for c in elements(s)]]
        ok = np.ones(len(idx), dtype=bool)
        for lab in range(j):
            ok &= (cols == lab).any(axis=1)
        out.append(_pack(ok))
    return tuple(out)


def _pack(bits: np.ndarray) -> int:
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


@lru_cache(maxsize=None)
def _perm_table(k: int, ell: int) -> np.ndarray | None:
    """Row p maps set index -> index of its image under the p-th permutation of [l]."""
    if ell > PERM_LIMIT:
        return None
    sets = k_subsets(k, ell)
    where = np.full(1 << ell, -1, dtype=np.int32)
    where[sets] = np.arange(len(sets))
    bits = np.int64(1) << np.array(list(permutations(range(ell))), dtype=np.int64)
    dtype = np.int16 if len(sets) < 2 ** 15 else np.int32
    table = np.empty((len(bits), len(sets)), dtype=dtype)
    for i, s in enumerate(sets):
        img = bits[:, [c - 1 for c in elements(s)]].sum(axis=1)
        table[:, i] = where[img]
    return table


@lru_cache(maxsize=None)
def _to_first(k: int, ell: int) -> tuple[np.ndarray, ...]:
    """Per set index, the permutation rows that send it to index 0."""
    table = _perm_table(k, ell)
    return tuple(np.nonzero(table[:, i] == 0)[0] for i in range(table.shape[1]))


def is_canonical(family: tuple[int, ...], table: np.ndarray | None, to_first=None) -> bool:
    """True iff no colour permutation maps ``family`` to a lexicographically smaller index tuple.

    A family starting with index 0 can only be beaten by a permutation that
    sends one of its members to index 0; ``to_first`` lists those rows.
    """
    if table is None or len(family) == 0:
        return True
    fam = np.asarray(family)
    if to_first is not None and family[0] == 0:
        rows = np.concatenate([to_first[i] for i in family])
        imgs = np.sort(table[rows][:, fam], axis=1)
    else:
        imgs = np.sort(table[:, fam], axis=1)
    diff = imgs != fam
    has = diff.any(axis=1)
    if not has.any():
        return True
    first = diff.argmax(axis=1)
    rows = np.nonzero(has)[0]
    return not (imgs[rows, first[rows]] < fam[first[rows]]).any()


# ---------------------------------------------------------------- search

def _expand(parents, masks, table, n_sets, node_cap, to_first=None):
    """Children of each parent: (survivors, failing families, node count, budget hit)."""
    survivors, failing = [], []
    nodes = 0
    for fam, mask in parents:
        start = fam[-1] + 1 if fam else 0
        for i in range(start, n_sets):
            child = fam + (i,)
            if not is_canonical(child, table, to_first):
                continue
            nodes += 1
            m = mask & masks[i]
            if m:
                survivors.append((child, m))
            else:
                failing.append(child)
            if nodes > node_cap:
                return survivors, failing, nodes, True
    return survivors, failing, nodes, False


def _expand_job(args):
    kind, j, k, ell, parents, node_cap = args
    masks = _masks(kind, j, k, ell)
    table = _perm_table(k, ell)
    to_first = _to_first(k, ell) if table is not None else None
    return _expand(parents, masks, table, len(masks), node_cap, to_first)


def _masks(kind, j, k, ell):
    return _property_b_masks(k, ell) if kind == "b" else _property_bj_masks(j, k, ell)


def _search(kind: str, j: int, k: int, ell: int, budget: SearchBudget, threads: int) -> ExtremalResult:
    sets = k_subsets(k, ell)
    size = (1 << ell) if kind == "b" else j ** ell
    if size > CANDIDATE_LIMIT:
        raise ValueError(f"witness space of {size} candidates is beyond desk scale")
    masks = _masks(kind, j, k, ell)
    everything = (1 << size) - 1

    full = everything
    for m in masks:
        full &= m
    if full:
        return ExtremalResult("infinite", None, len(sets) + 1, None, 0)

    table = _perm_table(k, ell)
    to_first = _to_first(k, ell) if table is not None else None
    level = [((), everything)]
    nodes = 0
    max_m = len(sets) if budget.max_family_size is None else min(len(sets), budget.max_family_size)
    pool = ProcessPoolExecutor(threads) if threads > 1 else None
    try:
        for m in range(1, max_m + 1):
            remaining = budget.max_nodes - nodes
            if pool is None:
                survivors, failing, used, hit = _expand(level, masks, table, len(sets), remaining, to_first)
            else:
                survivors, failing, used, hit = [], [], 0, False
                chunks = _chunks(level, threads * 4)
                jobs = [(kind, j, k, ell, c, remaining) for c in chunks]
                for s, f, u, h in pool.map(_expand_job, jobs):
                    survivors += s
                    failing += f
                    used += u
                    hit = hit or h
                hit = hit or used > remaining
            nodes += used
            if hit:
                return ExtremalResult("unknown", None, m, None, nodes)
            if failing:
                cert = min(failing)
                family = SetFamily(k, ell, tuple(sets[i] for i in cert))
                return ExtremalResult("exact", m, m, family, nodes)
            level = survivors
    finally:
        if pool is not None:
            pool.shutdown()
    # every family up to max_m has the property
    return ExtremalResult("unknown", None, max_m + 1, None, nodes)


def _chunks(items, n):
    n = max(1, min(n, len(items)))
    step = -(-len(items) // n)
    return [items[i:i + step] for i in range(0, len(items), step)]


def compute_m(k: int, ell: int, budget: SearchBudget | None = None, threads: int = 1) -> ExtremalResult:
    """Smallest number of k-subsets of [l] forming a family without Property B."""
    if not 2 <= k <= ell <= 64:
        raise ValueError(f"need 2 <= k <= l <= 64, got k={k} l={ell}")
    res = _search("b", 2, k, ell, budget or SearchBudget(), threads)
    if res.certificate is not None and propb.has_property_b(res.certificate):
        raise AssertionError("certificate has Property B")
    return res


def compute_mj(j: int, k: int, ell: int, budget: SearchBudget | None = None, threads: int = 1) -> ExtremalResult:
    """Smallest number of k-subsets of [l] forming a family without Property B(j)."""
    if not (j >= 2 and k >= 2 and max(j, k) <= ell <= 64):
        raise ValueError(f"need 2 <= j, 2 <= k, max(j,k) <= l <= 64, got j={j} k={k} l={ell}")
    res = _search("bj", j, k, ell, budget or SearchBudget(), threads)
    if res.certificate is not None and propb.has_property_bj(res.certificate, j):
        raise AssertionError("certificate has Property B(j)")
    return res


# ------------------------------------------------------- literature bound shapes

def bound_shape_m(k: int) -> tuple[float, float]:
    """Constant-free shapes sqrt(k/ln k) 2^k and k^2 2^k of the known bounds on M(k)."""
    if k < 2:
        raise ValueError("k must be at least 2")
    return math.sqrt(k / math.log(k)) * 2.0 ** k, k * k * 2.0 ** k


def bound_shape_mj(j: int, k: int) -> tuple[float, float]:
    """Constant-free shapes of the known lower and upper bounds on M(j, k)."""
    if j < 2 or k < 2:
        raise ValueError("j and k must be at least 2")
    ratio = (j / (j - 1)) ** k
    lower = (1.0 / j) * (k / (j * math.log(k))) ** (1.0 / 3.0) * ratio
    upper = k * k * ratio * math.log(j)
    return lower, upper
