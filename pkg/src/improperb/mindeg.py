"""Minimum-degree threshold for non-(k,l)-choosability and a Monte Carlo
replay of the two-stage random construction behind it.

Randomness: numpy's PCG64 via ``default_rng([seed, trial])``, one
independent stream per trial, so trials can run in any order.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from itertools import product

import numpy as np

from . import propb
from .core import Graph, SetFamily, ValidationError, elements


@dataclass(frozen=True)
class ThresholdInput:
    t: int
    k: int
    ell: int
    m: int

    def __post_init__(self):
        if self.t < 0:
            raise ValidationError("t must be non-negative")
        if not 2 <= self.k <= self.ell:
            raise ValidationError("need 2 <= k <= l")
        if self.m < 3:
            raise ValidationError("M(k,l) is at least 3 for k >= 2")


def threshold_D(inp: ThresholdInput) -> tuple[float, int]:
    """D = 12 m^2 ln m ln k (1 + sqrt(1 + (tk+1)/(3 ln m)))^2 and its ceiling."""
    lm = math.log(inp.m)
    factor = (1.0 + math.sqrt(1.0 + (inp.t * inp.k + 1) / (3.0 * lm))) ** 2
    D = 12.0 * inp.m ** 2 * lm * math.log(inp.k) * factor
    return D, math.ceil(D)


def sampling_probability(k: int, m: int) -> float:
    """Probability p = 1/(4 m ln k) of putting a vertex into A."""
    return 1.0 / (4.0 * m * math.log(k))


def union_bound_check(n_vertices: int, k: int, m: int) -> float:
    """k^(2pn) e^(-n/(2m)); equals 1 identically since 2pn ln k = n/(2m)."""
    if n_vertices < 1 or k < 2 or m < 1:
        raise ValueError("need n >= 1, k >= 2, m >= 1")
    p = sampling_probability(k, m)
    return math.pow(k, 2 * p * n_vertices) * math.exp(-n_vertices / (2 * m))


def log_binom_cdf(x: int, n: int, q: float) -> float:
    """log Pr(Bin(n, q) <= x), summed exactly in log space.

    Terms come from the ratio recurrence starting at n log(1-q), which
    stays accurate for large n where lgamma differences do not.
    """
    if x < 0:
        return -math.inf
    if x >= n:
        return 0.0
    step = math.log(q) - math.log1p(-q)
    term = n * math.log1p(-q)
    terms = [term]
    for i in range(x):
        term += math.log((n - i) / (i + 1)) + step
        terms.append(term)
    top = max(terms)
    return top + math.log(math.fsum(math.exp(v - top) for v in terms))


def chernoff_step_check(D: int, m: int, k: int, t: int) -> tuple[float, float]:
    """(Pr(Bin(D, p/m) < tk+1), 2 m^-4) with p = 1/(4 m ln k)."""
    if D < 1 or m < 3 or k < 2 or t < 0:
        raise ValueError("need D >= 1, m >= 3, k >= 2, t >= 0")
    q = sampling_probability(k, m) / m
    lhs = math.exp(log_binom_cdf(t * k, D, q))
    return lhs, 2.0 * m ** -4.0


@dataclass
class SimulationReport:
    trials: int
    seed: int
    p: float
    n: int
    frac_A_large: float
    frac_few_good: float
    frac_low_first_set: float
    good_mean: float
    good_min: int
    good_max: int
    good_std: float
    union_bound_value: float
    a_sizes: list[int] = field(repr=False, default_factory=list)
    good_counts: list[int] = field(repr=False, default_factory=list)

    def to_json(self) -> dict:
        d = asdict(self)
        d.pop("a_sizes")
        d.pop("good_counts")
        return d

    def to_csv(self) -> str:
        rows = ["trial,a_size,good"]
        rows += [f"{i},{a},{g}" for i, (a, g) in enumerate(zip(self.a_sizes, self.good_counts))]
        return "\n".join(rows) + "\n"


def _adjacency_matrix(G: Graph) -> np.ndarray:
    A = np.zeros((G.n, G.n), dtype=np.int32)
    for u, v in G.edges:
        A[u, v] = A[v, u] = 1
    return A


def stage1_trial(adj: np.ndarray, m: int, p: float, seed: int, trial: int):
    """One draw of (A, L_A): membership vector and list index per vertex."""
    rng = np.random.default_rng([seed, trial])
    n = adj.shape[0]
    in_a = rng.random(n) < p
    lists = rng.integers(0, m, size=n)
    return in_a, lists


def sample_stage1(G: Graph, F: SetFamily, t: int, seed: int, trials: int) -> SimulationReport:
    """Replay the first random stage ``trials`` times.

    A vertex is good when it lies outside A and, for every set of F, has at
    least t*k + 1 neighbours in A carrying that set as list.
    ``frac_low_first_set`` is the frequency with which vertex 0 has at most
    t*k A-neighbours carrying the first set of F.
    """
    if len(F) == 0:
        raise ValidationError("family is empty")
    if trials < 1:
        raise ValueError("trials must be positive")
    if G.n == 0:
        raise ValidationError("graph is empty")
    m, k = len(F), F.k
    if k < 2:
        raise ValidationError("sets must have at least two elements")
    p = sampling_probability(k, m)
    adj = _adjacency_matrix(G)
    need = t * k + 1
    a_sizes, goods = [], []
    low_first = 0
    for trial in range(trials):
        in_a, lists = stage1_trial(adj, m, p, seed, trial)
        onehot = np.zeros((G.n, m), dtype=np.int32)
        onehot[np.nonzero(in_a)[0], lists[in_a]] = 1
        counts = adj @ onehot
        good = ~in_a & (counts >= need).all(axis=1)
        a_sizes.append(int(in_a.sum()))
        goods.append(int(good.sum()))
        low_first += int(counts[0, 0] < need)
    a = np.asarray(a_sizes)
    g = np.asarray(goods)
    return SimulationReport(
        trials=trials,
        seed=seed,
        p=p,
        n=G.n,
        frac_A_large=float((a > 2 * p * G.n).mean()),
        frac_few_good=float((g < G.n / 2).mean()),
        frac_low_first_set=low_first / trials,
        good_mean=float(g.mean()),
        good_min=int(g.min()),
        good_max=int(g.max()),
        good_std=float(g.std()),
        union_bound_value=union_bound_check(G.n, k, m),
        a_sizes=a_sizes,
        good_counts=goods,
    )


@dataclass
class StageTwoReport:
    colourings: int
    good_vertices: list[int]
    blocking_sets: dict[int, list[list[int]]]
    verified: bool


def second_stage_check(G: Graph, F: SetFamily, t: int, in_a: list[int], list_of: dict[int, int],
                       max_a: int = 12) -> StageTwoReport:
    """Exhaust every t-improper L_A-colouring of G[A] and check the blocking argument.

    ``in_a`` lists the vertices of A and ``list_of[v]`` the mask of L_A(v).
    For each colouring c_A and each good vertex v, C_v (colours seen at
    least t+1 times among v's A-neighbours) must meet every set of F, some
    F_v in F must lie inside C_v, and v must then be uncolourable from F_v.
    F must lack Property B.
    """
    if len(in_a) > max_a:
        raise ValueError(f"|A| = {len(in_a)} exceeds the toy limit {max_a}")
    if propb.has_property_b(F):
        raise ValidationError("family has Property B")
    a_mask = 0
    for v in in_a:
        a_mask |= 1 << v
    need = t * F.k + 1
    good = []
    for v in range(G.n):
        if a_mask >> v & 1:
            continue
        nbrs = [u for u in G.neighbours(v) if a_mask >> u & 1]
        if all(sum(1 for u in nbrs if list_of[u] == s) >= need for s in F.sets):
            good.append(v)

    verified = True
    count = 0
    blocking: dict[int, set[int]] = {v: set() for v in good}
    order = list(in_a)
    for choice in product(*(elements(list_of[v]) for v in order)):
        c = dict(zip(order, choice))
        if any(sum(1 for u in G.neighbours(v) if u in c and c[u] == c[v]) > t for v in order):
            continue
        count += 1
        for v in good:
            seen: dict[int, int] = {}
            for u in G.neighbours(v):
                if u in c:
                    seen[c[u]] = seen.get(c[u], 0) + 1
            cv = 0
            for col, cnt in seen.items():
                if cnt >= t + 1:
                    cv |= 1 << (col - 1)
            if not all(s & cv for s in F.sets):
                verified = False
                continue
            inside = [s for s in F.sets if s & ~cv == 0]
            if not inside:
                verified = False
                continue
            fv = inside[0]
            blocking[v].add(fv)
            if any(seen.get(col, 0) <= t for col in elements(fv)):
                verified = False
    return StageTwoReport(
        colourings=count,
        good_vertices=good,
        blocking_sets={v: [elements(s) for s in sorted(b)] for v, b in blocking.items()},
        verified=verified,
    )


def not_good_bound(m: int) -> float:
    """m * 2 exp(-4 ln m) = 2 m^-3, the per-vertex bound on failing to be good."""
    return m * 2.0 * math.exp(-4.0 * math.log(m))

