"""Domain types and text formats shared by the solvers.

Colour sets are plain ``int`` bit masks: colour ``c`` (1-based) lives in bit
``c - 1``.  Vertices are dense 0-based integers.  Every type here is
immutable once built.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

MAX_ELL = 64


class FormatError(ValueError):
    """Malformed input text; ``lineno`` is 1-based (0 when not line-specific)."""

    def __init__(self, message: str, lineno: int = 0):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno else message)


class ValidationError(ValueError):
    pass


# ---------------------------------------------------------------- colour sets

def mask_of(colours: Iterable[int]) -> int:
    m = 0
    for c in colours:
        if c < 1:
            raise ValidationError(f"colour {c} is not positive")
        m |= 1 << (c - 1)
    return m


def elements(mask: int) -> list[int]:
    """Colours of ``mask`` in increasing order."""
    out = []
    c = 1
    while mask:
        if mask & 1:
            out.append(c)
        mask >>= 1
        c += 1
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def full_mask(ell: int) -> int:
    return (1 << ell) - 1


def check_ell(ell: int) -> None:
    if not 1 <= ell <= MAX_ELL:
        raise ValidationError(f"spectrum size {ell} outside 1..{MAX_ELL}")


def k_subsets(k: int, ell: int) -> list[int]:
    """All k-subsets of [ell] as masks, in increasing numeric order."""
    masks = [mask_of(c) for c in combinations(range(1, ell + 1), k)]
    masks.sort()
    return masks


def format_set(mask: int) -> str:
    return "{" + ",".join(map(str, elements(mask))) + "}"


# ---------------------------------------------------------------- set family

@dataclass(frozen=True)
class SetFamily:
    """Distinct k-subsets of [ell], stored sorted by mask value."""

    k: int
    ell: int
    sets: tuple[int, ...] = ()

    def __post_init__(self):
        check_ell(self.ell)
        if not 1 <= self.k <= self.ell:
            raise ValidationError(f"k={self.k} must satisfy 1 <= k <= l={self.ell}")
        universe = full_mask(self.ell)
        for s in self.sets:
            if s & ~universe:
                raise ValidationError(f"set {format_set(s)} not inside [{self.ell}]")
            if popcount(s) != self.k:
                raise ValidationError(f"set {format_set(s)} does not have {self.k} elements")
        ordered = tuple(sorted(self.sets))
        if len(set(ordered)) != len(ordered):
            raise ValidationError("duplicate set in family")
        object.__setattr__(self, "sets", ordered)

    @classmethod
    def from_lists(cls, k: int, ell: int, sets: Iterable[Iterable[int]]) -> SetFamily:
        return cls(k, ell, tuple(mask_of(s) for s in sets))

    @classmethod
    def complete(cls, k: int, ell: int) -> SetFamily:
        return cls(k, ell, tuple(k_subsets(k, ell)))

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def as_lists(self) -> list[list[int]]:
        return [elements(s) for s in self.sets]


def fano_plane() -> SetFamily:
    lines = [(1, 2, 3), (1, 4, 5), (1, 6, 7), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 5, 6)]
    return SetFamily.from_lists(3, 7, lines)


# ---------------------------------------------------------------------- graph

@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1.

    ``adj[v]`` is the neighbourhood of ``v`` as a vertex bit mask.
    """

    n: int
    edges: frozenset[tuple[int, int]] = frozenset()
    adj: tuple[int, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValidationError("negative vertex count")
        adj = [0] * self.n
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise ValidationError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValidationError(f"edge ({u},{v}) outside 0..{self.n - 1}")
            a, b = (u, v) if u < v else (v, u)
            norm.add((a, b))
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        object.__setattr__(self, "edges", frozenset(norm))
        object.__setattr__(self, "adj", tuple(adj))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        return cls(n, frozenset(tuple(e) for e in edges))

    def neighbours(self, v: int) -> list[int]:
        m = self.adj[v]
        out = []
        while m:
            low = m & -m
            out.append(low.bit_length() - 1)
            m ^= low
        return out

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degrees(self) -> list[int]:
        return [self.degree(v) for v in range(self.n)]

    def min_degree(self) -> int:
        return min(self.degrees(), default=0)

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def induced_max_degree(self, vertices: Iterable[int]) -> int:
        m = 0
        for v in vertices:
            m |= 1 << v
        return max((popcount(self.adj[v] & m) for v in vertices_of(m)), default=0)

def vertices_of(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2))


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, ((u, a + v) for u in range(a) for v in range(b)))


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


# ------------------------------------------------------------ list assignment

@dataclass(frozen=True)
class ListAssignment:
    """A (k, ell)-list-assignment: ``lists[v]`` is the k-subset mask of vertex v."""

    k: int
    ell: int
    lists: tuple[int, ...]

    def __post_init__(self):
        check_ell(self.ell)
        if not 1 <= self.k <= self.ell:
            raise ValidationError(f"k={self.k} must satisfy 1 <= k <= l={self.ell}")
        object.__setattr__(self, "lists", tuple(self.lists))
        universe = full_mask(self.ell)
        for v, s in enumerate(self.lists):
            if s & ~universe:
                raise ValidationError(f"list of vertex {v} has a colour outside [{self.ell}]")
            if popcount(s) != self.k:
                raise ValidationError(f"list of vertex {v} does not have {self.k} colours")

    @classmethod
    def from_lists(cls, k: int, ell: int, lists: Iterable[Iterable[int]]) -> ListAssignment:
        return cls(k, ell, tuple(mask_of(s) for s in lists))

    @classmethod
    def uniform(cls, n: int, k: int) -> ListAssignment:
        """Every vertex gets the list [k]."""
        return cls(k, k, (full_mask(k),) * n)

    @property
    def n(self) -> int:
        return len(self.lists)

    def family(self) -> SetFamily:
        return SetFamily(self.k, self.ell, tuple(set(self.lists)))


def validate_list_assignment(G: Graph, L: ListAssignment) -> None:
    """Raise ``ValidationError`` unless ``L`` gives each vertex of ``G`` a k-subset of [ell]."""
    if L.n != G.n:
        raise ValidationError(f"assignment covers {L.n} vertices, graph has {G.n}")
    universe = full_mask(L.ell)
    for v, s in enumerate(L.lists):
        if s & ~universe:
            raise ValidationError(f"list of vertex {v} has a colour outside [{L.ell}]")
        if popcount(s) != L.k:
            raise ValidationError(f"list of vertex {v} does not have {L.k} colours")


def list_assignment_unchecked(k: int, ell: int, lists: Sequence[int]) -> ListAssignment:
    """Build without ``__post_init__`` checks; callers guarantee validity."""
    obj = object.__new__(ListAssignment)
    object.__setattr__(obj, "k", k)
    object.__setattr__(obj, "ell", ell)
    object.__setattr__(obj, "lists", tuple(lists))
    return obj


# ------------------------------------------------- colourings, partitions, witnesses

Colouring = tuple  # per-vertex colour, 1-based


def validate_partition(parts: Sequence[Sequence[int]], n: int) -> tuple[tuple[int, ...], ...]:
    seen = set()
    for p in parts:
        if not p:
            raise ValidationError("empty part")
        for v in p:
            if not 0 <= v < n:
                raise ValidationError(f"vertex {v} outside 0..{n - 1}")
            if v in seen:
                raise ValidationError(f"vertex {v} in two parts")
            seen.add(v)
    if len(seen) != n:
        raise ValidationError("parts do not cover every vertex")
    return tuple(tuple(sorted(p)) for p in parts)


@dataclass(frozen=True)
class Witness:
    """Either one set B (``single``) or mutually disjoint transversals B_1..B_j."""

    sets: tuple[int, ...]
    single: bool = False

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(self.sets))
        if self.single and len(self.sets) != 1:
            raise ValidationError("single-set witness must hold exactly one set")
        if not self.single:
            seen = 0
            for s in self.sets:
                if s & seen:
                    raise ValidationError("witness sets are not mutually disjoint")
                seen |= s

    def as_lists(self) -> list[list[int]]:
        return [elements(s) for s in self.sets]


# --------------------------------------------------------------- text formats

def _text(data: str | bytes) -> str:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return data


def _content_lines(text: str):
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r").strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def _parse_header(line: str, lineno: int, kind: str, keys: Sequence[str]) -> dict[str, int]:
    fields = line.split()
    if not fields or fields[0] != kind:
        raise FormatError(f"expected '{kind}' header", lineno)
    values = {}
    for f in fields[1:]:
        name, eq, val = f.partition("=")
        if not eq or name not in keys or name in values:
            raise FormatError(f"bad header field {f!r}", lineno)
        try:
            values[name] = int(val)
        except ValueError:
            raise FormatError(f"non-integer value in {f!r}", lineno) from None
    missing = [k for k in keys if k not in values]
    if missing:
        raise FormatError(f"header missing {', '.join(missing)}", lineno)
    return values


def _ints(line: str, lineno: int) -> list[int]:
    try:
        return [int(x) for x in line.split(" ")]
    except ValueError:
        raise FormatError(f"expected integers separated by single spaces: {line!r}", lineno) from None


def _increasing_set(values: list[int], k: int, ell: int, lineno: int) -> int:
    if len(values) != k:
        raise FormatError(f"set has {len(values)} elements, expected {k}", lineno)
    if any(b <= a for a, b in zip(values, values[1:])):
        raise FormatError("elements must be strictly increasing", lineno)
    if values[0] < 1 or values[-1] > ell:
        raise FormatError(f"element outside [{ell}]", lineno)
    return mask_of(values)


def parse_family(data: str | bytes) -> SetFamily:
    lines = list(_content_lines(_text(data)))
    if not lines:
        raise FormatError("empty input")
    lineno, head = lines[0]
    h = _parse_header(head, lineno, "family", ("k", "l"))
    k, ell = h["k"], h["l"]
    if not 1 <= ell <= MAX_ELL or not 1 <= k <= ell:
        raise FormatError(f"invalid parameters k={k} l={ell}", lineno)
    sets: list[int] = []
    seen: dict[int, int] = {}
    for lineno, line in lines[1:]:
        m = _increasing_set(_ints(line, lineno), k, ell, lineno)
        if m in seen:
            raise FormatError(f"duplicate set (first on line {seen[m]})", lineno)
        seen[m] = lineno
        sets.append(m)
    return SetFamily(k, ell, tuple(sets))


def serialize_family(F: SetFamily) -> str:
    out = [f"family k={F.k} l={F.ell}"]
    out += [" ".join(map(str, elements(s))) for s in F.sets]
    return "\n".join(out) + "\n"


def parse_graph(data: str | bytes) -> Graph:
    lines = list(_content_lines(_text(data)))
    if not lines:
        raise FormatError("empty input")
    lineno, head = lines[0]
    n = _parse_header(head, lineno, "graph", ("n",))["n"]
    if n < 0:
        raise FormatError("negative vertex count", lineno)
    edges = set()
    for lineno, line in lines[1:]:
        vals = _ints(line, lineno)
        if len(vals) != 2:
            raise FormatError("edge line must hold two vertices", lineno)
        u, v = vals
        if u == v:
            raise FormatError(f"loop at vertex {u}", lineno)
        if u > v:
            raise FormatError("edge must be written with u < v", lineno)
        if u < 0 or v >= n:
            raise FormatError(f"vertex outside 0..{n - 1}", lineno)
        if (u, v) in edges:
            raise FormatError(f"repeated edge {u} {v}", lineno)
        edges.add((u, v))
    return Graph(n, frozenset(edges))


def serialize_graph(G: Graph) -> str:
    out = [f"graph n={G.n}"] + [f"{u} {v}" for u, v in G.sorted_edges()]
    return "\n".join(out) + "\n"


def parse_lists(data: str | bytes) -> ListAssignment:
    lines = list(_content_lines(_text(data)))
    if not lines:
        raise FormatError("empty input")
    lineno, head = lines[0]
    h = _parse_header(head, lineno, "lists", ("k", "l", "n"))
    k, ell, n = h["k"], h["l"], h["n"]
    if not 1 <= ell <= MAX_ELL or not 1 <= k <= ell or n < 0:
        raise FormatError(f"invalid parameters k={k} l={ell} n={n}", lineno)
    lists: list[int | None] = [None] * n
    for lineno, line in lines[1:]:
        vertex, colon, rest = line.partition(":")
        if not colon:
            raise FormatError("expected 'v: c1 ... ck'", lineno)
        try:
            v = int(vertex)
        except ValueError:
            raise FormatError(f"bad vertex id {vertex!r}", lineno) from None
        if not 0 <= v < n:
            raise FormatError(f"vertex {v} outside 0..{n - 1}", lineno)
        if lists[v] is not None:
            raise FormatError(f"vertex {v} listed twice", lineno)
        rest = rest.strip()
        lists[v] = _increasing_set(_ints(rest, lineno), k, ell, lineno)
    missing = [v for v, s in enumerate(lists) if s is None]
    if missing:
        raise FormatError(f"no list for vertex {missing[0]}")
    return ListAssignment(k, ell, tuple(lists))


def serialize_lists(L: ListAssignment) -> str:
    out = [f"lists k={L.k} l={L.ell} n={L.n}"]
    out += [f"{v}: " + " ".join(map(str, elements(s))) for v, s in enumerate(L.lists)]
    return "\n".join(out) + "\n"
