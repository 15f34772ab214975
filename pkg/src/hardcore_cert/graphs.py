"""Finite simple graphs, their independence polynomials and occupancy fractions."""

from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable

from gmpy2 import mpq

from .exactmath import Poly, RatFunc, Scalar, poly_eval

MAX_INDPOLY_ORDER = 40


class GraphFormatError(ValueError):
    pass


class GraphValidationError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    n: int
    adjacency: tuple[tuple[int, ...], ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphFormatError(f"self-loop at {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs))

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def disjoint_union(self, other: "Graph") -> "Graph":
        shift = self.n
        adj = self.adjacency + tuple(tuple(w + shift for w in a) for a in other.adjacency)
        return Graph(self.n + other.n, adj)

    def copies(self, k: int) -> "Graph":
        g = Graph(0, ())
        for _ in range(k):
            g = g.disjoint_union(self)
        return g


@dataclass(frozen=True)
class NamedGraph:
    name: str
    graph: Graph
    expected_order: int
    expected_regularity: int
    expected_girth: float


def girth(g: Graph) -> float:
    """Length of a shortest cycle, ``math.inf`` for forests."""
    best = math.inf
    for root in range(g.n):
        dist = {root: 0}
        parent = {root: -1}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for w in g.adjacency[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif w != parent[u]:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


def check_regular(g: Graph) -> int | None:
    """Common degree if the graph is regular, else None."""
    degs = {len(a) for a in g.adjacency}
    if len(degs) == 1:
        return degs.pop()
    return 0 if g.n == 0 else None


def _masks(g: Graph) -> list[int]:
    return [sum(1 << w for w in a) for a in g.adjacency]


def _poly_add(p: list[int], q: list[int], shift: int = 0) -> list[int]:
    out = list(p) + [0] * max(0, len(q) + shift - len(p))
    for i, c in enumerate(q):
        out[i + shift] += c
    return out


def _poly_mul(p: list[int], q: list[int]) -> list[int]:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _component(start: int, alive: int, nb: list[int]) -> int:
    comp = frontier = 1 << start
    while frontier:
        nxt = 0
        m = frontier
        while m:
            low = m & -m
            nxt |= nb[low.bit_length() - 1]
            m ^= low
        nxt &= alive & ~comp
        comp |= nxt
        frontier = nxt
    return comp


def independence_counts(g: Graph) -> list[int]:
    """Ascending coefficients of the independence polynomial.

    Deletion recursion on a maximum-degree vertex inside each connected
    component, memoised on the remaining vertex set.
    """
    if g.n > MAX_INDPOLY_ORDER:
        raise ValueError(f"independence polynomial limited to n <= {MAX_INDPOLY_ORDER}")
    nb = _masks(g)
    memo: dict[int, list[int]] = {0: [1]}

    def solve(alive: int) -> list[int]:
        hit = memo.get(alive)
        if hit is not None:
            return hit
        start = (alive & -alive).bit_length() - 1
        comp = _component(start, alive, nb)
        if comp != alive:
            res = _poly_mul(solve(comp), solve(alive & ~comp))
        else:
            best, bestdeg = start, -1
            m = alive
            while m:
                low = m & -m
                v = low.bit_length() - 1
                d = bin(nb[v] & alive).count("1")
                if d > bestdeg:
                    best, bestdeg = v, d
                m ^= low
            if bestdeg == 0:
                res = [1, 1]
            else:
                without = solve(alive & ~(1 << best))
                with_v = solve(alive & ~(1 << best) & ~nb[best])
                res = _poly_add(without, with_v, 1)
        memo[alive] = res
        return res

    return solve((1 << g.n) - 1)


def independence_polynomial(g: Graph) -> Poly:
    return Poly.from_ints(independence_counts(g))


def independence_number(g: Graph) -> int:
    return len(independence_counts(g)) - 1


def occupancy_ratfunc(g: Graph) -> RatFunc:
    """Expected fraction of occupied vertices as a function of the fugacity."""
    p = independence_polynomial(g)
    return RatFunc(Poly([0, 1]) * p.derivative(), p.scale(g.n))


def occupancy_fraction(g: Graph, lam) -> Scalar:
    lam = Scalar.coerce(lam)
    if lam.sign() <= 0:
        raise ValueError("fugacity must be positive")
    p = independence_polynomial(g)
    return lam * poly_eval(p.derivative(), lam) / (g.n * poly_eval(p, lam))


def moore_order(d: int, g: int) -> int:
    """Moore lower bound on the order of a d-regular graph of girth g."""
    if d < 2 or g < 3:
        raise ValueError("need d >= 2 and g >= 3")
    if g % 2:
        return 1 + d * sum((d - 1) ** j for j in range((g - 3) // 2 + 1))
    return 1 + (d - 1) ** (g // 2 - 1) + d * sum((d - 1) ** j for j in range((g - 4) // 2 + 1))


# ---------------------------------------------------------------- file format


def parse_graph(text: str, source: str = "<string>") -> Graph:
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise GraphFormatError(f"{source}: empty graph file")
    try:
        n, m = (int(x) for x in lines[0].split())
    except ValueError:
        raise GraphFormatError(f"{source}: header must be 'n m'") from None
    if len(lines) - 1 != m:
        raise GraphFormatError(f"{source}: header says {m} edges, found {len(lines) - 1}")
    edges = []
    seen = set()
    for line in lines[1:]:
        try:
            u, v = (int(x) for x in line.split())
        except ValueError:
            raise GraphFormatError(f"{source}: bad edge line {line!r}") from None
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"{source}: duplicate edge {key}")
        seen.add(key)
        edges.append((u, v))
    return Graph.from_edges(n, edges)


def format_graph(g: Graph) -> str:
    es = g.edges()
    return "\n".join([f"{g.n} {len(es)}"] + [f"{u} {v}" for u, v in es]) + "\n"


def load_graph(path: str | Path) -> Graph:
    path = Path(path)
    return parse_graph(path.read_text(), str(path))


# ---------------------------------------------------------------- catalogue

# name -> (order, regularity, girth)
_EXPECTED = {
    "petersen": (10, 3, 5),
    "heawood": (14, 3, 6),
    "gp72": (14, 3, 5),
    "tutte_coxeter_h38": (30, 3, 8),
    "h46": (26, 4, 6),
    "robertson": (19, 4, 5),
    "cyclotomic13": (13, 4, 4),
}


def named_graph_names() -> list[str]:
    return sorted(_EXPECTED) + ["complete(n)", "cycle(n)", "kdd(d)"]


def complete(n: int) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycles need at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def kdd(d: int) -> Graph:
    return Graph.from_edges(2 * d, [(i, d + j) for i in range(d) for j in range(d)])


def _validate(ng: NamedGraph) -> NamedGraph:
    g = ng.graph
    if g.n != ng.expected_order:
        raise GraphValidationError(f"{ng.name}: order {g.n}, expected {ng.expected_order}")
    if check_regular(g) != ng.expected_regularity:
        raise GraphValidationError(f"{ng.name}: not {ng.expected_regularity}-regular")
    gi = girth(g)
    if gi != ng.expected_girth:
        raise GraphValidationError(f"{ng.name}: girth {gi}, expected {ng.expected_girth}")
    return ng


@lru_cache(maxsize=None)
def named(name: str) -> NamedGraph:
    """Load a bundled graph, or build ``complete(n)``, ``cycle(n)``, ``kdd(d)``.

    Every graph is checked against its expected order, regularity and girth.
    """
    m = re.fullmatch(r"(complete|cycle|kdd)[(:]?(\d+)\)?", name)
    if m:
        kind, k = m.group(1), int(m.group(2))
        if kind == "complete":
            ng = NamedGraph(name, complete(k), k, k - 1, 3 if k >= 3 else math.inf)
        elif kind == "cycle":
            ng = NamedGraph(name, cycle(k), k, 2, k)
        else:
            ng = NamedGraph(name, kdd(k), 2 * k, k, 4 if k >= 2 else math.inf)
        return _validate(ng)
    if name not in _EXPECTED:
        raise KeyError(f"unknown graph {name!r}; known: {', '.join(named_graph_names())}")
    text = resources.files(__package__).joinpath("data", f"{name}.txt").read_text()
    order, reg, gi = _EXPECTED[name]
    return _validate(NamedGraph(name, parse_graph(text, name), order, reg, gi))


def resolve_graph(name_or_path: str) -> Graph:
    """A bundled name or a path to an edge-list file."""
    p = Path(name_or_path)
    if p.exists() and p.is_file():
        return load_graph(p)
    return named(name_or_path).graph


def occupancy_exact(g: Graph, lam) -> mpq:
    """Rational occupancy fraction at a rational fugacity."""
    v = occupancy_fraction(g, lam)
    if not v.is_rational():
        raise ValueError("fugacity outside Q")
    return v.a
