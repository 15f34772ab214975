"""Read configurations off concrete cubic graphs."""

from __future__ import annotations

from collections import defaultdict

from gmpy2 import mpq

from ..graphs import Graph, check_regular, girth
from .structure import Configuration, ConfigurationError, canonicalize, catalog_index

MAX_DISTRIBUTION_ORDER = 16


def graph_girth_class(g: Graph) -> int:
    gi = girth(g)
    if gi < 4:
        raise ConfigurationError("graph has a triangle")
    return int(min(gi, 6))


def _check_class(g: Graph, girth_class: int | None) -> int:
    if check_regular(g) != 3:
        raise ConfigurationError("graph is not cubic")
    actual = graph_girth_class(g)
    if girth_class is None:
        return actual
    if actual < girth_class:
        raise ConfigurationError(f"graph girth is below {girth_class}")
    return girth_class


def _spheres(g: Graph, v: int) -> tuple[tuple[int, ...], list[int], set[int]]:
    first = g.adjacency[v]
    inner = {v, *first}
    second = sorted({w for u in first for w in g.adjacency[u]} - inner)
    ball = inner | set(second)
    third = {x for w in second for x in g.adjacency[w]} - ball
    return first, second, third


def _match(conf: Configuration, source: str) -> Configuration:
    by_key, by_view = catalog_index(conf.girth_class, source)
    return by_key.get(conf.canon_key) or by_view.get(conf.view_key) or conf


def _config_for(g: Graph, v: int, first, second, occupied_far: set[int], gc: int, source: str) -> Configuration:
    covered_w = {w for w in second if any(x in occupied_far for x in g.adjacency[w])}
    unc = [w for w in second if w not in covered_w]
    idx = {w: i for i, w in enumerate(unc)}
    attach = [[i for i, u in enumerate(first) if w in g.adjacency[u]] for w in unc]
    covered = [[i for i, u in enumerate(first) if w in g.adjacency[u]] for w in sorted(covered_w)]
    e22 = [(idx[a], idx[b]) for a in unc for b in g.adjacency[a] if b in idx and idx[a] < idx[b]]
    return _match(canonicalize(gc, attach, e22, covered), source)


def extract_configuration(
    g: Graph, v: int, occupied, girth_class: int | None = None, source: str = "catalog"
) -> Configuration:
    """Configuration seen from ``v`` when the vertices in ``occupied`` are occupied.

    Returns the catalogue entry with the same structure, or failing that the
    same view, so labels and functions line up with the enumerated lists.
    """
    if not 0 <= v < g.n:
        raise ConfigurationError(f"vertex {v} out of range")
    occ = set(occupied)
    for a in occ:
        if not 0 <= a < g.n:
            raise ConfigurationError(f"vertex {a} out of range")
        if occ & set(g.adjacency[a]):
            raise ConfigurationError("occupied set is not independent")
    gc = _check_class(g, girth_class)
    first, second, third = _spheres(g, v)
    return _config_for(g, v, first, second, occ & third, gc, source)


def _independent_sets(g: Graph):
    nb = [sum(1 << w for w in a) for a in g.adjacency]

    def rec(i: int, chosen: int, blocked: int):
        if i == g.n:
            yield chosen
            return
        yield from rec(i + 1, chosen, blocked)
        if not blocked >> i & 1:
            yield from rec(i + 1, chosen | 1 << i, blocked | nb[i])

    yield from rec(0, 0, 0)


def configuration_distribution(
    g: Graph, lam, girth_class: int | None = None, source: str = "catalog"
) -> dict[Configuration, mpq]:
    """Exact law of the configuration at a uniform vertex under the hard-core model."""
    if g.n > MAX_DISTRIBUTION_ORDER:
        raise ValueError(f"exhaustive distribution limited to n <= {MAX_DISTRIBUTION_ORDER}")
    lam = mpq(lam)
    if lam <= 0:
        raise ValueError("fugacity must be positive")
    gc = _check_class(g, girth_class)
    sets = list(_independent_sets(g))
    powers = [lam**k for k in range(g.n + 1)]
    total = sum(powers[bin(s).count("1")] for s in sets)
    dist: dict[Configuration, mpq] = defaultdict(mpq)
    for v in range(g.n):
        first, second, third = _spheres(g, v)
        far = sum(1 << x for x in third)
        by_mask: dict[int, mpq] = defaultdict(mpq)
        for s in sets:
            by_mask[s & far] += powers[bin(s).count("1")]
        for mask, w in by_mask.items():
            occ = {x for x in third if mask >> x & 1}
            conf = _config_for(g, v, first, second, occ, gc, source)
            dist[conf] += w
    scale = 1 / (g.n * total)
    return {c: p * scale for c, p in sorted(dist.items(), key=lambda kv: (-kv[0].size, kv[0].canon_key))}
