"""Local views of a vertex in a cubic graph and their canonical forms.

A vertex ``v`` has neighbours ``u1, u2, u3`` (indices 0, 1, 2 here).  Each
second neighbour ``w`` is recorded by the set of ``u``'s it is adjacent to.
Second neighbours with an occupied neighbour further out are *covered*; they
can never join the independent set, so they only matter through the
attachment slots they use up.  A configuration keeps

* ``attach``: attachment sets of the uncovered second neighbours,
* ``e22``: edges among those uncovered second neighbours,
* ``covered``: attachment sets of the covered ones (always isolated).

Dropping ``covered`` gives the *view*, which is all the partition functions
depend on.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Iterable, Sequence

GIRTH_CLASSES = (4, 5, 6)
N_U = 3

Attach = tuple[int, ...]
Edge = tuple[int, int]


class ConfigurationError(ValueError):
    pass


def _girth_class(g) -> int:
    if isinstance(g, str):
        g = g.upper().lstrip("G")
    g = int(g)
    if g not in GIRTH_CLASSES:
        raise ConfigurationError(f"girth class must be one of 4, 5, 6, got {g}")
    return g


# ---------------------------------------------------------------- canonical form


def _relabel(a: Iterable[int], sigma: Sequence[int]) -> Attach:
    return tuple(sorted(sigma[u] for u in a))


def _vkey(a: Attach) -> tuple:
    return (len(a), a)


def canonical_form(
    attach: Sequence[Attach], e22: Iterable[Edge], covered: Sequence[Attach] = ()
) -> tuple[tuple[Attach, ...], tuple[Edge, ...], tuple[Attach, ...]]:
    """Orbit-minimal representative under relabelling ``u``'s and ``w``'s.

    Uncovered second neighbours are listed sorted by attachment set; the
    minimum runs over every permutation of the ``u``'s and every reordering of
    second neighbours with equal attachment sets.
    """
    n = len(attach)
    e22 = list(e22)
    best = None
    for sigma in itertools.permutations(range(N_U)):
        a2 = [_relabel(a, sigma) for a in attach]
        cov = tuple(sorted((_relabel(a, sigma) for a in covered), key=_vkey))
        order = sorted(range(n), key=lambda i: _vkey(a2[i]))
        seq_attach = tuple(a2[i] for i in order)
        head = (tuple(_vkey(a) for a in seq_attach), cov)
        if best is not None and head > best[0]:
            continue
        groups = [list(g) for _, g in itertools.groupby(order, key=lambda i: _vkey(a2[i]))]
        for perms in itertools.product(*(itertools.permutations(g) for g in groups)):
            pos = {}
            for p in perms:
                for w in p:
                    pos[w] = len(pos)
            edges = tuple(sorted(tuple(sorted((pos[a], pos[b]))) for a, b in e22))
            cand = (head, edges, seq_attach)
            if best is None or cand[:2] < best[:2]:
                best = cand
    (_, cov), edges, seq_attach = best
    return seq_attach, edges, cov


def key_string(attach: Sequence[Attach], e22: Iterable[Edge], covered: Sequence[Attach] = ()) -> str:
    def a(xs):
        return ".".join("".join(str(u + 1) for u in x) for x in xs)

    e = ".".join(f"{i}{j}" for i, j in e22)
    return f"W{a(attach)}|E{e}|X{a(covered)}"


# ---------------------------------------------------------------- validity


def structural_defects(girth_class: int, attach, e22, covered=(), full: bool = False) -> list[str]:
    """Reasons a view cannot occur around a vertex of a cubic graph of the class."""
    g = _girth_class(girth_class)
    out = []
    n = len(attach)
    for a in list(attach) + list(covered):
        if not a or len(set(a)) != len(a) or any(u not in range(N_U) for u in a):
            out.append(f"bad attachment set {a}")
    load = Counter(u for a in list(attach) + list(covered) for u in a)
    for u in range(N_U):
        if load[u] > 2 or (full and load[u] != 2):
            out.append(f"u{u + 1} has {load[u]} second-neighbour slots")
    adj: dict[int, set[int]] = {i: set() for i in range(n)}
    for i, j in e22:
        if not (0 <= i < n and 0 <= j < n) or i == j or j in adj[i]:
            out.append(f"bad edge {(i, j)}")
            continue
        adj[i].add(j)
        adj[j].add(i)
    for i in range(n):
        if len(attach[i]) + len(adj[i]) > 3:
            out.append(f"second neighbour {i} has degree {len(attach[i]) + len(adj[i])} > 3")
    for i, j in e22:
        if set(attach[i]) & set(attach[j]):
            out.append(f"edge {(i, j)} closes a triangle through a first neighbour")
        if adj[i] & adj[j]:
            out.append(f"edge {(i, j)} lies on a triangle")
    if g >= 5:
        if any(len(a) != 1 for a in list(attach) + list(covered)):
            out.append("a second neighbour meets two first neighbours (4-cycle through v)")
        for i, j in itertools.combinations(range(n), 2):
            common = adj[i] & adj[j]
            if len(common) >= 2 or (common and set(attach[i]) & set(attach[j])):
                out.append(f"4-cycle through second neighbours {i} and {j}")
    if g >= 6 and e22:
        out.append("edges among second neighbours close a 5-cycle")
    return sorted(set(out))


# ---------------------------------------------------------------- configurations


@dataclass(frozen=True, eq=False)
class Configuration:
    girth_class: int
    attach: tuple[Attach, ...]
    e22: tuple[Edge, ...]
    covered: tuple[Attach, ...] = ()
    canon_key: str = ""
    view_key: str = ""
    label: str | None = field(default=None)

    def __eq__(self, other):
        return isinstance(other, Configuration) and self.canon_key == other.canon_key

    def __hash__(self):
        return hash(self.canon_key)

    @property
    def size(self) -> int:
        """Number of uncovered second neighbours."""
        return len(self.attach)

    @property
    def uncovered_counts(self) -> tuple[int, int, int]:
        c = Counter(u for a in self.attach for u in a)
        return tuple(c[u] for u in range(N_U))

    @property
    def name(self) -> str:
        return self.label or self.canon_key

    def with_label(self, label: str | None) -> "Configuration":
        return Configuration(
            self.girth_class, self.attach, self.e22, self.covered, self.canon_key, self.view_key, label
        )

    def __repr__(self):
        return f"Configuration(G{self.girth_class}, {self.name})"


def canonicalize(
    girth_class,
    attach: Sequence[Iterable[int]],
    e22: Iterable[Edge] = (),
    covered: Sequence[Iterable[int]] = (),
    check: bool = True,
    label: str | None = None,
) -> Configuration:
    g = _girth_class(girth_class)
    attach = [tuple(sorted(a)) for a in attach]
    covered = [tuple(sorted(a)) for a in covered]
    e22 = [tuple(e) for e in e22]
    if check:
        bad = structural_defects(g, attach, e22, covered)
        if bad:
            raise ConfigurationError("; ".join(bad))
    a, e, c = canonical_form(attach, e22, covered)
    va, ve, _ = canonical_form(attach, e22)
    return Configuration(g, a, e, c, key_string(a, e, c), key_string(va, ve), label)


def g6_configuration(c: Sequence[int]) -> Configuration:
    """Girth-6 configuration with ``c[i]`` uncovered children below ``u_i``."""
    if len(c) != N_U or any(x not in (0, 1, 2) for x in c):
        raise ConfigurationError(f"counts must be three values in 0..2, got {c}")
    attach = [(i,) for i in range(N_U) for _ in range(c[i])]
    covered = [(i,) for i in range(N_U) for _ in range(2 - c[i])]
    return canonicalize(6, attach, (), covered, label=g6_label(c))


def g6_label(c: Sequence[int]) -> str:
    return "(" + ",".join(str(x) for x in sorted(c)) + ")"


def sort_key(c: Configuration) -> tuple:
    return (-c.size, c.canon_key)


# ---------------------------------------------------------------- types and coverage


@dataclass(frozen=True)
class ConfigType:
    """A full second neighbourhood (every slot filled) with its coverable positions."""

    name: str
    attach: tuple[Attach, ...]
    e22: tuple[Edge, ...]
    open_positions: tuple[int, ...]
    defects: tuple[str, ...] = ()

    def coverage_configurations(self, girth_class: int, label_style: str | None) -> dict[str, Configuration]:
        """All coverage patterns on the open positions, one entry per orbit."""
        n = len(self.attach)
        found: dict[str, tuple[tuple, Configuration]] = {}
        for bits in itertools.product((1, 0), repeat=len(self.open_positions)):
            x = [1] * n
            for p, b in zip(self.open_positions, bits):
                x[p] = b
            keep = [i for i in range(n) if x[i]]
            idx = {w: j for j, w in enumerate(keep)}
            if any(x[i] == 0 or x[j] == 0 for i, j in self.e22):
                raise ConfigurationError(f"{self.name}: coverage on a non-isolated position")
            conf = canonicalize(
                girth_class,
                [self.attach[i] for i in keep],
                [(idx[i], idx[j]) for i, j in self.e22],
                [self.attach[i] for i in range(n) if not x[i]],
                check=False,
            )
            rank = tuple(self._label_vector(x, label_style))
            prev = found.get(conf.canon_key)
            if prev is None or rank > prev[0]:
                found[conf.canon_key] = (rank, conf)
        out = {}
        for key, (rank, conf) in found.items():
            out[key] = conf.with_label(self._label(rank, label_style))
        return out

    def _label_vector(self, x: list[int], style: str | None) -> list[int]:
        if style in ("counts", "g6"):
            return [sum(x[p] for p in self.open_positions if self.attach[p] == (u,)) for u in range(N_U)]
        return x

    def _label(self, rank: tuple, style: str | None) -> str | None:
        if style is None:
            return None
        if style == "g6":
            return g6_label(rank)
        return f"{self.name}(" + ",".join(str(v) for v in rank) + ")"


def _isolated(n: int, e22: Iterable[Edge]) -> tuple[int, ...]:
    touched = {x for e in e22 for x in e}
    return tuple(i for i in range(n) if i not in touched)


@lru_cache(maxsize=None)
def enumerate_types(girth_class) -> tuple[ConfigType, ...]:
    """Every full second neighbourhood allowed in the class, up to symmetry."""
    g = _girth_class(girth_class)
    subsets = [s for r in (1, 2, 3) for s in itertools.combinations(range(N_U), r)]
    if g >= 5:
        subsets = [s for s in subsets if len(s) == 1]
    seen: dict[str, ConfigType] = {}
    for n in range(2, 7):
        for ws in itertools.combinations_with_replacement(subsets, n):
            load = Counter(u for a in ws for u in a)
            if any(load[u] != 2 for u in range(N_U)):
                continue
            pairs = [] if g >= 6 else [
                (i, j) for i, j in itertools.combinations(range(n), 2) if not set(ws[i]) & set(ws[j])
            ]
            for r in range(len(pairs) + 1):
                for es in itertools.combinations(pairs, r):
                    if structural_defects(g, ws, es, full=True):
                        continue
                    a, e, _ = canonical_form(ws, es)
                    key = key_string(a, e)
                    if key not in seen:
                        seen[key] = ConfigType(key, a, e, _isolated(len(a), e))
    return tuple(seen[k] for k in sorted(seen))


# ---------------------------------------------------------------- bundled catalogues


def _parse_catalog(text: str) -> list[ConfigType]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        name, fill = toks[0], toks[-1]
        n = len(fill)
        attach = tuple(tuple(int(ch) - 1 for ch in t) for t in toks[1 : 1 + n])
        edge_toks = toks[1 + n : -1]
        e22 = () if edge_toks == ["-"] else tuple(tuple(sorted(int(x) for x in t.split("-"))) for t in edge_toks)
        opens = tuple(i for i, ch in enumerate(fill) if ch == "o")
        out.append(ConfigType(_pretty_type_name(name), attach, e22, opens))
    return out


def _pretty_type_name(raw: str) -> str:
    fam, idx = raw.split("_")
    return f"C^{fam[1:]}_{idx}" if fam != "C" else f"C_{idx}"


@lru_cache(maxsize=None)
def catalog_types(girth_class) -> tuple[ConfigType, ...]:
    """Drawn configuration types for girth classes 4 and 5, with validity notes."""
    g = _girth_class(girth_class)
    if g == 6:
        return (ConfigType("C6", tuple((u,) for u in range(N_U) for _ in range(2)), (), tuple(range(6))),)
    text = resources.files(__package__.rsplit(".", 1)[0]).joinpath("data", f"catalog_g{g}.txt").read_text()
    out = []
    for t in _parse_catalog(text):
        bad = structural_defects(g, t.attach, t.e22, full=True)
        out.append(ConfigType(t.name, t.attach, t.e22, t.open_positions, tuple(bad)))
    return tuple(out)


def _collect(types: Iterable[ConfigType], g: int, style: str | None) -> list[Configuration]:
    confs: dict[str, Configuration] = {}
    for t in types:
        for key, c in t.coverage_configurations(g, style).items():
            if key in confs:
                raise ConfigurationError(f"{t.name}: duplicates configuration {confs[key].name}")
            confs[key] = c
    return sorted(confs.values(), key=sort_key)


@lru_cache(maxsize=None)
def _catalog(g: int) -> tuple[Configuration, ...]:
    style = {6: "g6", 5: "counts", 4: "positions"}[g]
    return tuple(_collect(catalog_types(g), g, style))


@lru_cache(maxsize=None)
def _complete(g: int) -> tuple[Configuration, ...]:
    labels = {c.canon_key: c.label for c in _catalog(g)}
    confs = _collect(enumerate_types(g), g, None)
    return tuple(c.with_label(labels.get(c.canon_key)) for c in confs)


CATALOGS = ("catalog", "complete")


def enumerate_configurations(girth_class, source: str = "catalog") -> list[Configuration]:
    """Configurations of a girth class in canonical order.

    ``source="catalog"`` expands the bundled drawn types (the reference set,
    10 / 46 / 207 configurations).  ``source="complete"`` expands every type
    produced by :func:`enumerate_types`; for girth 5 and 6 the two coincide.
    """
    g = _girth_class(girth_class)
    if source == "catalog":
        return list(_catalog(g))
    if source == "complete":
        return list(_complete(g))
    raise ValueError(f"unknown configuration source {source!r}")


def enumerate_views(girth_class) -> list[tuple[tuple[Attach, ...], tuple[Edge, ...]]]:
    """Every reduced view (uncovered part only) allowed in the class, up to symmetry.

    Generated directly from the slot and cycle constraints, independently of
    the type expansion; used to audit the configuration lists.
    """
    g = _girth_class(girth_class)
    subsets = [s for r in (1, 2, 3) for s in itertools.combinations(range(N_U), r)]
    if g >= 5:
        subsets = [s for s in subsets if len(s) == 1]
    seen = {}
    for n in range(0, 7):
        for ws in itertools.combinations_with_replacement(subsets, n):
            load = Counter(u for a in ws for u in a)
            if any(c > 2 for c in load.values()):
                continue
            pairs = [] if g >= 6 else [
                (i, j) for i, j in itertools.combinations(range(n), 2) if not set(ws[i]) & set(ws[j])
            ]
            for r in range(len(pairs) + 1):
                for es in itertools.combinations(pairs, r):
                    if structural_defects(g, ws, es):
                        continue
                    a, e, _ = canonical_form(ws, es)
                    seen.setdefault(key_string(a, e), (a, e))
    return [seen[k] for k in sorted(seen)]


@dataclass(frozen=True)
class CatalogAudit:
    girth_class: int
    catalog_count: int
    complete_count: int
    view_count: int
    invalid_types: tuple[str, ...]
    invalid_configurations: tuple[str, ...]
    catalog_only: tuple[str, ...]
    complete_only: tuple[str, ...]
    views_missing_from_catalog: tuple[str, ...]


def catalog_defects(girth_class) -> CatalogAudit:
    """Compare the bundled catalogue against the exhaustive enumeration."""
    g = _girth_class(girth_class)
    cat = enumerate_configurations(g, "catalog")
    comp = enumerate_configurations(g, "complete")
    views = {key_string(a, e) for a, e in enumerate_views(g)}
    ck = {c.canon_key for c in cat}
    pk = {c.canon_key for c in comp}
    invalid_types = tuple(t.name for t in catalog_types(g) if t.defects)
    invalid_confs = tuple(
        c.name for c in cat if structural_defects(g, c.attach, c.e22, c.covered)
    )
    return CatalogAudit(
        g,
        len(cat),
        len(comp),
        len(views),
        invalid_types,
        invalid_confs,
        tuple(c.name for c in cat if c.canon_key not in pk),
        tuple(c.canon_key for c in comp if c.canon_key not in ck),
        tuple(sorted(views - {c.view_key for c in cat})),
    )


@lru_cache(maxsize=None)
def catalog_index(girth_class, source: str = "catalog") -> tuple[dict, dict]:
    """Lookup tables by canonical key and by view key (first entry per view)."""
    by_key, by_view = {}, {}
    for c in enumerate_configurations(girth_class, source):
        by_key[c.canon_key] = c
        by_view.setdefault(c.view_key, c)
    return by_key, by_view


def find_configuration(girth_class, name_or_key: str, source: str = "catalog") -> Configuration:
    for c in enumerate_configurations(girth_class, source):
        if name_or_key in (c.label, c.canon_key):
            return c
    raise KeyError(f"no configuration {name_or_key!r} in girth class {girth_class}")
