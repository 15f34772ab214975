"""Partition functions and neighbour-count distributions of a configuration.

Everything is summed directly over the independent sets of the local view:
``S2`` ranges over independent subsets of the uncovered second neighbours,
``S1`` over subsets of the first neighbours with no neighbour in ``S2``.
Polynomials are built as integer coefficient lists and wrapped at the end.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

from gmpy2 import mpq

from ..exactmath import Poly, RatFunc, Scalar
from .structure import N_U, Configuration

T_RANGE = range(4)


def _padd(acc: list[int], shift: int, poly: list[int], scale: int = 1) -> None:
    need = shift + len(poly)
    if len(acc) < need:
        acc.extend([0] * (need - len(acc)))
    for i, c in enumerate(poly):
        acc[shift + i] += scale * c


def _binom_row(f: int) -> list[int]:
    return [comb(f, k) for k in range(f + 1)]


@dataclass(frozen=True)
class RawFunctions:
    """Integer numerators over a shared denominator.

    ``gamma_v[t] = gv[t] / z`` and ``gamma_u[t] = gu[t] / (3 z)``.
    """

    z_plus: tuple[int, ...]
    z_minus: tuple[int, ...]
    z: tuple[int, ...]
    gv: tuple[tuple[int, ...], ...]
    gu: tuple[tuple[int, ...], ...]

    def delta(self, t: int) -> tuple[int, ...]:
        """Numerator of ``gamma_v[t] - gamma_u[t]`` over ``3 z``."""
        out: list[int] = []
        _padd(out, 0, list(self.gv[t]), 3)
        _padd(out, 0, list(self.gu[t]), -1)
        return tuple(out)

    def evaluate(self, lam) -> "PointValues":
        """Exact values at a rational fugacity."""
        x = lam.a if isinstance(lam, Scalar) else mpq(lam)

        def ev(p):
            acc = mpq(0)
            for c in reversed(p):
                acc = acc * x + c
            return acc

        z = ev(self.z)
        alpha = ev(self.z_plus) / z
        deltas = tuple(ev(self.delta(t)) / (3 * z) for t in T_RANGE)
        return PointValues(alpha, deltas)


@dataclass(frozen=True)
class PointValues:
    alpha: mpq
    delta: tuple[mpq, ...]


def _raw(attach: tuple, e22: tuple) -> RawFunctions:
    n = len(attach)
    nbr = [0] * n
    for i, j in e22:
        nbr[i] |= 1 << j
        nbr[j] |= 1 << i
    zp: list[int] = []
    zm: list[int] = []
    gv: list[list[int]] = [[] for _ in T_RANGE]
    gu: list[list[int]] = [[] for _ in T_RANGE]
    for s2 in range(1 << n):
        if any(s2 >> i & 1 and nbr[i] & s2 for i in range(n)):
            continue
        size = bin(s2).count("1")
        hits = [0] * N_U
        for i in range(n):
            if s2 >> i & 1:
                for u in attach[i]:
                    hits[u] += 1
        free = sum(1 for h in hits if h == 0)
        row = _binom_row(free)
        # v occupied: every u is empty
        _padd(zp, 1 + size, [1])
        # v empty: any subset of the free u's
        _padd(zm, size, row)
        for t in range(free + 1):
            _padd(gv[t], size + t, [row[t]])
        _padd(gv[0], size + 1, [1])
        for u in range(N_U):
            _padd(gu[hits[u]], size, row)
            _padd(gu[hits[u] + 1], 1 + size, [1])
    z: list[int] = []
    _padd(z, 0, zp)
    _padd(z, 0, zm)
    return RawFunctions(tuple(zp), tuple(zm), tuple(z), tuple(map(tuple, gv)), tuple(map(tuple, gu)))


@lru_cache(maxsize=None)
def _raw_cached(attach: tuple, e22: tuple) -> RawFunctions:
    return _raw(attach, e22)


def raw_functions(c: Configuration) -> RawFunctions:
    return _raw_cached(c.attach, c.e22)


@dataclass(frozen=True)
class ConfigFunctions:
    z_plus: Poly
    z_minus: Poly
    z: Poly
    alpha: RatFunc
    gamma_v: tuple[RatFunc, ...]
    gamma_u: tuple[RatFunc, ...]


@lru_cache(maxsize=None)
def _functions(attach: tuple, e22: tuple) -> ConfigFunctions:
    r = _raw_cached(attach, e22)
    zp, zm, z = (Poly.from_ints(p) for p in (r.z_plus, r.z_minus, r.z))
    z3 = z.scale(3)
    return ConfigFunctions(
        zp,
        zm,
        z,
        RatFunc(zp, z),
        tuple(RatFunc(Poly.from_ints(r.gv[t]), z) for t in T_RANGE),
        tuple(RatFunc(Poly.from_ints(r.gu[t]), z3) for t in T_RANGE),
    )


def config_functions(c: Configuration) -> ConfigFunctions:
    return _functions(c.attach, c.e22)


def partition_functions(c: Configuration) -> tuple[Poly, Poly, Poly]:
    f = config_functions(c)
    return f.z_plus, f.z_minus, f.z


def alpha(c: Configuration) -> RatFunc:
    return config_functions(c).alpha


def gamma(c: Configuration, side: str, t: int) -> RatFunc:
    if t not in T_RANGE:
        raise ValueError("t must be in 0..3")
    f = config_functions(c)
    if side == "v":
        return f.gamma_v[t]
    if side == "u":
        return f.gamma_u[t]
    raise ValueError("side must be 'v' or 'u'")
