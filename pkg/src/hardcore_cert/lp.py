"""Exact linear programs over configuration distributions.

For a fixed rational fugacity the variables are the probabilities ``p(C)``
of the configurations.  The constraints are ``sum p = 1`` and, for
``t = 0, 1, 2``, ``sum p (gamma_v[t] - gamma_u[t]) = 0``: the number of
occupied neighbours of a uniform vertex has the same law as that of its
uniform neighbour.  The objective is the expected occupancy of ``v``.

Solved with a dense two-phase simplex in exact rationals using Bland's
rule; the duals are recomputed from the final basis and checked.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from gmpy2 import mpq

from .exactmath import parse_rational
from .localview import Configuration, enumerate_configurations, raw_functions

ROW_NAMES = ("normalisation", "t=0", "t=1", "t=2")
SENSES = ("max", "min")


class LPError(RuntimeError):
    pass


@dataclass(frozen=True)
class LPProblem:
    sense: str
    lam: mpq
    columns: tuple[Configuration, ...]
    objective: tuple[mpq, ...]
    eq_rows: tuple[tuple[mpq, ...], ...]
    rhs: tuple[mpq, ...] = (mpq(1), mpq(0), mpq(0), mpq(0))


@dataclass(frozen=True)
class LPSolution:
    status: str
    value: mpq | None = None
    primal: tuple[mpq, ...] = ()
    dual: tuple[mpq, ...] = ()
    basis: tuple[int, ...] = ()
    redundant_rows: tuple[int, ...] = field(default=())

    def support(self) -> list[int]:
        return [j for j, x in enumerate(self.primal) if x]


def _rational(lam) -> mpq:
    lam = parse_rational(lam) if isinstance(lam, str) else mpq(lam)
    if lam <= 0:
        raise ValueError("fugacity must be positive")
    return lam


def lp_rows(columns: Sequence[Configuration], lam) -> tuple[tuple[mpq, ...], tuple[tuple[mpq, ...], ...]]:
    """Objective and the four equality rows evaluated at ``lam``."""
    vals = [raw_functions(c).evaluate(lam) for c in columns]
    obj = tuple(v.alpha for v in vals)
    rows = (tuple(mpq(1) for _ in vals),) + tuple(tuple(v.delta[t] for v in vals) for t in range(3))
    return obj, rows


def build_lp(girth_class, lam, sense: str = "max", source: str = "catalog", columns=None) -> LPProblem:
    if sense not in SENSES:
        raise ValueError(f"sense must be max or min, got {sense!r}")
    lam = _rational(lam)
    cols = tuple(columns) if columns is not None else tuple(enumerate_configurations(girth_class, source))
    obj, rows = lp_rows(cols, lam)
    return LPProblem(sense, lam, cols, obj, rows)


# ---------------------------------------------------------------- simplex


def _pivot(tab: list[list[mpq]], r: int, c: int) -> None:
    row = tab[r]
    inv = 1 / row[c]
    if inv != 1:
        tab[r] = row = [x * inv for x in row]
    for i, other in enumerate(tab):
        if i != r:
            f = other[c]
            if f:
                tab[i] = [a - f * b for a, b in zip(other, row)]


def _simplex(tab: list[list[mpq]], basis: list[int], cost: list[mpq], allowed: int) -> str:
    """Maximise ``cost . x`` over the tableau in place; columns >= allowed never enter."""
    m = len(tab)
    while True:
        cb = [cost[b] for b in basis]
        enter = -1
        for j in range(allowed):
            if j in basis:
                continue
            red = cost[j] - sum(cb[i] * tab[i][j] for i in range(m) if tab[i][j])
            if red > 0:
                enter = j
                break
        if enter < 0:
            return "optimal"
        best = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return "unbounded"
        r = best[1]
        _pivot(tab, r, enter)
        basis[r] = enter


def _solve_linear(mat: list[list[mpq]], rhs: list[mpq]) -> list[mpq]:
    """Solve a square nonsingular system exactly."""
    n = len(mat)
    aug = [list(row) + [b] for row, b in zip(mat, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise LPError("singular basis")
        aug[col], aug[piv] = aug[piv], aug[col]
        _pivot(aug, col, col)
    return [aug[i][-1] for i in range(n)]


def solve_exact(problem: LPProblem) -> LPSolution:
    n = len(problem.columns)
    m = len(problem.eq_rows)
    cmax = list(problem.objective) if problem.sense == "max" else [-c for c in problem.objective]
    rows = [list(r) for r in problem.eq_rows]
    rhs = list(problem.rhs)
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-x for x in rows[i]]
            rhs[i] = -rhs[i]
    tab = [rows[i] + [mpq(1) if k == i else mpq(0) for k in range(m)] + [rhs[i]] for i in range(m)]
    basis = list(range(n, n + m))
    phase1 = [mpq(0)] * n + [mpq(-1)] * m
    _simplex(tab, basis, phase1, n + m)
    if any(tab[i][-1] for i in range(m) if basis[i] >= n):
        return LPSolution("infeasible")
    # drive remaining artificials out; rows where that is impossible are redundant
    redundant = []
    for i in range(m):
        if basis[i] >= n:
            j = next((j for j in range(n) if tab[i][j] and j not in basis), None)
            if j is None:
                redundant.append(i)
            else:
                _pivot(tab, i, j)
                basis[i] = j
    keep = [i for i in range(m) if i not in redundant]
    tab = [tab[i] for i in keep]
    basis = [basis[i] for i in keep]
    status = _simplex(tab, basis, cmax + [mpq(0)] * m, n)
    if status != "optimal":
        return LPSolution(status)
    x = [mpq(0)] * n
    for i, b in enumerate(basis):
        x[b] = tab[i][-1]
    value = sum(c * xi for c, xi in zip(problem.objective, x))
    # duals: B^T y = c_B on the non-redundant rows
    row_idx = [i for i in range(m) if i not in redundant]
    bt = [[problem.eq_rows[i][b] for i in row_idx] for b in basis]
    y_sub = _solve_linear(bt, [cmax[b] for b in basis])
    y = [mpq(0)] * m
    for i, val in zip(row_idx, y_sub):
        y[i] = val
    if problem.sense == "min":
        y = [-v for v in y]
    sol = LPSolution("optimal", value, tuple(x), tuple(y), tuple(basis), tuple(redundant))
    _certify(problem, sol)
    return sol


def reduced_costs(problem: LPProblem, dual: Sequence[mpq]) -> list[mpq]:
    """Dual slack per column, nonnegative when ``dual`` is feasible."""
    out = []
    for j in range(len(problem.columns)):
        lhs = sum(dual[i] * problem.eq_rows[i][j] for i in range(len(dual)))
        d = lhs - problem.objective[j]
        out.append(d if problem.sense == "max" else -d)
    return out


def _certify(problem: LPProblem, sol: LPSolution) -> None:
    for i, row in enumerate(problem.eq_rows):
        if sum(a * x for a, x in zip(row, sol.primal)) != problem.rhs[i]:
            raise LPError(f"primal violates row {ROW_NAMES[i]}")
    if any(x < 0 for x in sol.primal):
        raise LPError("negative primal entry")
    rc = reduced_costs(problem, sol.dual)
    if any(d < 0 for d in rc):
        raise LPError("dual infeasible at reported optimum")
    if sum(b * y for b, y in zip(problem.rhs, sol.dual)) != sol.value:
        raise LPError("primal and dual values differ")
    if any(x and d for x, d in zip(sol.primal, rc)):
        raise LPError("complementary slackness fails")


def tight_support(problem: LPProblem, sol: LPSolution) -> list[int]:
    """Columns whose dual constraint holds with equality."""
    return [j for j, d in enumerate(reduced_costs(problem, sol.dual)) if d == 0]


def _rank(rows: list[list[mpq]]) -> int:
    mat = [list(r) for r in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(mat)) if mat[r][col]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = 1 / mat[rank][col]
        for r in range(len(mat)):
            if r != rank and mat[r][col]:
                f = mat[r][col] * inv
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[rank])]
        rank += 1
    return rank


def constraint_rank(columns: Sequence[Configuration], lam) -> int:
    """Rank of the four equality rows restricted to ``columns``."""
    if not columns:
        return 0
    _, rows = lp_rows(columns, _rational(lam))
    return _rank([list(r) for r in rows])
