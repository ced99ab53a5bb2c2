"""Small dense two-phase simplex over :class:`fractions.Fraction`.

Solves ``maximize c.x  s.t.  A_ub x <= b_ub,  A_eq x == b_eq,  x >= 0`` exactly.
Bland's rule guarantees termination; problem sizes here are a dozen
variables, so the dense tableau is the simplest thing that works.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

F = Fraction


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: list[Fraction] | None = None
    value: Fraction | None = None

    @property
    def feasible(self) -> bool:
        return self.status != "infeasible"


def _pivot(tab: list[list[Fraction]], basis: list[int], row: int, col: int) -> None:
    piv = tab[row][col]
    tab[row] = [a / piv for a in tab[row]]
    prow = tab[row]
    for i, r in enumerate(tab):
        if i != row and r[col] != 0:
            f = r[col]
            tab[i] = [a - f * b for a, b in zip(r, prow)]
    basis[row] = col


def _run(tab: list[list[Fraction]], basis: list[int], ncols: int, allowed: int) -> str:
    """Maximise the objective held in the last row (stored as reduced costs)."""
    m = len(tab) - 1
    while True:
        obj = tab[-1]
        col = next((j for j in range(allowed) if obj[j] < 0), None)
        if col is None:
            return "optimal"
        best = None
        for i in range(m):
            a = tab[i][col]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded"
        _pivot(tab, basis, best[1], col)


def linprog_exact(
    c: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
) -> LPResult:
    n = len(c)
    rows: list[tuple[list[Fraction], Fraction, bool]] = []
    for a, b in zip(A_ub, b_ub):
        rows.append(([F(x) for x in a], F(b), True))
    for a, b in zip(A_eq, b_eq):
        rows.append(([F(x) for x in a], F(b), False))
    m = len(rows)
    n_slack = sum(1 for r in rows if r[2])
    # columns: x (n) | slacks | artificials (m) | rhs
    width = n + n_slack + m + 1
    tab: list[list[Fraction]] = []
    basis: list[int] = []
    s = 0
    for i, (a, b, is_ub) in enumerate(rows):
        row = a + [F(0)] * (n_slack + m) + [b]
        if is_ub:
            row[n + s] = F(1)
            s += 1
        if b < 0:
            row = [-x for x in row]
        row[n + n_slack + i] = F(1)
        tab.append(row)
        basis.append(n + n_slack + i)

    # phase 1: maximise -sum(artificials)
    obj = [F(0)] * width
    for j in range(n + n_slack, n + n_slack + m):
        obj[j] = F(1)
    for r in tab:
        obj = [o - x for o, x in zip(obj, r)]
    tab.append(obj)
    _run(tab, basis, width, n + n_slack + m)
    if tab[-1][-1] != 0:
        return LPResult("infeasible")
    # drive artificials out of the basis where possible
    for i, bcol in enumerate(basis):
        if bcol >= n + n_slack:
            col = next((j for j in range(n + n_slack) if tab[i][j] != 0), None)
            if col is not None:
                _pivot(tab, basis, i, col)
    keep = [i for i, bcol in enumerate(basis) if bcol < n + n_slack]
    tab = [tab[i] for i in keep]
    basis = [basis[i] for i in keep]
    tab = [r[: n + n_slack] + [r[-1]] for r in tab]

    # phase 2
    obj = [-F(x) for x in c] + [F(0)] * n_slack + [F(0)]
    for i, bcol in enumerate(basis):
        if obj[bcol] != 0:
            f = obj[bcol]
            obj = [o - f * x for o, x in zip(obj, tab[i])]
    tab.append(obj)
    status = _run(tab, basis, n + n_slack + 1, n + n_slack)
    if status == "unbounded":
        return LPResult("unbounded")
    x = [F(0)] * (n + n_slack)
    for i, bcol in enumerate(basis):
        x[bcol] = tab[i][-1]
    value = sum((F(ci) * xi for ci, xi in zip(c, x[:n])), F(0))
    return LPResult("optimal", x[:n], value)
