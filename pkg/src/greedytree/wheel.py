"""Convex n-gon angle assignments around a hub (n = 3, 4, 5).

A candidate polygon is described per corner-triangle ``i`` = (hub, v_{i-1}, v_i)
by its hub angle ``alpha_i`` and base angles ``beta_i`` (at v_i) and
``gamma_i`` (at v_{i-1}); the interior angle at corner ``v_i`` is
``beta_i + gamma_{i+1}``.  Closing the polygon requires the wheel condition
``prod sin(beta) == prod sin(gamma)``.

Decisions are tri-state.  Every ``YES`` carries an assignment that passes
:func:`verify_assignment`; every ``NO`` names the rule that fired.
"""

from __future__ import annotations

import enum
import itertools
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.optimize import brentq, linprog, minimize

from .angles import as_fraction, format_degrees
from .simplex import linprog_exact

log = logging.getLogger(__name__)

F = Fraction

TOL_OMEGA = 1e-9
EPS_MIN = 1e-6
SUM_TOL = 1e-9
CLOSURE_TOL = 1e-7


class Verdict(enum.Enum):
    YES = "yes"
    NO = "no"
    UNCERTAIN = "uncertain"

    @property
    def exit_code(self) -> int:
        return {Verdict.YES: 0, Verdict.NO: 1, Verdict.UNCERTAIN: 2}[self]


def _valid_phi(x: Fraction) -> bool:
    return 0 < x <= 60 or 90 < x <= 120 or x == 180


@dataclass(frozen=True)
class WheelInstance:
    phis: tuple[Fraction, ...]

    def __init__(self, phis: Sequence, check_range: bool = True):
        vals = tuple(sorted((as_fraction(p) for p in phis), reverse=True))
        if len(vals) not in (3, 4, 5):
            raise ValueError(f"wheel instances have 3..5 angles, got {len(vals)}")
        if check_range:
            bad = [format_degrees(v) for v in vals if not _valid_phi(v)]
            if bad:
                raise ValueError(f"angles outside (0,60] u (90,120] u {{180}}: {', '.join(bad)}")
        object.__setattr__(self, "phis", vals)

    @property
    def n(self) -> int:
        return len(self.phis)

    def __str__(self) -> str:
        return "{" + ", ".join(format_degrees(p) for p in self.phis) + "}"


@dataclass
class WheelAssignment:
    """Angles in degrees for one cyclic ordering; corner ``i`` carries ``phis[order[i]]``."""

    order: tuple[int, ...]
    beta: list[float]
    gamma: list[float]
    source: str = ""

    @property
    def n(self) -> int:
        return len(self.beta)

    @property
    def alpha(self) -> list[float]:
        return [180.0 - b - g for b, g in zip(self.beta, self.gamma)]

    @property
    def psi(self) -> list[float]:
        n = self.n
        return [self.beta[i] + self.gamma[(i + 1) % n] for i in range(n)]

    def margin(self, phis: Sequence) -> float:
        n = self.n
        al = self.alpha
        slack = []
        for i in range(n):
            slack.append(al[i] - self.beta[i])
            slack.append(al[i] - self.gamma[i])
            slack.append(float(phis[self.order[i]]) - self.beta[i] - self.gamma[(i + 1) % n])
        return min(slack)

    def omega(self) -> float:
        return evaluate_omega(self.beta, self.gamma)

    def as_dict(self, phis: Sequence | None = None) -> dict:
        out = {
            "order": list(self.order),
            "alpha": self.alpha,
            "beta": list(self.beta),
            "gamma": list(self.gamma),
            "omega": self.omega(),
            "source": self.source,
        }
        if phis is not None:
            out["eps"] = self.margin(phis)
            out["corner_bounds"] = [format_degrees(phis[k]) for k in self.order]
        return out


@dataclass(frozen=True)
class SimplexPoint:
    beta: tuple
    gamma: tuple
    order: tuple[int, ...]


@dataclass
class WheelDecision:
    verdict: Verdict
    proof: str
    assignment: WheelAssignment | None = None
    attempts: list[str] = field(default_factory=list)
    instance: WheelInstance | None = None

    def as_dict(self) -> dict:
        phis = self.instance.phis if self.instance else None
        return {
            "verdict": self.verdict.value,
            "proof": self.proof,
            "instance": [format_degrees(p) for p in phis] if phis else None,
            "assignment": self.assignment.as_dict(phis) if self.assignment else None,
            "attempts": list(self.attempts),
        }


# --------------------------------------------------------------------------
# basic evaluation


def _sind(x: float) -> float:
    return math.sin(math.radians(float(x)))


def evaluate_omega(beta, gamma=None) -> float:
    """``prod sin(beta_i) - prod sin(gamma_i)`` with angles in degrees."""
    if gamma is None:  # SimplexPoint
        beta, gamma = beta.beta, beta.gamma
    return math.prod(_sind(b) for b in beta) - math.prod(_sind(g) for g in gamma)


def cyclic_orderings(n: int) -> list[tuple[int, ...]]:
    """Cyclic orders of ``0..n-1`` up to rotation and reflection, lexicographic."""
    out = []
    for rest in itertools.permutations(range(1, n)):
        if n > 2 and rest[0] > rest[-1]:
            continue
        out.append((0,) + rest)
    return out


def in_simplex(p: SimplexPoint, phis: Sequence, strict: bool = False) -> bool:
    """Membership of ``p`` in the simplex of the given ordering (exact if inputs are)."""
    n = len(p.beta)
    b, g = p.beta, p.gamma

    def le(x, y):
        return x < y if strict else x <= y

    for i in range(n):
        if not (le(0, b[i]) and le(0, g[i])):
            return False
        if not le(b[i] + g[(i + 1) % n], phis[p.order[i]]):
            return False
        if not (le(b[i], 180 - b[i] - g[i]) and le(g[i], 180 - b[i] - g[i])):
            return False
    return sum(b) + sum(g) == (n - 2) * 180 if not isinstance(b[0], float) else abs(
        sum(b) + sum(g) - (n - 2) * 180
    ) <= SUM_TOL


# --------------------------------------------------------------------------
# linear relaxation


def _relaxation_rows(phis_in_order: Sequence[Fraction]):
    """Rows over ``(beta_0..beta_{n-1}, gamma_0..gamma_{n-1}, eps)``."""
    n = len(phis_in_order)
    width = 2 * n + 1
    A, b = [], []
    for i in range(n):
        r = [0] * width
        r[i], r[n + i], r[-1] = 2, 1, 1  # beta_i + eps <= alpha_i
        A.append(r)
        b.append(180)
        r = [0] * width
        r[i], r[n + i], r[-1] = 1, 2, 1  # gamma_i + eps <= alpha_i
        A.append(r)
        b.append(180)
        r = [0] * width
        r[i], r[n + (i + 1) % n], r[-1] = 1, 1, 1
        A.append(r)
        b.append(phis_in_order[i])
    r = [0] * width
    r[-1] = 1
    A.append(r)
    b.append(180)
    eq = [[1] * (2 * n) + [0]]
    beq = [(n - 2) * 180]
    return A, b, eq, beq


@dataclass
class RelaxationResult:
    order: tuple[int, ...]
    feasible: bool
    eps: Fraction | None


def lp_relaxation(inst: WheelInstance) -> list[RelaxationResult]:
    """Exact max-eps of the relaxation (wheel condition dropped) for each ordering."""
    out = []
    for order in cyclic_orderings(inst.n):
        res = _relaxation_exact(inst.phis, order)
        out.append(res)
    return out


@lru_cache(maxsize=4096)
def _relaxation_exact(phis: tuple[Fraction, ...], order: tuple[int, ...]) -> RelaxationResult:
    A, b, eq, beq = _relaxation_rows([phis[k] for k in order])
    c = [0] * (2 * len(order)) + [1]
    res = linprog_exact(c, A, b, eq, beq)
    if res.status != "optimal":
        return RelaxationResult(order, False, None)
    return RelaxationResult(order, res.value > 0, res.value)


def lp_relaxation_feasible(inst: WheelInstance) -> tuple[dict[tuple[int, ...], bool], bool]:
    per = {r.order: r.feasible for r in lp_relaxation(inst)}
    return per, any(per.values())


# --------------------------------------------------------------------------
# verification


@dataclass
class AssignmentReport:
    ok: bool
    eps: float
    omega: float
    closure: float
    failures: list[str]

    def as_dict(self) -> dict:
        return {"ok": self.ok, "eps": self.eps, "omega": self.omega, "closure": self.closure,
                "failures": list(self.failures)}


def polygon_from_assignment(a: WheelAssignment) -> tuple[np.ndarray, np.ndarray]:
    """Corner coordinates ``v_0..v_n`` (last one should return to ``v_0``) with the hub at the origin."""
    n = a.n
    al = a.alpha
    pts = [np.array([1.0, 0.0])]
    r, theta = 1.0, 0.0
    for k in range(1, n + 1):
        i = k % n
        # triangle i spans v_{i-1} -> v_i, |r v_i| / |r v_{i-1}| = sin(gamma_i) / sin(beta_i)
        r = r * _sind(a.gamma[i]) / _sind(a.beta[i])
        theta += math.radians(al[i])
        pts.append(np.array([r * math.cos(theta), r * math.sin(theta)]))
    return np.zeros(2), np.array(pts)


def verify_assignment(inst: WheelInstance | Sequence, a: WheelAssignment) -> AssignmentReport:
    phis = inst.phis if isinstance(inst, WheelInstance) else tuple(inst)
    n = a.n
    fails: list[str] = []
    if sorted(a.order) != list(range(n)) or len(phis) != n:
        return AssignmentReport(False, float("nan"), float("nan"), float("nan"), ["ordering mismatch"])
    eps = a.margin(phis)
    if not eps > 0:
        fails.append(f"margin eps = {eps:.3g} not positive")
    for i in range(n):
        if not (a.beta[i] > 0 and a.gamma[i] > 0):
            fails.append(f"triangle {i}: degenerate base angle")
    if abs(sum(a.alpha) - 360.0) > SUM_TOL:
        fails.append(f"hub angles sum to {sum(a.alpha)!r}")
    om = a.omega()
    if abs(om) > TOL_OMEGA:
        fails.append(f"wheel residual {om:.3g} exceeds {TOL_OMEGA}")
    closure = float("inf")
    if not any(f.endswith("degenerate base angle") for f in fails):
        hub, pts = polygon_from_assignment(a)
        scale = max(np.linalg.norm(p) for p in pts)
        closure = float(np.linalg.norm(pts[-1] - pts[0]) / scale)
        if closure > CLOSURE_TOL:
            fails.append(f"polygon does not close (relative gap {closure:.3g})")
        corners = pts[:-1]
        for i in range(n):
            p, q = corners[i - 1], corners[i]
            side = np.linalg.norm(q - p)
            if not (np.linalg.norm(p) < side and np.linalg.norm(q) < side):
                fails.append(f"star condition fails on side {i}")
        # convexity: consistent left turns
        for i in range(n):
            p, q, s = corners[i - 1], corners[i], corners[(i + 1) % n]
            cross = (q[0] - p[0]) * (s[1] - q[1]) - (q[1] - p[1]) * (s[0] - q[0])
            if cross <= 0:
                fails.append(f"polygon not convex at corner {i}")
    return AssignmentReport(not fails, eps, om, closure, fails)


# --------------------------------------------------------------------------
# certificate constructors


def _assignment(order, beta, gamma, source) -> WheelAssignment:
    return WheelAssignment(tuple(order), [float(x) for x in beta], [float(x) for x in gamma], source)


def half_angle_recipe(phis: Sequence, order: tuple[int, ...]) -> WheelAssignment | None:
    """Assignments with ``beta_i = gamma_{i+1} = psi_i / 2``.

    Such assignments satisfy the wheel condition identically, so only a linear
    program over the interior angles ``psi`` remains; it is solved exactly.
    """
    n = len(order)
    ph = [as_fraction(phis[k]) for k in order]
    # variables psi_0..psi_{n-1}, eps
    A, b = [], []
    for i in range(n):
        j = (i - 1) % n
        r = [F(0)] * (n + 1)
        r[i] += 1
        r[j] += F(1, 2)
        r[-1] = 1
        A.append(r)
        b.append(180)
        r = [F(0)] * (n + 1)
        r[j] += 1
        r[i] += F(1, 2)
        r[-1] = 1
        A.append(r)
        b.append(180)
        r = [F(0)] * (n + 1)
        r[i], r[-1] = 1, 1
        A.append(r)
        b.append(ph[i])
        r = [F(0)] * (n + 1)
        r[i], r[-1] = F(-1, 2), 1  # psi_i / 2 >= eps
        A.append(r)
        b.append(0)
    r = [F(0)] * (n + 1)
    r[-1] = 1
    A.append(r)
    b.append(60)
    res = linprog_exact([0] * n + [1], A, b, [[1] * n + [0]], [(n - 2) * 180])
    if res.status != "optimal" or res.value <= 0:
        return None
    psi = res.x[:n]
    # back off from the optimum vertex towards the centre to leave room on every constraint
    beta = [p / 2 for p in psi]
    gamma = [psi[(i - 1) % n] / 2 for i in range(n)]
    return _assignment(order, beta, gamma, "half-angle recipe")


def four_180_recipe(inst: WheelInstance) -> WheelAssignment | None:
    p = inst.phis
    delta = min(p[4], F(60)) / 32
    while delta > F(1, 10**6):
        beta = [8 * delta, 90 - 5 * delta] + [60 - delta] * 3
        gamma = [90 - 5 * delta, 8 * delta] + [60 - delta] * 3
        a = _assignment((4, 0, 1, 2, 3), beta, gamma, "four-180 recipe")
        if verify_assignment(inst, a).ok:
            return a
        delta /= 2
    return None


def three_180_recipe(inst: WheelInstance) -> WheelAssignment | None:
    p = inst.phis
    s = p[3] + p[4] - 120
    if s <= 0:
        return None
    psi3, psi4 = p[3] - s / 4, p[4] - s / 4
    delta = s / 32
    while delta > F(1, 10**6):
        S = psi3 + psi4
        beta = [90 - S / 4 + 2 * delta, psi3 / 2, 90 - psi3 / 4 - delta, psi4 / 2, 90 - psi4 / 4 - delta]
        gamma = [90 - S / 4 + 2 * delta, 90 - psi3 / 4 - delta, psi3 / 2, 90 - psi4 / 4 - delta, psi4 / 2]
        a = _assignment((0, 3, 1, 4, 2), beta, gamma, "three-180 recipe")
        if verify_assignment(inst, a).ok:
            return a
        delta /= 2
    return None


ORDER_1X180 = (4, 0, 3, 2, 1)


def _p1_point(phi1, phi2, phi3, phi4):
    lhs = 14 * phi1 + 12 * phi2 + 8 * phi3 + 15 * phi4 - 4500
    x = min(lhs / 7, phi4)
    d = phi4 - x
    beta = (
        d,
        90 - x / 2,
        phi3 + phi2 / 2 + phi1 / 4 + d / 8 - F(315, 2),
        phi2 + phi1 / 2 + d / 4 - 135,
        phi1 - 90 + d / 2,
    )
    gamma = (
        90 - d / 2,
        x,
        F(675, 4) - phi3 / 2 - phi2 / 4 - phi1 / 8 - d / 16,
        F(315, 2) - phi2 / 2 - phi1 / 4 - d / 8,
        135 - phi1 / 2 - d / 4,
    )
    return lhs, SimplexPoint(beta, gamma, ORDER_1X180)


def _p2_point(psi1, psi2, psi3, psi4, e):
    beta = (
        psi4,
        90 - e,
        psi3 + psi2 / 2 + psi1 / 4 + psi4 / 8 - F(315, 2),
        psi2 + psi1 / 2 + psi4 / 4 - 135,
        psi1 - 90 + psi4 / 2,
    )
    gamma = (
        90 - psi4 / 2 - e,
        F(0),
        F(675, 4) - psi3 / 2 - psi2 / 4 - psi1 / 8 - psi4 / 16 - e,
        F(315, 2) - psi2 / 2 - psi1 / 4 - psi4 / 8 - e,
        135 - psi1 / 2 - psi4 / 4 - e,
    )
    return SimplexPoint(beta, gamma, ORDER_1X180)


def sufficient_1x180(phis: Sequence) -> bool:
    """Sufficient condition for ``{180, phi1..phi4}`` with one small angle ``phi4 <= 60``."""
    phi1, phi2, phi3, phi4 = (as_fraction(p) for p in phis)
    if not (90 < phi3 <= phi2 <= phi1 <= 120 and 0 <= phi4 <= 60 and phi1 + phi2 + phi3 + phi4 > 360):
        raise ValueError("sufficient_1x180 requires 90 < phi3 <= phi2 <= phi1 <= 120, 0 <= phi4 <= 60, sum > 360")
    lhs, p1 = _p1_point(phi1, phi2, phi3, phi4)
    if lhs <= 0:
        return False
    full = (F(180), phi1, phi2, phi3, phi4)
    if not in_simplex(p1, full):
        return False
    return evaluate_omega(p1) < 0


def one_180_certificate(inst: WheelInstance) -> WheelAssignment | None:
    """Zero of the wheel residual on the segment between the two points of the 1x180 argument."""
    full = inst.phis
    phi1, phi2, phi3, phi4 = full[1:]
    lhs, p1 = _p1_point(phi1, phi2, phi3, phi4)
    t = lhs / 98
    for _ in range(30):
        psi = [phi1 - t, phi2 - t, phi3 - t, phi4 - t]
        e = (lhs - 49 * t) / 80
        if psi[2] > 90 and 0 < e < psi[3]:
            break
        t /= 2
    else:
        return None
    p2 = _p2_point(*psi, e)
    b1 = np.array([float(x) for x in p1.beta + p1.gamma])
    b2 = np.array([float(x) for x in p2.beta + p2.gamma])

    def om(lam):
        x = (1 - lam) * b1 + lam * b2
        return evaluate_omega(x[:5], x[5:])

    if not (om(0.0) < 0 < om(1.0)):
        return None
    lam = brentq(om, 0.0, 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    x = (1 - lam) * b1 + lam * b2
    a = WheelAssignment(ORDER_1X180, list(x[:5]), list(x[5:]), "one-180 segment root")
    return a if verify_assignment(inst, a).ok else None


# --------------------------------------------------------------------------
# numeric search


def _float_rows(phis_in_order: Sequence[float], margin: float):
    n = len(phis_in_order)
    A, b = [], []
    for i in range(n):
        r = np.zeros(2 * n)
        r[i], r[n + i] = 2, 1
        A.append(r)
        b.append(180 - margin)
        r = np.zeros(2 * n)
        r[i], r[n + i] = 1, 2
        A.append(r)
        b.append(180 - margin)
        r = np.zeros(2 * n)
        r[i], r[n + (i + 1) % n] = 1, 1
        A.append(r)
        b.append(float(phis_in_order[i]) - margin)
    for j in range(2 * n):
        r = np.zeros(2 * n)
        r[j] = -1
        A.append(r)
        b.append(-margin)
    return np.array(A), np.array(b), np.ones((1, 2 * n)), np.array([(n - 2) * 180.0])


def _max_margin(phis_in_order: Sequence[float]) -> float:
    n = len(phis_in_order)
    A, b, Aeq, beq = _float_rows(phis_in_order, 0.0)
    # append eps column: every inequality row gets +eps
    A2 = np.hstack([A, np.ones((A.shape[0], 1))])
    c = np.zeros(2 * n + 1)
    c[-1] = -1
    res = linprog(c, A_ub=A2, b_ub=b, A_eq=np.hstack([Aeq, [[0.0]]]), b_eq=beq,
                  bounds=[(None, None)] * (2 * n) + [(0, 90)], method="highs")
    return float(res.x[-1]) if res.status == 0 else 0.0


def _omega_vec(x: np.ndarray) -> float:
    n = len(x) // 2
    s = np.sin(np.radians(x))
    return float(np.prod(s[:n]) - np.prod(s[n:]))


def _omega_grad(x: np.ndarray) -> np.ndarray:
    n = len(x) // 2
    rad = np.radians(x)
    s, c = np.sin(rad), np.cos(rad)
    g = np.zeros_like(x)
    for half, sign in ((slice(0, n), 1.0), (slice(n, 2 * n), -1.0)):
        ss, cc = s[half], c[half]
        for k in range(n):
            others = np.prod(np.delete(ss, k))
            g[half.start + k] = sign * cc[k] * others * math.pi / 180
    return g


def _candidate_points(A, b, Aeq, beq) -> list[np.ndarray]:
    dim = A.shape[1]
    pts = []
    dirs = []
    for j in range(dim):
        e = np.zeros(dim)
        e[j] = 1
        dirs += [e, -e]
    n = dim // 2
    # push the residual directly: beta up / gamma down and the reverse
    d = np.concatenate([np.ones(n), -np.ones(n)])
    dirs += [d, -d]
    for c in dirs:
        res = linprog(-c, A_ub=A, b_ub=b, A_eq=Aeq, b_eq=beq, bounds=[(None, None)] * dim, method="highs")
        if res.status == 0:
            pts.append(res.x)
    return pts


def _polish(start: np.ndarray, sign: float, A, b, Aeq, beq) -> np.ndarray | None:
    cons = [
        {"type": "ineq", "fun": lambda x: b - A @ x, "jac": lambda x: -A},
        {"type": "eq", "fun": lambda x: Aeq @ x - beq, "jac": lambda x: Aeq},
    ]
    res = minimize(lambda x: sign * _omega_vec(x), start, jac=lambda x: sign * _omega_grad(x),
                   constraints=cons, method="SLSQP", options={"maxiter": 300, "ftol": 1e-14})
    x = res.x
    if np.all(A @ x <= b + 1e-9) and np.max(np.abs(Aeq @ x - beq)) < 1e-7:
        return x
    return None


def numeric_search(inst: WheelInstance | Sequence, order: tuple[int, ...]) -> WheelAssignment | None:
    """Look for an interior zero of the wheel residual for one ordering.

    Works inside the relaxation polytope shrunk by a margin, so that any
    segment between two of its points keeps that margin; a sign change of the
    residual along such a segment is bracketed and solved with Brent's method.
    Returns ``None`` when no sign change is found (which proves nothing).
    """
    phis = inst.phis if isinstance(inst, WheelInstance) else tuple(inst)
    ph = [float(phis[k]) for k in order]
    n = len(order)
    top = _max_margin(ph)
    if top <= 10 * EPS_MIN:
        return None
    for frac in (0.5, 0.125, 1 / 64, 1 / 1024):
        margin = top * frac
        if margin < 2 * EPS_MIN:
            break
        A, b, Aeq, beq = _float_rows(ph, margin)
        pts = _candidate_points(A, b, Aeq, beq)
        if not pts:
            continue
        vals = [_omega_vec(p) for p in pts]
        neg = min(range(len(pts)), key=lambda i: vals[i])
        pos = max(range(len(pts)), key=lambda i: vals[i])
        lo, hi = pts[neg], pts[pos]
        if not (vals[neg] < 0 < vals[pos]):
            centre = np.mean(pts, axis=0)
            if vals[neg] >= 0:
                cand = _polish(centre, 1.0, A, b, Aeq, beq)
                if cand is not None and _omega_vec(cand) < 0:
                    lo = cand
            if vals[pos] <= 0:
                cand = _polish(centre, -1.0, A, b, Aeq, beq)
                if cand is not None and _omega_vec(cand) > 0:
                    hi = cand
        if not (_omega_vec(lo) < 0 < _omega_vec(hi)):
            continue

        def along(lam, lo=lo, hi=hi):
            return _omega_vec((1 - lam) * lo + lam * hi)

        lam = brentq(along, 0.0, 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
        x = (1 - lam) * lo + lam * hi
        # re-impose the sum exactly on the last coordinate
        x[-1] += (n - 2) * 180.0 - x.sum()
        a = WheelAssignment(tuple(order), list(x[:n]), list(x[n:]), "numeric search")
        if verify_assignment(phis, a).ok and a.margin(phis) >= EPS_MIN:
            return a
    return None


def _threads() -> int:
    raw = os.environ.get("GREEDY_EMBED_THREADS", "1").strip() or "1"
    try:
        k = int(raw)
    except ValueError:
        return 1
    return (os.cpu_count() or 1) if k == 0 else max(1, k)


def search_orderings(phis: Sequence, orders: Sequence[tuple[int, ...]]) -> WheelAssignment | None:
    """First success in ``orders`` order; parallel runs still report that same one."""
    workers = min(_threads(), len(orders))
    if workers <= 1:
        for o in orders:
            a = numeric_search(phis, o)
            if a is not None:
                return a
        return None
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(lambda o: numeric_search(phis, o), orders))
    return next((a for a in results if a is not None), None)


def _one_180_applies(phis: Sequence) -> bool:
    try:
        return sufficient_1x180(phis)
    except ValueError:
        return False


def find_assignment(phis: Sequence) -> WheelAssignment | None:
    """Any verified assignment for ``phis`` (floats allowed); used by the embedder."""
    phis = tuple(sorted(phis, reverse=True))
    orders = cyclic_orderings(len(phis))
    inst = WheelInstance(phis, check_range=False)
    if inst.n == 5:
        full = sum(1 for x in inst.phis if x == 180)
        recipe = {4: four_180_recipe, 3: three_180_recipe, 1: one_180_certificate}.get(full)
        if recipe is not None and (full != 1 or _one_180_applies(inst.phis[1:])):
            a = _first_verified(inst, lambda: recipe(inst))
            if a is not None:
                return a
    for o in orders:
        try:
            a = half_angle_recipe([as_fraction(p) for p in phis], o)
        except ZeroDivisionError:
            a = None
        if a is not None and verify_assignment(phis, a).ok:
            return a
    return search_orderings(phis, orders)


# --------------------------------------------------------------------------
# decision


def _first_verified(inst: WheelInstance, *makers) -> WheelAssignment | None:
    for make in makers:
        a = make()
        if a is not None and verify_assignment(inst, a).ok:
            return a
    return None


def _half_angle_any(inst: WheelInstance) -> WheelAssignment | None:
    for o in cyclic_orderings(inst.n):
        a = half_angle_recipe(inst.phis, o)
        if a is not None and verify_assignment(inst, a).ok:
            return a
    return None


def _numeric_any(inst: WheelInstance, orders=None) -> WheelAssignment | None:
    return search_orderings(inst.phis, orders if orders is not None else cyclic_orderings(inst.n))


def decide_membership(inst: WheelInstance) -> WheelDecision:
    return _decide_cached(inst.phis)


@lru_cache(maxsize=4096)
def _decide_cached(phis: tuple[Fraction, ...]) -> WheelDecision:
    inst = WheelInstance(phis, check_range=False)
    n = inst.n
    p = inst.phis
    total = sum(p)

    def yes(proof, *makers):
        a = _first_verified(inst, *makers)
        if a is None:
            log.warning("no certificate constructed for %s (%s)", inst, proof)
        return WheelDecision(Verdict.YES, proof, a, instance=inst)

    if total <= (n - 2) * 180:
        return WheelDecision(Verdict.NO, f"angle sum {format_degrees(total)} <= {(n - 2) * 180}", instance=inst)
    if n == 3:
        return yes("P3: always", lambda: _half_angle_any(inst), lambda: _numeric_any(inst))
    if n == 4:
        return yes("P4: always", lambda: _half_angle_any(inst), lambda: _numeric_any(inst))
    if p[0] <= 120:
        return yes("P5: all angles <= 120", lambda: _half_angle_any(inst), lambda: _numeric_any(inst))
    if p[3] == 180:
        return yes("P5: four angles of 180", lambda: four_180_recipe(inst), lambda: _numeric_any(inst))
    if p[2] == 180:
        if p[3] + p[4] > 120:
            return yes("P5: three angles of 180, phi3 + phi4 > 120",
                       lambda: three_180_recipe(inst), lambda: _numeric_any(inst))
        return WheelDecision(Verdict.NO, "P5: three angles of 180 with phi3 + phi4 <= 120", instance=inst)
    if p[1] == 180:
        if p[2] + p[3] + p[4] > 240:
            return yes("P5: two angles of 180, phi2 + phi3 + phi4 > 240",
                       lambda: _half_angle_any(inst), lambda: _numeric_any(inst))
        return WheelDecision(Verdict.NO, "P5: two angles of 180 with phi2 + phi3 + phi4 <= 240", instance=inst)
    attempts = []
    if p[4] <= 60 and p[3] > 90:
        if sufficient_1x180(p[1:]):
            return yes("P5: one angle of 180, sufficient condition holds",
                       lambda: one_180_certificate(inst),
                       lambda: _numeric_any(inst, [ORDER_1X180]),
                       lambda: _numeric_any(inst))
        attempts.append("one-180 sufficient condition: not satisfied")
    per, feasible = lp_relaxation_feasible(inst)
    if not feasible:
        return WheelDecision(Verdict.NO, "LP infeasible for all orderings", attempts=attempts, instance=inst)
    attempts.append(f"LP relaxation feasible for {sum(per.values())} of {len(per)} orderings")
    orders = [o for o in cyclic_orderings(n) if per[o]]
    a = _half_angle_any(inst) or _numeric_any(inst, orders)
    if a is not None:
        return WheelDecision(Verdict.YES, f"verified assignment ({a.source})", a, attempts, inst)
    attempts.append("half-angle recipe: infeasible")
    attempts.append(f"numeric search: no sign change found on {len(orders)} orderings")
    return WheelDecision(Verdict.UNCERTAIN, "no proof either way", attempts=attempts, instance=inst)
