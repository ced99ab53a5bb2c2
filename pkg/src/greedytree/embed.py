"""Explicit greedy drawings: construction and verification.

Construction works bottom-up on *gadgets*.  A gadget is a drawing of a rooted
subtree, with its root at the origin, plus an open cone of directions (centred
on +x) from which the rest of the tree may see it.  At a branching node the
child gadgets are shrunk, rotated and placed by a small nonlinear program that
maximises the cone of the combined gadget; at the hub the child gadgets are
placed at the corners of a convex polygon taken from a wheel assignment.

Most placement constraints hold exactly however large the child gadgets are
(directions inside a convex cone stay inside under positive combinations), so
they only need a tiny angular margin; constraints that depend on the size of a
sibling gadget get a larger margin that the shrink factor must beat.
Every drawing is checked by :func:`verify` before it is returned.
"""

from __future__ import annotations

import io
import itertools
import logging
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize

from .decide import Decision, decide
from .tree import RootedSubtree, Tree
from .wheel import Verdict, find_assignment, polygon_from_assignment

log = logging.getLogger(__name__)

SLACK_TOL = 1e-9
MAX_RETRIES = 6
MAX_DEPTH = 12


# --------------------------------------------------------------------------
# drawings and verification


@dataclass
class Drawing:
    tree: Tree
    coords: dict[str, tuple[float, float]]

    def __post_init__(self) -> None:
        missing = [v for v in self.tree.nodes if v not in self.coords]
        if missing:
            raise ValueError(f"drawing misses nodes: {', '.join(missing[:5])}")

    def array(self) -> np.ndarray:
        return np.array([self.coords[v] for v in self.tree.nodes], dtype=float)

    def transformed(self, scale: float = 1.0, angle: float = 0.0, shift=(0.0, 0.0)) -> "Drawing":
        c, s = math.cos(angle), math.sin(angle)
        out = {}
        for v, (x, y) in self.coords.items():
            out[v] = (scale * (c * x - s * y) + shift[0], scale * (s * x + c * y) + shift[1])
        return Drawing(self.tree, out)

    def coincident_pairs(self) -> list[tuple[str, str]]:
        """Pairs of nodes drawn at exactly the same point."""
        xy = self.array()
        d = np.linalg.norm(xy[:, None, :] - xy[None, :, :], axis=-1)
        iu = np.triu_indices(len(xy), 1)
        bad = np.nonzero(d[iu] == 0)[0]
        names = self.tree.nodes
        return [(names[iu[0][k]], names[iu[1][k]]) for k in bad]


def write_drawing(d: Drawing) -> str:
    buf = io.StringIO()
    for v in d.tree.nodes:
        x, y = d.coords[v]
        buf.write(f"{v} {x:.17g} {y:.17g}\n")
    return buf.getvalue()


def parse_drawing(text: str, tree: Tree) -> Drawing:
    """Read ``id x y`` lines; every node of ``tree`` must be placed exactly once."""
    coords = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected 'id x y'")
        v = parts[0]
        if v not in tree:
            raise ValueError(f"line {lineno}: unknown node {v!r}")
        if v in coords:
            raise ValueError(f"line {lineno}: node {v!r} placed twice")
        try:
            x, y = float(parts[1]), float(parts[2])
        except ValueError:
            raise ValueError(f"line {lineno}: bad coordinate") from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ValueError(f"line {lineno}: coordinates must be finite")
        coords[v] = (x, y)
    return Drawing(tree, coords)


@dataclass
class VerifyReport:
    greedy_pairwise: bool
    greedy_bisector: bool
    worst_margin: float
    violations: list[tuple] = field(default_factory=list)
    pairwise_margin: float = math.inf
    bisector_margin: float = math.inf

    @property
    def ok(self) -> bool:
        return self.greedy_pairwise and self.greedy_bisector

    def as_dict(self) -> dict:
        return {
            "greedy_pairwise": self.greedy_pairwise,
            "greedy_bisector": self.greedy_bisector,
            "worst_margin": self.worst_margin,
            "pairwise_margin": self.pairwise_margin,
            "bisector_margin": self.bisector_margin,
            "violations": [list(v) for v in self.violations[:50]],
            "violation_count": len(self.violations),
        }


def _next_hops(t: Tree) -> np.ndarray:
    """``hop[s, t]`` = index of the neighbour of ``s`` on the path to ``t``."""
    n = len(t)
    idx = {v: i for i, v in enumerate(t.nodes)}
    adj = [[idx[u] for u in t.neighbors(v)] for v in t.nodes]
    hop = np.full((n, n), -1, dtype=int)
    for target in range(n):
        seen = [False] * n
        seen[target] = True
        stack = [target]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    hop[y, target] = x
                    stack.append(y)
    return hop


def _threads() -> int:
    raw = os.environ.get("GREEDY_EMBED_THREADS", "1").strip() or "1"
    try:
        k = int(raw)
    except ValueError:
        return 1
    return (os.cpu_count() or 1) if k == 0 else max(1, k)


def verify(d: Drawing, tol: float = SLACK_TOL) -> VerifyReport:
    """Check greediness twice: by next-hop distances and by edge bisectors.

    Both checks measure a difference of distances, ``|st| - |nt|`` for a
    source ``s``, target ``t`` and next hop ``n``, and ``|wv| - |wu|`` for a
    node ``w`` on ``u``'s side of edge ``uv``, relative to the length of the
    edge involved.  Anything at or below ``tol`` counts as a violation.
    """
    t = d.tree
    n = len(t)
    names = t.nodes
    xy = d.array()
    violations: list[tuple] = []
    coincident = d.coincident_pairs()
    for a, b in coincident:
        violations.append(("coincident", a, b))
    if n <= 1:
        return VerifyReport(True, True, math.inf)
    dist = np.linalg.norm(xy[:, None, :] - xy[None, :, :], axis=-1)

    # pairwise: the next hop must be strictly closer to the target
    hop = _next_hops(t)
    rows = np.arange(n)

    def pair_block(s_range):
        worst = math.inf
        bad = []
        for s in s_range:
            h = hop[s].copy()
            mask = rows != s
            tgt = rows[mask]
            nh = h[mask]
            edge = dist[s, nh]
            # |st| - |nt| without cancellation: (s - n).(s + n - 2t) / (|st| + |nt|)
            ds = xy[s] - xy[nh]
            far = xy[s] + xy[nh] - 2 * xy[tgt]
            with np.errstate(divide="ignore", invalid="ignore"):
                slack = np.einsum("ij,ij->i", ds, far) / (dist[s, tgt] + dist[nh, tgt]) / edge
            slack = np.where(np.isnan(slack), -math.inf, slack)
            if slack.size:
                worst = min(worst, float(slack.min()))
                for k in np.nonzero(slack <= tol)[0]:
                    bad.append(("pair", names[s], names[tgt[k]], names[nh[k]]))
        return worst, bad

    workers = min(_threads(), n)
    chunks = [range(i, n, workers) for i in range(workers)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(pair_block, chunks))
    else:
        parts = [pair_block(chunks[0])]
    pair_margin = min(p[0] for p in parts)
    pair_bad = [b for p in parts for b in p[1]]

    # bisector: every node on u's side of edge uv lies strictly in u's half-plane
    idx = {v: i for i, v in enumerate(names)}
    bis_margin = math.inf
    bis_bad = []
    for a, b in t.ordered_edges():
        for u, v in ((a, b), (b, a)):
            side = np.array([idx[w] for w in t.component(u, (u, v))])
            iu, iv = idx[u], idx[v]
            e = xy[iv] - xy[iu]
            length = float(np.hypot(*e))
            # |wv| - |wu| without cancellation: (v - u).(v + u - 2w) / (|wv| + |wu|)
            with np.errstate(divide="ignore", invalid="ignore"):
                rel = ((xy[iv] + xy[iu] - 2 * xy[side]) @ e) / (dist[side, iv] + dist[side, iu]) / length
            rel = np.where(np.isnan(rel), -math.inf, rel)
            bis_margin = min(bis_margin, float(rel.min()))
            for k in np.nonzero(rel <= tol)[0]:
                bis_bad.append(("bisector", u, v, names[side[k]]))
    violations += pair_bad + bis_bad
    return VerifyReport(
        greedy_pairwise=not pair_bad and not coincident,
        greedy_bisector=not bis_bad and not coincident,
        worst_margin=min(pair_margin, bis_margin),
        violations=violations,
        pairwise_margin=pair_margin,
        bisector_margin=bis_margin,
    )




# --------------------------------------------------------------------------
# gadgets


@dataclass
class Gadget:
    """Drawing of a rooted subtree whose cone of free directions is centred on +x.

    Coordinates are stored relative to an *anchor*: the node inside the finest
    (most shrunk) part of the gadget.  Composing gadgets this way keeps the
    finest structure near the origin of the final drawing, where floating
    point has the most resolution.  The gadget is normalised to radius 1
    around its root.
    """

    nodes: list[str]
    xy: np.ndarray
    root: np.ndarray
    half: float  # cone half-width in radians; pi for a single node
    exact: bool  # placement constraints against it hold regardless of its size
    fineness: float = math.inf  # scale of its finest part; inf for a single node

    @property
    def is_point(self) -> bool:
        return len(self.nodes) == 1


def _point(v: str) -> Gadget:
    return Gadget([v], np.zeros((1, 2)), np.zeros(2), math.pi, True)


@dataclass(frozen=True)
class Margins:
    """Construction margins.

    ``size`` (radians, or relative distance) guards the constraints whose
    validity depends on how small the child gadgets are; ``exact`` guards the
    others.  Child gadgets are drawn at ``shrink`` times their distance from
    the parent, never larger than the size margin itself.
    """

    size: float
    limit: float  # upper bound on the shrink factor

    @property
    def exact(self) -> float:
        return EXACT_PER_SIZE * self.size

    @property
    def shrink(self) -> float:
        return min(self.limit, SHRINK_PER_MARGIN * self.size)


def _wrap(a):
    return np.arctan2(np.sin(a), np.cos(a))


class _LayoutProblem:
    """Placement constraints for the children of one node, vectorised over a batch.

    Variables are ``z = [W, theta_1..m, c_1..m, log L_2..m]``: cone width,
    child directions, child cone centres and child distances (``L_1 = 1``).
    Every constraint is written as ``g(z) >= 0``.
    """

    def __init__(self, halves, exact, points, mu_e, mu_s):
        m = self.m = len(halves)
        h = np.array(halves, dtype=float)
        self.mu_e = mu_e
        nonpt = [j for j in range(m) if not points[j]]
        self.nonpt = np.array(nonpt, dtype=int)
        # the child's cone must contain the whole cone and the direction back to the parent
        self.hn = h[self.nonpt] - np.array([mu_e if exact[j] else mu_s for j in nonpt])
        # ... and the directions to every sibling
        pairs = [(j, k) for j in nonpt for k in range(m) if k != j]
        self.sj = np.array([p[0] for p in pairs], dtype=int)
        self.sk = np.array([p[1] for p in pairs], dtype=int)
        self.slim = np.array([h[j] - (mu_e if exact[j] and points[k] else mu_s) for j, k in pairs])
        # sibling k stays on the parent's side of edge v u_j
        dpairs = [(j, k) for j in range(m) for k in range(m) if j != k]
        self.dj = np.array([p[0] for p in dpairs], dtype=int)
        self.dk = np.array([p[1] for p in dpairs], dtype=int)
        self.dmu = np.array([mu_e if points[k] else mu_s for _, k in dpairs])

    def __call__(self, Z: np.ndarray) -> np.ndarray:
        m = self.m
        B = Z.shape[0]
        W = Z[:, :1]
        th = Z[:, 1 : 1 + m]
        c = Z[:, 1 + m : 1 + 2 * m]
        L = np.exp(np.concatenate([np.zeros((B, 1)), Z[:, 1 + 2 * m :]], axis=1))
        ux, uy = L * np.cos(th), L * np.sin(th)
        # edge v -> u_j must point away from every direction in the cone
        back = _wrap(th + math.pi)
        lim = math.pi / 2 - self.mu_e - W / 2
        parts = [lim - back, lim + back]
        if len(self.nonpt):
            dc = _wrap(c[:, self.nonpt])
            base = self.hn - W / 2
            dv = _wrap(back[:, self.nonpt] - c[:, self.nonpt])
            parts += [base - dc, base + dc, self.hn - dv, self.hn + dv]
        if len(self.sj):
            vx = ux[:, self.sk] - ux[:, self.sj]
            vy = uy[:, self.sk] - uy[:, self.sj]
            dk = _wrap(np.arctan2(vy, vx) - c[:, self.sj])
            parts += [self.slim - dk, self.slim + dk]
        gap = np.hypot(ux[:, self.dk] - ux[:, self.dj], uy[:, self.dk] - uy[:, self.dj])
        gap -= np.hypot(ux[:, self.dk], uy[:, self.dk])
        parts.append(gap - self.dmu * (L[:, self.dj] + L[:, self.dk]) / 2)
        return np.concatenate(parts, axis=1)

    def fun(self, z: np.ndarray) -> np.ndarray:
        return self(z[None, :])[0]

    def jac(self, z: np.ndarray, step: float = 1e-8) -> np.ndarray:
        Z = z[None, :] + step * np.eye(len(z))
        return ((self(Z) - self(z[None, :])) / step).T


def _layout_starts(m: int):
    starts = []
    for spread in (80.0, 60.0, 40.0, 20.0):
        ths = np.radians(180.0 + np.linspace(-spread, spread, m))
        for cmode in ("zero", "back", "mid"):
            for ell in (np.zeros(m - 1), np.linspace(0, 1.0, m)[1:], np.linspace(0, -1.0, m)[1:],
                        np.linspace(0, -2.0, m)[1:]):
                if cmode == "zero":
                    cs = np.zeros(m)
                elif cmode == "back":
                    cs = _wrap(ths + math.pi)
                else:
                    cs = _wrap(ths + math.pi) / 2
                starts.append(np.concatenate([[math.radians(1.0)], ths, cs, ell]))
    return starts


@lru_cache(maxsize=4096)
def _solve_layout(halves: tuple, exact: tuple, points: tuple, mu_e: float, mu_s: float):
    """Widest cone for children with the given half-widths: ``(W, theta, c, log L)`` or None."""
    m = len(halves)
    bounds = [(0.0, math.pi)] + [(math.pi / 2, 3 * math.pi / 2)] * m + [(-math.pi, math.pi)] * m
    bounds += [(math.log(0.02), math.log(50.0))] * (m - 1)

    prob = _LayoutProblem(halves, exact, points, mu_e, mu_s)
    # SLSQP ends marginally infeasible; aim slightly inside the true region
    padded = _LayoutProblem(halves, exact, points, mu_e + 1e-9, mu_s + 1e-9)
    grad = np.zeros(2 * m + m)
    grad[0] = -1.0
    best = _best_layout(_layout_starts(m), prob, padded, grad, bounds)
    if best is None:
        best = _best_layout(_fallback_starts(m), prob, padded, grad, bounds)
    return best


def _fallback_starts(m: int):
    """Every assignment of children to angular slots, then seeded random starts."""
    for z0 in _layout_starts(m):
        ths = z0[1 : 1 + m]
        for perm in itertools.permutations(range(m)):
            if perm != tuple(range(m)):
                z = z0.copy()
                z[1 : 1 + m] = ths[list(perm)]
                yield z
    rng = np.random.default_rng(0)
    for _ in range(200):
        yield np.concatenate([[0.0], rng.uniform(math.pi / 2, 3 * math.pi / 2, m),
                              rng.uniform(-math.pi, math.pi, m), rng.uniform(-2.0, 2.0, m - 1)])


def _best_layout(starts, prob: _LayoutProblem, padded: _LayoutProblem, grad, bounds):
    best = None
    cons = [{"type": "ineq", "fun": padded.fun, "jac": padded.jac}]
    for z0 in starts:
        with warnings.catch_warnings():
            # SLSQP clips steps to the bounds and says so; that is harmless here
            warnings.simplefilter("ignore", RuntimeWarning)
            res = minimize(lambda z: -z[0], z0, jac=lambda z: grad, bounds=bounds,
                           constraints=cons, method="SLSQP", options={"maxiter": 500, "ftol": 1e-15})
        z = res.x.copy()
        if prob.fun(z).min() < 0:
            # give back a little width if the solver ended marginally infeasible
            for _ in range(200):
                z[0] -= max(1e-12, abs(prob.fun(z).min()) * 4)
                if z[0] <= 0 or prob.fun(z).min() >= 0:
                    break
        if z[0] <= 0 or prob.fun(z).min() < 0:
            continue
        if best is None or z[0] > best[0] + 1e-14:
            best = z
    return best


def _walk(t: Tree, parent: str, v: str) -> tuple[list[str], str, str]:
    """Follow degree-2 nodes from ``v``; returns (chain, node before end, end)."""
    chain = []
    while t.degree(v) == 2:
        chain.append(v)
        a, b = t.neighbors(v)
        parent, v = v, (b if a == parent else a)
    return chain, parent, v


def _chain_start(positions: np.ndarray, j: int) -> float:
    """Fraction of the segment towards ``u_j`` where subdivision nodes may start.

    A node at fraction ``t`` routes towards sibling ``u_k`` through the parent
    only if ``t > 2 u_j.u_k / |u_j|^2``; the sibling separation constraint
    keeps that threshold below 1, and we start halfway between it and 1.
    """
    uj = positions[j]
    tau = 0.0
    for k, uk in enumerate(positions):
        if k != j:
            tau = max(tau, 2 * float(uk @ uj) / float(uj @ uj))
    return max(0.5, (1.0 + tau) / 2)


def _rot(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


@dataclass
class _Slot:
    chain: list[str]
    gadget: Gadget
    pos: np.ndarray
    centre: float
    scale: float = 0.0  # gadget radius in the parent frame
    start: float = 1.0  # first subdivision node at start * pos


def _compose(v: str, slots: list[_Slot]) -> tuple[list[str], np.ndarray, np.ndarray, float, float]:
    """Assemble children around ``v`` (at the local origin).

    Returns node names, coordinates relative to the new anchor, the position
    of ``v`` relative to the anchor, the anchor's fineness, and the radius.
    """
    finest = None
    for j, sl in enumerate(slots):
        f = sl.scale * sl.gadget.fineness
        if math.isfinite(f) and (finest is None or f < finest[0]):
            finest = (f, j)
    if finest is None:
        anchor_local = np.zeros(2)
        fineness = 1.0
    else:
        sl = slots[finest[1]]
        anchor_local = sl.pos + sl.scale * (_rot(sl.centre) @ (-sl.gadget.root))
        fineness = finest[0]
    names = [v]
    rel = [-anchor_local]
    radius = 0.0
    for j, sl in enumerate(slots):
        k = len(sl.chain)
        for i, name in enumerate(sl.chain):
            frac = sl.start + (1.0 - sl.start) * i / k
            names.append(name)
            rel.append(sl.pos * frac - anchor_local)
        R = _rot(sl.centre)
        g = sl.gadget
        if finest is not None and j == finest[1]:
            part = sl.scale * (g.xy @ R.T)
        else:
            part = (sl.pos - anchor_local) + sl.scale * ((g.xy - g.root) @ R.T)
        names.extend(g.nodes)
        rel.extend(part)
        radius = max(radius, float(np.linalg.norm(sl.pos)) + sl.scale)
    return names, np.array(rel), -anchor_local, fineness, radius


class EmbedError(RuntimeError):
    pass


def _is_spider(t: Tree, parent: str, v: str) -> bool:
    for u in t.neighbors(v):
        if u != parent and t.degree(_walk(t, v, u)[2]) != 1:
            return False
    return True


def _child_slots(t: Tree, parent: str | None, v: str, mg: Margins, depth: int) -> list[_Slot]:
    slots = []
    for u in t.neighbors(v):
        if u == parent:
            continue
        chain, before, end = _walk(t, v, u)
        slots.append(_Slot(chain, build_gadget(t, before, end, mg, depth + 1), np.zeros(2), 0.0))
    return slots


def _finish_slots(slots: list[_Slot], shrink: float) -> None:
    pos = np.array([sl.pos for sl in slots])
    for j, sl in enumerate(slots):
        L = float(np.linalg.norm(sl.pos))
        if sl.chain:
            sl.start = _chain_start(pos, j)
            gap = (1.0 - sl.start) / (len(sl.chain) + 1)
            sl.scale = shrink * L * min(1.0, 2 * gap)
        else:
            sl.scale = shrink * L


def build_gadget(t: Tree, parent: str, v: str, mg: Margins, depth: int = 0) -> Gadget:
    """Gadget for the subtree hanging from ``v`` away from ``parent``."""
    if depth > MAX_DEPTH:
        raise EmbedError(f"branching depth exceeds {MAX_DEPTH}")
    slots = _child_slots(t, parent, v, mg, depth)
    if not slots:
        return _point(v)
    if len(slots) > 3:
        raise EmbedError(f"node {v} has degree {len(slots) + 1} below the hub")
    slots.sort(key=lambda sl: (sl.gadget.is_point, -sl.gadget.half))
    m = len(slots)
    if m == 1:
        half = slots[0].gadget.half
        W = min(2 * half, math.pi) - 2 * mg.exact
        z = np.array([W, math.pi, 0.0])
    else:
        z = _solve_layout(tuple(sl.gadget.half for sl in slots), tuple(sl.gadget.exact for sl in slots),
                          tuple(sl.gadget.is_point for sl in slots), mg.exact, mg.size)
        if z is None:
            raise EmbedError(f"no layout with an open cone at {v}")
        W = float(z[0])
    if W <= 0:
        raise EmbedError(f"no open cone at {v}")
    th = z[1 : 1 + m]
    cs = z[1 + m : 1 + 2 * m]
    L = np.exp(np.concatenate([[0.0], z[1 + 2 * m :]]))
    for j, sl in enumerate(slots):
        sl.pos = np.array([L[j] * math.cos(th[j]), L[j] * math.sin(th[j])])
        sl.centre = float(cs[j])
    _finish_slots(slots, mg.shrink)
    names, rel, root, fineness, radius = _compose(v, slots)
    exact = _is_spider(t, parent, v) or W / 2 >= math.pi / 4
    return Gadget(names, rel / radius, root / radius, W / 2, exact, fineness / radius)


# --------------------------------------------------------------------------
# hub placement


def _hub_widths(slots: list[_Slot]) -> list[float]:
    return [min(180.0, math.degrees(2 * sl.gadget.half)) for sl in slots]


def _place_hub(t: Tree, hub: str, mg: Margins) -> dict[str, tuple[float, float]] | None:
    slots = _child_slots(t, None, hub, mg, 0)
    d = len(slots)
    if d == 0:
        return {hub: (0.0, 0.0)}
    shrink = mg.shrink
    if d == 1:
        slots[0].pos, slots[0].centre = np.array([1.0, 0.0]), math.pi
    elif d == 2:
        slots[0].pos, slots[0].centre = np.array([1.0, 0.0]), math.pi
        slots[1].pos, slots[1].centre = np.array([-1.0, 0.0]), 0.0
    else:
        widths = _hub_widths(slots)
        ranked = sorted(range(d), key=lambda j: (-widths[j], j))
        a = find_assignment([widths[j] for j in ranked])
        if a is None:
            log.info("no wheel assignment for hub widths %s", widths)
            return None
        _, poly = polygon_from_assignment(a)
        corners = poly[:-1] / np.linalg.norm(poly[:-1], axis=1).max()
        for i in range(d):
            sl = slots[ranked[a.order[i]]]
            here = corners[i]
            e1 = corners[i - 1] - here
            e2 = corners[(i + 1) % d] - here
            bis = e1 / np.linalg.norm(e1) + e2 / np.linalg.norm(e2)
            sl.pos = here
            sl.centre = math.atan2(bis[1], bis[0])
        eps = math.radians(a.margin(sorted(widths, reverse=True)))
        shrink = min(shrink, math.sin(eps))
    _finish_slots(slots, shrink)
    names, rel, _, _, _ = _compose(hub, slots)
    return {n: (float(p[0]), float(p[1])) for n, p in zip(names, rel)}


def _pick_hub(t: Tree, decision: Decision) -> str:
    deg5 = [v for v in t.nodes if t.degree(v) == 5]
    if deg5:
        return deg5[0]
    if decision.hub is not None:
        return decision.hub
    return max(t.nodes, key=t.degree)


# size-dependent margins in degrees, loosest first
SIZE_MARGINS = (2.0, 0.5, 0.1, 0.02, 0.004, 0.001)
SHRINK_PER_MARGIN = 1.0
EXACT_PER_SIZE = 1 / 20


def _margins(mu_size_deg: float, shrink: float) -> Margins:
    return Margins(math.radians(mu_size_deg), shrink)


def embed(t: Tree, decision: Decision | None = None, shrink: float = 1e-2) -> Drawing | None:
    """A verified greedy drawing of ``t``, or ``None`` when the construction fails.

    Margins are tightened along :data:`SIZE_MARGINS`; for each margin the
    child scale starts at ``shrink`` (capped by the margin) and is quartered
    after every failed verification, at most :data:`MAX_RETRIES` times.
    """
    if not 0 < shrink <= 0.1:
        raise ValueError("shrink must lie in (0, 0.1]")
    if decision is None:
        decision = decide(t)
    if decision.verdict is not Verdict.YES:
        raise ValueError(f"embed needs a Yes decision, got {decision.verdict.value}")
    if len(t) == 1:
        return Drawing(t, {t.nodes[0]: (0.0, 0.0)})
    hub = _pick_hub(t, decision)
    for mu in SIZE_MARGINS:
        s = shrink
        for attempt in range(MAX_RETRIES + 1):
            try:
                coords = _place_hub(t, hub, _margins(mu, s))
            except EmbedError as exc:
                log.info("margin %g: %s", mu, exc)
                break
            if coords is None:
                break  # the wheel at the hub has no solution at this margin
            dr = Drawing(t, coords)
            rep = verify(dr)
            if rep.ok:
                return dr
            log.info("margin %g, retry %d, shrink %.3g: %d violations, worst %.3g",
                     mu, attempt, s, len(rep.violations), rep.worst_margin)
            s /= 4
    return None


def embed_rooted(sub: RootedSubtree, shrink: float = 1e-2, margin_deg: float = 0.1
                 ) -> tuple[Drawing, float]:
    """Standalone drawing of ``sub``; its root sits far out on the cone axis.

    Returns the drawing and the planned cone width in degrees.
    """
    g = build_gadget(sub.tree, sub.root, sub.anchor, _margins(margin_deg, shrink))
    coords = {n: (float(p[0]), float(p[1])) for n, p in zip(g.nodes, g.xy)}
    coords[sub.root] = (float(g.root[0]) + 10.0, float(g.root[1]))
    return Drawing(sub.as_tree(), coords), math.degrees(2 * g.half)


def opening_cone(d: Drawing, sub: RootedSubtree) -> float:
    """Width in degrees of the directions making an obtuse angle with every edge below the root edge."""
    t = d.tree
    depth = {sub.root: 0}
    stack = [sub.root]
    while stack:
        x = stack.pop()
        for y in t.neighbors(x):
            if y not in depth:
                depth[y] = depth[x] + 1
                stack.append(y)
    dirs = []
    for a, b in t.ordered_edges():
        if sub.root in (a, b):
            continue
        if depth[a] > depth[b]:
            a, b = b, a
        dv = np.subtract(d.coords[b], d.coords[a])
        dirs.append(math.atan2(dv[1], dv[0]))
    if not dirs:
        return 180.0
    angs = np.sort(np.mod(dirs, 2 * math.pi))
    gaps = np.diff(np.concatenate([angs, [angs[0] + 2 * math.pi]]))
    spread = 2 * math.pi - gaps.max()
    return max(0.0, 180.0 - math.degrees(spread))
