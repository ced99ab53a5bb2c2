"""Greedy-drawability decisions for trees.

:func:`decide` is the production path (linear-time leaves-inward sweep for
maximum degree 4, a wheel-membership question for a degree-5 hub).
:func:`tuple_negative_certificate` and :func:`binary_tree_characterize` are
independent brute-force checks used to cross-validate it.
"""

from __future__ import annotations

import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .angles import CLOSED, PATH, AngleBound, format_degrees
from .opening import TraceStep, annotate_subtree, caterpillar_order, node_bound
from .tree import RootedSubtree, Tree, centers
from .wheel import Verdict, WheelDecision, WheelInstance, decide_membership

log = logging.getLogger(__name__)

TUPLE_BUDGET = 30
HEAD_BUDGET = 24


@dataclass
class Decision:
    verdict: Verdict
    rule: str
    certificate: dict[str, Any] = field(default_factory=dict)
    trace: list[TraceStep] = field(default_factory=list)
    hub: str | None = None
    hub_bounds: dict[str, AngleBound] = field(default_factory=dict)
    wheel: WheelDecision | None = None

    @property
    def is_yes(self) -> bool:
        return self.verdict is Verdict.YES

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "rule": self.rule,
            "certificate": self.certificate,
            "hub": self.hub,
            "hub_bounds": {k: str(v) for k, v in self.hub_bounds.items()},
            "wheel": self.wheel.as_dict() if self.wheel else None,
            "trace": [s.as_dict() for s in self.trace],
        }


def _wheel_for(bounds: dict[str, AngleBound]) -> WheelDecision | None:
    if len(bounds) not in (3, 4, 5):
        return None
    return decide_membership(WheelInstance([b.value for b in bounds.values()]))


def _sum_rule(v: str, bounds: dict[str, AngleBound], trace, extra: dict | None = None) -> Decision:
    d = len(bounds)
    total = sum((b.value for b in bounds.values()), Fraction(0))
    threshold = (d - 2) * 180
    cert = {
        "node": v,
        "bounds": {u: str(b) for u, b in bounds.items()},
        "sum": format_degrees(total),
        "threshold": threshold,
    }
    if extra:
        cert.update(extra)
    if total > threshold:
        return Decision(Verdict.YES, "angle sum exceeds threshold", cert, trace, v, dict(bounds), _wheel_for(bounds))
    return Decision(Verdict.NO, "angle sum too small", cert, trace, v, dict(bounds))


def _decide_deg4(t: Tree) -> Decision:
    """Leaves-inward sweep; the first node that sees all (or all but one closed) neighbours decides."""
    angle: dict[str, AngleBound] = {}
    trace: list[TraceStep] = []
    queue: deque[str] = deque()
    done_count = {v: 0 for v in t.nodes}
    for v in t.nodes:
        if t.degree(v) == 1:
            angle[v] = PATH
            trace.append(TraceStep(v, "leaf", PATH))
    for v in t.nodes:
        if v not in angle:
            done_count[v] = sum(1 for u in t.neighbors(v) if u in angle)
            if done_count[v] >= t.degree(v) - 1:
                queue.append(v)
    while queue:
        v = queue.popleft()
        if v in angle:
            continue
        d = t.degree(v)
        done = [u for u in t.neighbors(v) if u in angle]
        if len(done) == d:
            return _sum_rule(v, {u: angle[u] for u in done}, trace)
        label, bound = node_bound(d, [angle[u] for u in done])
        if not bound.is_open:
            (w,) = [u for u in t.neighbors(v) if u not in angle]
            trace.append(TraceStep(v, label, CLOSED))
            other, sub_ann = annotate_subtree(RootedSubtree(t, v, w))
            trace.extend(sub_ann.trace)
            if not other.is_open:
                return Decision(
                    Verdict.NO,
                    "two closed angles",
                    {"edge": [v, w], "case": label},
                    trace,
                    v,
                )
            bounds = {u: angle[u] for u in done}
            bounds[w] = other
            return _sum_rule(v, bounds, trace, {"closed_side": label})
        angle[v] = bound
        trace.append(TraceStep(v, label, bound))
        for u in t.neighbors(v):
            if u in angle:
                continue
            done_count[u] += 1
            if done_count[u] == t.degree(u) - 1 or done_count[u] == t.degree(u):
                queue.append(u)
    # only reachable for one- and two-node trees
    return Decision(Verdict.YES, "trivial tree", {"nodes": len(t)}, trace)


def _decide_deg5(t: Tree, r: str) -> Decision:
    bounds: dict[str, AngleBound] = {}
    trace: list[TraceStep] = []
    for u in t.neighbors(r):
        b, ann = annotate_subtree(RootedSubtree(t, r, u))
        trace.extend(ann.trace)
        bounds[u] = b
    shown = {u: str(b) for u, b in bounds.items()}
    closed = [u for u, b in bounds.items() if not b.is_open]
    if closed:
        return Decision(Verdict.NO, "closed subtree at degree-5 hub",
                        {"node": r, "closed": closed, "bounds": shown}, trace, r, bounds)
    total = sum(b.value for b in bounds.values())
    if total <= 540:
        return Decision(Verdict.NO, "angle sum too small",
                        {"node": r, "bounds": shown, "sum": format_degrees(total), "threshold": 540},
                        trace, r, bounds)
    wd = decide_membership(WheelInstance([b.value for b in bounds.values()]))
    cert = {"node": r, "bounds": shown, "sum": format_degrees(total), "wheel_proof": wd.proof}
    return Decision(wd.verdict, "wheel membership", cert, trace, r, bounds, wd)


def decide(t: Tree) -> Decision:
    """Tri-state answer to whether ``t`` has a greedy drawing in the plane."""
    deg6 = [v for v in t.nodes if t.degree(v) >= 6]
    if deg6:
        return Decision(Verdict.NO, "degree at least 6", {"nodes": deg6, "degree": t.degree(deg6[0])})
    deg5 = [v for v in t.nodes if t.degree(v) == 5]
    if len(deg5) >= 2:
        return Decision(Verdict.NO, "two degree-5 nodes", {"nodes": deg5})
    if deg5:
        return _decide_deg5(t, deg5[0])
    return _decide_deg4(t)


# --------------------------------------------------------------------------
# independent tuples


@dataclass(frozen=True)
class TupleCounts:
    n3: int
    n4: int
    n5: int
    heads: tuple[str, ...] = ()

    @property
    def score(self) -> int:
        return self.n3 + 2 * self.n4 + 3 * self.n5

    def as_dict(self) -> dict:
        return {"n3": self.n3, "n4": self.n4, "n5": self.n5, "score": self.score, "heads": list(self.heads)}


class _PathIndex:
    """Constant-time 'is w on the path between u and v' via all-pairs distances."""

    def __init__(self, t: Tree, nodes):
        self.dist = {}
        for s in nodes:
            seen = {s: 0}
            q = deque([s])
            while q:
                x = q.popleft()
                for y in t.neighbors(x):
                    if y not in seen:
                        seen[y] = seen[x] + 1
                        q.append(y)
            self.dist[s] = seen

    def between(self, w: str, u: str, v: str) -> bool:
        d = self.dist
        return d[u][w] + d[w][v] == d[u][v]


def _compatible(idx: _PathIndex, chosen: list[str], new: str) -> bool:
    # every head must be a leaf of the subtree spanned by the set
    for a, b in itertools.combinations(chosen, 2):
        if idx.between(new, a, b):
            return False
    for a in chosen:
        for b in chosen:
            if a != b and idx.between(a, new, b):
                return False
    return True


def max_independent_tuples(t: Tree, degrees=(3, 4, 5), exact: bool | None = None) -> TupleCounts:
    """Maximum ``n3 + 2 n4 + 3 n5`` over pairwise independent irreducible tuples.

    A k-tuple is a node of degree k with one neighbour left out; two tuples are
    independent iff each head's left-out edge leads towards the other.  A set is
    pairwise independent iff no head lies on the path between two others.
    """
    heads = [v for v in t.nodes if t.degree(v) in degrees]
    weight = {v: t.degree(v) - 2 for v in heads}
    if exact is None:
        exact = len(t) <= TUPLE_BUDGET or len(heads) <= HEAD_BUDGET
    idx = _PathIndex(t, heads)
    # far-from-centre heads first: they are the likeliest leaves of the spanned subtree
    mid = centers(t)[0]
    depth = _PathIndex(t, [mid]).dist[mid]
    heads.sort(key=lambda v: (-weight[v], -depth[v], t.index(v)))
    best: list[str] = []
    best_score = 0

    if not exact:
        chosen: list[str] = []
        for v in heads:
            if _compatible(idx, chosen, v):
                chosen.append(v)
        best = chosen
    else:
        suffix = [0] * (len(heads) + 1)
        for i in range(len(heads) - 1, -1, -1):
            suffix[i] = suffix[i + 1] + weight[heads[i]]

        def rec(i: int, chosen: list[str], score: int) -> None:
            nonlocal best, best_score
            if score > best_score:
                best, best_score = list(chosen), score
            if i == len(heads) or score + suffix[i] <= best_score:
                return
            v = heads[i]
            if _compatible(idx, chosen, v):
                chosen.append(v)
                rec(i + 1, chosen, score + weight[v])
                chosen.pop()
            rec(i + 1, chosen, score)

        rec(0, [], 0)
    counts = {k: sum(1 for v in best if t.degree(v) == k) for k in (3, 4, 5)}
    return TupleCounts(counts[3], counts[4], counts[5], tuple(sorted(best, key=t.index)))


def tuple_negative_certificate(t: Tree) -> TupleCounts | None:
    """Counts proving non-drawability (score at least 6), or ``None``."""
    c = max_independent_tuples(t)
    return c if c.score >= 6 else None


# --------------------------------------------------------------------------
# binary trees


@dataclass(frozen=True)
class CrabClassification:
    found: bool
    subtree_orders: tuple[int, ...] = ()
    hubs: tuple[str, ...] = ()

    def as_dict(self) -> dict:
        return {"found": self.found, "subtree_orders": list(self.subtree_orders), "hubs": list(self.hubs)}


def _is_path_branch(t: Tree, parent: str, v: str) -> bool:
    """Whether the branch entering ``v`` from ``parent`` is a path hanging from ``parent``."""
    while t.degree(v) == 2:
        a, b = t.neighbors(v)
        parent, v = v, (b if a == parent else a)
    return t.degree(v) == 1


def _walk_link(t: Tree, parent: str, v: str) -> tuple[str, str]:
    """Follow a hub link; nodes on it may carry pendant paths, which keep the triple count."""
    while True:
        onward = [u for u in t.neighbors(v) if u != parent]
        if len(onward) == 1:
            parent, v = v, onward[0]
            continue
        if len(onward) == 2:
            rest = [u for u in onward if not _is_path_branch(t, v, u)]
            if len(rest) == 1:
                parent, v = v, rest[0]
                continue
        return parent, v


def _crab_orders(t: Tree) -> list[tuple[tuple[int, ...], tuple[str, ...]]]:
    out = []
    for e0 in t.nodes:
        if t.degree(e0) != 3:
            continue
        nb = t.neighbors(e0)
        for k in range(3):
            tail = caterpillar_order(RootedSubtree(t, e0, nb[k]))
            if tail is None:
                continue
            orders = [tail]
            hubs = [e0]
            ok = True
            for j in range(3):
                if j == k:
                    continue
                parent, hub = _walk_link(t, e0, nb[j])
                if t.degree(hub) != 3:
                    ok = False
                    break
                hubs.append(hub)
                for u in t.neighbors(hub):
                    if u == parent:
                        continue
                    o = caterpillar_order(RootedSubtree(t, hub, u))
                    if o is None:
                        ok = False
                        break
                    orders.append(o)
                if not ok:
                    break
            if ok:
                out.append((tuple(sorted(orders)), tuple(hubs)))
    return out


def _crab_pattern_ok(orders: tuple[int, ...]) -> bool:
    s = sorted(orders)
    return s[2] == 0 or (s[0] == s[1] == 0 and s[2] == s[3] == 1)


def classify_five_crab(t: Tree) -> CrabClassification:
    """Five-crab decomposition with a drawable order pattern, else any decomposition, else none."""
    found = _crab_orders(t)
    for orders, hubs in found:
        if _crab_pattern_ok(orders):
            return CrabClassification(True, orders, hubs)
    if found:
        orders, hubs = found[0]
        return CrabClassification(True, orders, hubs)
    return CrabClassification(False)


def binary_tree_characterize(t: Tree) -> Decision:
    """Forbidden-structure answer for maximum degree 3 (brute force, small trees only)."""
    if t.max_degree() > 3:
        raise ValueError("binary_tree_characterize needs maximum degree 3")
    if len(t) > 2 * TUPLE_BUDGET:
        raise ValueError(f"tree has {len(t)} nodes; brute-force budget is {2 * TUPLE_BUDGET}")
    counts = max_independent_tuples(t, degrees=(3,), exact=True)
    n3 = counts.n3
    cert: dict[str, Any] = {"n3": n3}
    if n3 <= 4:
        return Decision(Verdict.YES, "at most four independent triples", cert)
    if n3 >= 6:
        return Decision(Verdict.NO, "six or more independent triples", cert)
    crab = classify_five_crab(t)
    cert["crab"] = crab.as_dict()
    if crab.found and _crab_pattern_ok(crab.subtree_orders):
        return Decision(Verdict.YES, "five-crab with drawable orders", cert)
    return Decision(Verdict.NO, "five triples without a drawable five-crab", cert)
