"""Tight opening-angle bounds of rooted subtrees, computed leaves-first."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .angles import CLOSED, PATH, AngleBound, classify_case, combine, pure_path_star_bound
from .tree import RootedSubtree, Tree


@dataclass(frozen=True)
class TraceStep:
    node: str
    label: str
    bound: AngleBound

    def as_dict(self) -> dict:
        return {"node": self.node, "case": self.label, "bound": str(self.bound)}


@dataclass
class AngleAnnotation:
    """Per-node bounds plus the order in which nodes were finalised."""

    angle: dict[str, AngleBound] = field(default_factory=dict)
    processed: set[str] = field(default_factory=set)
    trace: list[TraceStep] = field(default_factory=list)
    visits: int = 0


def node_bound(degree: int, children: list[AngleBound]) -> tuple[str, AngleBound]:
    """Bound for a node of ``degree`` whose already-processed children carry ``children``."""
    if degree >= 5:
        return "deg5", CLOSED
    if all(b.is_path for b in children):
        return "paths", pure_path_star_bound(degree)
    case = classify_case(children)
    return case.label, combine(case)


def annotate_subtree(sub: RootedSubtree) -> tuple[AngleBound, AngleAnnotation]:
    """Run the leaves-first procedure on ``sub``; stops at the first closed node."""
    t = sub.tree
    nodes = sub.nodes
    ann = AngleAnnotation()
    pending: dict[str, int] = {}
    queue: deque[str] = deque()
    for v in sorted(nodes, key=t.index):
        if v == sub.root:
            continue
        d = t.degree(v)
        if d >= 5:
            step = TraceStep(v, "deg5" if d == 5 else "deg6+", CLOSED)
            ann.trace.append(step)
            return CLOSED, ann
        pending[v] = d - 1
        if d == 1:
            queue.append(v)

    while queue:
        v = queue.popleft()
        ann.visits += 1
        d = t.degree(v)
        kids = [ann.angle[u] for u in t.neighbors(v) if u in ann.processed]
        if d == 1:
            label, bound = "leaf", PATH
        else:
            label, bound = node_bound(d, kids)
        ann.trace.append(TraceStep(v, label, bound))
        if not bound.is_open:
            return CLOSED, ann
        ann.angle[v] = bound
        ann.processed.add(v)
        if v == sub.anchor:
            break
        for u in t.neighbors(v):
            if u in ann.processed or u == sub.root or u not in pending:
                continue
            pending[u] -= 1
            if pending[u] == 0:
                queue.append(u)
    return ann.angle[sub.anchor], ann


def get_open_angle(sub: RootedSubtree) -> AngleBound:
    """Tight upper bound on the opening angle of ``sub`` in any greedy drawing."""
    return annotate_subtree(sub)[0]


def open_angle(t: Tree, root: str, anchor: str | None = None) -> AngleBound:
    """Convenience wrapper: ``root`` must be a leaf unless ``anchor`` is given."""
    if anchor is None:
        if t.degree(root) != 1:
            raise ValueError(f"root {root!r} has degree {t.degree(root)}; pass an anchor")
        anchor = t.neighbors(root)[0]
    return get_open_angle(RootedSubtree(t, root, anchor))


def _chain_end(t: Tree, parent: str, v: str) -> tuple[str, str]:
    while t.degree(v) == 2:
        nxt = t.neighbors(v)[0] if t.neighbors(v)[0] != parent else t.neighbors(v)[1]
        parent, v = v, nxt
    return parent, v


_PATH_MARK = -1


def _order_from(t: Tree, parent: str, v: str) -> int | None:
    parent, v = _chain_end(t, parent, v)
    d = t.degree(v)
    if d == 1:
        return _PATH_MARK
    if d != 3:
        return None
    kids = [u for u in t.neighbors(v) if u != parent]
    orders = [_order_from(t, v, u) for u in kids]
    if None in orders:
        return None
    paths = orders.count(_PATH_MARK)
    if paths == 2:
        return 0
    if paths == 1:
        k = max(orders)
        return k + 1
    return None


def caterpillar_order(sub: RootedSubtree) -> int | None:
    """``k`` when ``sub`` is a subdivision of ``Q_k`` hanging from its root, else ``None``."""
    if sub.tree.max_degree() > 3:
        for v in sub.nodes:
            if v != sub.root and sub.tree.degree(v) > 3:
                return None
    k = _order_from(sub.tree, sub.root, sub.anchor)
    if k is None or k == _PATH_MARK:
        return None
    return k
