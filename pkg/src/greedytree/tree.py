"""Undirected labelled trees: parsing, serialization, rooted views and generators."""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import networkx as nx

MAX_ENUMERATION_NODES = 20


class TreeError(ValueError):
    """Malformed tree input. ``line`` is the 1-based source line when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _edge_key(u: str, v: str) -> tuple[str, str]:
    return (u, v) if u <= v else (v, u)


class Tree:
    """An immutable tree on string node ids.

    Nodes are indexed in order of first appearance; that order is used for
    every deterministic tie-break in the package.
    """

    __slots__ = ("_nodes", "_index", "_adj", "_edges")

    def __init__(self, nodes: Iterable[str], edges: Iterable[tuple[str, str]]):
        order: list[str] = []
        index: dict[str, int] = {}
        for v in nodes:
            if v not in index:
                index[v] = len(order)
                order.append(v)
        adj: dict[str, list[str]] = {v: [] for v in order}
        seen: set[tuple[str, str]] = set()
        for u, v in edges:
            for w in (u, v):
                if w not in index:
                    index[w] = len(order)
                    order.append(w)
                    adj[w] = []
            if u == v:
                raise TreeError(f"self-loop at {u!r}")
            key = _edge_key(u, v)
            if key in seen:
                raise TreeError(f"duplicate edge {u} {v}")
            seen.add(key)
            adj[u].append(v)
            adj[v].append(u)
        if order and len(seen) != len(order) - 1:
            if len(seen) >= len(order):
                raise TreeError("cycle detected")
            raise TreeError("graph is disconnected")
        if order and len(_reach(adj, order[0])) != len(order):
            raise TreeError("graph is disconnected")
        self._nodes = tuple(order)
        self._index = index
        self._adj = {v: tuple(sorted(ns, key=index.__getitem__)) for v, ns in adj.items()}
        self._edges = frozenset(seen)

    @property
    def nodes(self) -> tuple[str, ...]:
        return self._nodes

    @property
    def edges(self) -> frozenset[tuple[str, str]]:
        """Edges as lexicographically ordered pairs."""
        return self._edges

    def __len__(self) -> int:
        return len(self._nodes)

    def __contains__(self, v: object) -> bool:
        return v in self._index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tree):
            return NotImplemented
        return set(self._nodes) == set(other._nodes) and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((frozenset(self._nodes), self._edges))

    def __repr__(self) -> str:
        return f"Tree(n={len(self)}, edges={sorted(self._edges)})"

    def index(self, v: str) -> int:
        return self._index[v]

    def neighbors(self, v: str) -> tuple[str, ...]:
        return self._adj[v]

    def degree(self, v: str) -> int:
        return len(self._adj[v])

    def has_edge(self, u: str, v: str) -> bool:
        return _edge_key(u, v) in self._edges

    def max_degree(self) -> int:
        return max((len(ns) for ns in self._adj.values()), default=0)

    def degree_profile(self) -> "DegreeProfile":
        degs = [len(ns) for ns in self._adj.values()]
        return DegreeProfile(
            max_degree=max(degs, default=0),
            count_deg5=sum(1 for d in degs if d == 5),
            count_deg_ge6=sum(1 for d in degs if d >= 6),
        )

    def component(self, start: str, removed_edge: tuple[str, str]) -> set[str]:
        """Nodes reachable from ``start`` without crossing ``removed_edge``."""
        a, b = removed_edge
        seen = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in self._adj[x]:
                if y in seen or {x, y} == {a, b}:
                    continue
                seen.add(y)
                queue.append(y)
        return seen

    def path(self, s: str, t: str) -> list[str]:
        """The unique s-t path, endpoints included."""
        parent = {s: s}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            if x == t:
                break
            for y in self._adj[x]:
                if y not in parent:
                    parent[y] = x
                    queue.append(y)
        out = [t]
        while out[-1] != s:
            out.append(parent[out[-1]])
        return out[::-1]

    def induced(self, keep: Iterable[str]) -> "Tree":
        keep = set(keep)
        nodes = [v for v in self._nodes if v in keep]
        edges = [(u, v) for u, v in sorted(self._edges, key=self._edge_order) if u in keep and v in keep]
        return Tree(nodes, edges)

    def _edge_order(self, e: tuple[str, str]) -> tuple[int, int]:
        i, j = self._index[e[0]], self._index[e[1]]
        return (min(i, j), max(i, j))

    def ordered_edges(self) -> list[tuple[str, str]]:
        """Edges in a deterministic BFS order from the first node."""
        if not self._nodes:
            return []
        out = []
        seen = {self._nodes[0]}
        queue = deque([self._nodes[0]])
        while queue:
            x = queue.popleft()
            for y in self._adj[x]:
                if y not in seen:
                    seen.add(y)
                    out.append((x, y))
                    queue.append(y)
        return out

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self._nodes)
        g.add_edges_from(self._edges)
        return g

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[str, str]]) -> "Tree":
        return cls((), list(edges))

    @classmethod
    def single(cls, v: str = "0") -> "Tree":
        return cls([v], [])


def _reach(adj: dict[str, list[str]], start: str) -> set[str]:
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


@dataclass(frozen=True)
class DegreeProfile:
    max_degree: int
    count_deg5: int
    count_deg_ge6: int


@dataclass(frozen=True)
class RootedSubtree:
    """``T_{rv}^v + rv`` rooted at ``root``; ``anchor`` is the root's only neighbour."""

    tree: Tree
    root: str
    anchor: str
    nodes: frozenset[str] = field(default=frozenset(), compare=False)

    def __post_init__(self) -> None:
        if not self.tree.has_edge(self.root, self.anchor):
            raise TreeError(f"no edge {self.root} {self.anchor}")
        if not self.nodes:
            side = self.tree.component(self.anchor, (self.root, self.anchor))
            object.__setattr__(self, "nodes", frozenset(side | {self.root}))

    def children(self, v: str, parent: str) -> list[str]:
        return [u for u in self.tree.neighbors(v) if u != parent]

    def degree(self, v: str) -> int:
        """Degree inside the subtree (the root always has degree 1)."""
        if v == self.root:
            return 1
        return self.tree.degree(v)

    def as_tree(self) -> Tree:
        return self.tree.induced(self.nodes)


def rooted(t: Tree, root: str, anchor: str) -> RootedSubtree:
    return RootedSubtree(t, root, anchor)


# --------------------------------------------------------------------------
# parsing / serialization


def parse_tree(text: str) -> Tree:
    """Parse an edge-list document: one ``u v`` per line, ``#`` comments."""
    nodes: list[str] = []
    edges: list[tuple[str, str]] = []
    seen: set[tuple[str, str]] = set()
    parent: dict[str, str] = {}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) == 1:
            v = parts[0]
            if v not in parent:
                parent[v] = v
                nodes.append(v)
            continue
        if len(parts) != 2:
            raise TreeError(f"expected 'u v', got {raw.strip()!r}", lineno)
        u, v = parts
        if u == v:
            raise TreeError(f"self-loop at {u!r}", lineno)
        key = _edge_key(u, v)
        if key in seen:
            raise TreeError(f"duplicate edge {u} {v}", lineno)
        for w in (u, v):
            if w not in parent:
                parent[w] = w
                nodes.append(w)
        ru, rv = find(u), find(v)
        if ru == rv:
            raise TreeError(f"cycle detected at edge {u} {v}", lineno)
        parent[ru] = rv
        seen.add(key)
        edges.append((u, v))
    if not nodes:
        raise TreeError("empty tree")
    roots = {find(v) for v in nodes}
    if len(roots) > 1:
        raise TreeError(f"graph is disconnected ({len(roots)} components)")
    return Tree(nodes, edges)


def read_tree(path) -> Tree:
    with open(path, encoding="utf-8") as fh:
        return parse_tree(fh.read())


def serialize_tree(t: Tree) -> str:
    """Edge list sorted lexicographically; a lone node is written on its own."""
    if len(t) == 1:
        return f"{t.nodes[0]}\n"
    return "".join(f"{u} {v}\n" for u, v in sorted(t.edges))


# --------------------------------------------------------------------------
# structural operations


def contract_degree2(t: Tree, keep: Iterable[str] = ()) -> Tree:
    """Splice out every degree-2 node not listed in ``keep``."""
    keep = set(keep)
    if len(t) <= 2:
        return t
    survivors = [v for v in t.nodes if t.degree(v) != 2 or v in keep]
    if not survivors:
        # a cycle-free graph always has leaves, so this only guards odd input
        return t
    alive = set(survivors)
    edges = []
    for s in survivors:
        for nb in t.neighbors(s):
            prev, cur = s, nb
            while cur not in alive:
                nxt = [w for w in t.neighbors(cur) if w != prev][0]
                prev, cur = cur, nxt
            if t.index(s) < t.index(cur):
                edges.append((s, cur))
    return Tree(survivors, edges)


def split_at_edge(t: Tree, u: str, v: str) -> tuple[RootedSubtree, RootedSubtree]:
    """Return ``(T_uv^u + uv rooted at v, T_uv^v + uv rooted at u)``."""
    if not t.has_edge(u, v):
        raise TreeError(f"edge {u} {v} not present")
    return RootedSubtree(t, v, u), RootedSubtree(t, u, v)


def subdivide_edge(t: Tree, u: str, v: str, new: str | None = None) -> Tree:
    if not t.has_edge(u, v):
        raise TreeError(f"edge {u} {v} not present")
    if new is None:
        new = f"{u}~{v}"
        while new in t:
            new += "'"
    edges = [e for e in t.ordered_edges() if set(e) != {u, v}]
    edges += [(u, new), (new, v)]
    return Tree(list(t.nodes) + [new], edges)


def subdivide_all(t: Tree) -> Tree:
    """Subdivide every edge exactly once."""
    nodes = list(t.nodes)
    edges = []
    for u, v in t.ordered_edges():
        m = f"{u}~{v}"
        while m in t:
            m += "'"
        nodes.append(m)
        edges += [(u, m), (m, v)]
    return Tree(nodes, edges)


# --------------------------------------------------------------------------
# canonical forms and enumeration


def _rooted_code(t: Tree, v: str, parent: str | None) -> str:
    # iterative AHU: post-order over an explicit stack
    codes: dict[str, str] = {}
    stack = [(v, parent, False)]
    while stack:
        x, p, done = stack.pop()
        kids = [y for y in t.neighbors(x) if y != p]
        if done:
            codes[x] = "(" + "".join(sorted(codes[y] for y in kids)) + ")"
        else:
            stack.append((x, p, True))
            stack.extend((y, x, False) for y in kids)
    return codes[v]


def rooted_canonical(t: Tree, root: str, anchor: str | None = None) -> str:
    """AHU code of ``t`` hung from ``root``; with ``anchor`` only that branch."""
    if anchor is None:
        return _rooted_code(t, root, None)
    return "(" + _rooted_code(t, anchor, root) + ")"


def centers(t: Tree) -> list[str]:
    if len(t) <= 2:
        return list(t.nodes)
    deg = {v: t.degree(v) for v in t.nodes}
    layer = [v for v in t.nodes if deg[v] == 1]
    remaining = len(t)
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for x in layer:
            for y in t.neighbors(x):
                deg[y] -= 1
                if deg[y] == 1:
                    nxt.append(y)
        layer = nxt
    return layer


def canonical_form(t: Tree) -> str:
    """Isomorphism invariant: smallest AHU code over the tree's centres."""
    return min(_rooted_code(t, c, None) for c in centers(t))


def from_networkx(g: nx.Graph) -> Tree:
    order = sorted(g.nodes)
    name = {v: str(i) for i, v in enumerate(order)}
    edges = sorted((name[u], name[v]) if order.index(u) < order.index(v) else (name[v], name[u]) for u, v in g.edges)
    edges.sort(key=lambda e: (int(e[0]), int(e[1])))
    return Tree([name[v] for v in order], edges)


def enumerate_trees(n: int, max_degree: int | None = None) -> Iterator[Tree]:
    """All non-isomorphic trees on ``n`` nodes with degree at most ``max_degree``.

    Candidates come from networkx's WROM generator; output order is by
    canonical code so it does not depend on the generator's internals.
    """
    if not 1 <= n <= MAX_ENUMERATION_NODES:
        raise ValueError(f"n must be in 1..{MAX_ENUMERATION_NODES}, got {n}")
    if n == 1:
        yield Tree.single()
        return
    found = []
    for g in nx.nonisomorphic_trees(n):
        if max_degree is not None and max(d for _, d in g.degree) > max_degree:
            continue
        t = from_networkx(g)
        found.append((canonical_form(t), t))
    found.sort(key=lambda p: p[0])
    for _, t in found:
        yield t


def random_tree(n: int, rng: random.Random, max_degree: int | None = None, prefix: str = "v") -> Tree:
    """Random recursive tree: each new node joins a uniformly chosen eligible node."""
    names = [f"{prefix}{i}" for i in range(n)]
    deg = [0] * n
    edges = []
    for i in range(1, n):
        choices = [j for j in range(i) if max_degree is None or deg[j] < max_degree]
        j = rng.choice(choices)
        deg[i] += 1
        deg[j] += 1
        edges.append((names[j], names[i]))
    return Tree(names, edges)


# --------------------------------------------------------------------------
# named families used throughout the tests and the CLI


def path_tree(n: int, prefix: str = "p") -> Tree:
    names = [f"{prefix}{i}" for i in range(n)]
    return Tree(names, list(zip(names, names[1:])))


def star(m: int, center: str = "r") -> Tree:
    return Tree([center], [(center, f"x{i}") for i in range(1, m + 1)])


def complete_binary_tree(depth: int) -> Tree:
    """Complete binary tree with ``2**(depth+1) - 1`` nodes, heap-numbered."""
    n = 2 ** (depth + 1) - 1
    return Tree([str(i) for i in range(1, n + 1)], [(str(i // 2), str(i)) for i in range(2, n + 1)])


def qk_edges(k: int, prefix: str = "", root: str = "b0") -> list[tuple[str, str]]:
    """Edges of the caterpillar ``Q_k`` hanging from ``root``.

    ``b1 .. b_{k+1}`` form the spine; each ``b_i`` carries a leaf ``c_i`` and the
    spine ends in the leaf ``b_{k+2}``.
    """
    b = [root] + [f"{prefix}b{i}" for i in range(1, k + 3)]
    edges = [(b[i], b[i + 1]) for i in range(k + 2)]
    edges += [(b[i], f"{prefix}c{i}") for i in range(1, k + 2)]
    return edges


def qk_tree(k: int) -> Tree:
    return Tree(["b0"], qk_edges(k))


def five_crab(orders: Iterable[int], spacer: int = 0) -> Tree:
    """The five-crab with Q-caterpillars of the given orders.

    Hubs ``a0`` (carrying T1, T2) and ``c0`` (T3, T4) are joined to ``e0`` (T5),
    each link subdivided ``spacer`` times.
    """
    k1, k2, k3, k4, k5 = list(orders)
    edges: list[tuple[str, str]] = []
    for hub, tail in (("a0", "p"), ("c0", "s")):
        prev = "e0"
        for i in range(1, spacer + 1):
            edges.append((prev, f"{tail}{i}"))
            prev = f"{tail}{i}"
        edges.append((prev, hub))
    edges += qk_edges(k1, "T1", "a0") + qk_edges(k2, "T2", "a0")
    edges += qk_edges(k3, "T3", "c0") + qk_edges(k4, "T4", "c0")
    edges += qk_edges(k5, "T5", "e0")
    return Tree(["e0"], edges)


def subdivide_random(t: Tree, rng: random.Random, times: int) -> Tree:
    for i in range(times):
        u, v = rng.choice(sorted(t.edges))
        t = subdivide_edge(t, u, v, new=f"s{i}_{u}_{v}")
    return t


def part_edges(spec, root: str, prefix: str) -> list[tuple[str, str]]:
    """Edges of a rooted part hanging from ``root``.

    ``spec`` is ``"leaf"``, ``"path<m>"`` (m edges), ``"q<k>"`` or a list of
    specs, meaning one child node whose own children are those parts.
    """
    if isinstance(spec, str):
        if spec == "leaf":
            return [(root, f"{prefix}l")]
        if spec.startswith("path"):
            m = int(spec[4:] or 1)
            names = [root] + [f"{prefix}p{i}" for i in range(1, m + 1)]
            return list(zip(names, names[1:]))
        if spec.startswith("q"):
            return qk_edges(int(spec[1:]), prefix, root)
        raise ValueError(f"unknown part {spec!r}")
    child = f"{prefix}n"
    edges = [(root, child)]
    for i, sub in enumerate(spec):
        edges += part_edges(sub, child, f"{prefix}{i}")
    return edges


def hub_tree(parts, hub: str = "h") -> Tree:
    """A hub node with one rooted part per entry of ``parts``."""
    edges: list[tuple[str, str]] = []
    for i, spec in enumerate(parts):
        edges += part_edges(spec, hub, f"t{i}")
    return Tree([hub], edges)


HUB_EXAMPLES = {
    "a": ["leaf", "q1", "q1", "q1", ["leaf", "leaf", "leaf"]],
    "b": ["leaf", "q0", "q1", "q3", ["leaf", "leaf", "leaf"]],
    "c": ["leaf", "q0", "q0", "q0", ["leaf", "leaf", ["leaf", "leaf", "leaf"]]],
}
