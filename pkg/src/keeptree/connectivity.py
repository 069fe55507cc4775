"""Vertex/edge connectivity predicates, cuts, and minimum-length disjoint fans.

Everything runs on small explicit flow networks. For vertex problems each host
vertex ``v`` becomes an arc ``in(v) -> out(v)`` of capacity one.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .graph import Graph, GraphError, remove_vertices


class _Net:
    """Residual network with parallel arc arrays."""

    __slots__ = ("head", "cap", "cost", "out")

    def __init__(self, size: int):
        self.head: list[int] = []
        self.cap: list[int] = []
        self.cost: list[int] = []
        self.out: list[list[int]] = [[] for _ in range(size)]

    def arc(self, a: int, b: int, cap: int, cost: int = 0) -> None:
        # arc i and its residual twin i ^ 1
        self.out[a].append(len(self.head))
        self.head.append(b)
        self.cap.append(cap)
        self.cost.append(cost)
        self.out[b].append(len(self.head))
        self.head.append(a)
        self.cap.append(0)
        self.cost.append(-cost)

    def augment_bfs(self, s: int, t: int) -> bool:
        prev = [-1] * len(self.out)
        prev[s] = -2
        dq = deque([s])
        head, cap, out = self.head, self.cap, self.out
        while dq:
            a = dq.popleft()
            for i in out[a]:
                b = head[i]
                if cap[i] > 0 and prev[b] == -1:
                    prev[b] = i
                    if b == t:
                        while b != s:
                            i = prev[b]
                            cap[i] -= 1
                            cap[i ^ 1] += 1
                            b = head[i ^ 1]
                        return True
                    dq.append(b)
        return False

    def max_flow(self, s: int, t: int, limit: int) -> int:
        flow = 0
        while flow < limit and self.augment_bfs(s, t):
            flow += 1
        return flow

    def reachable(self, s: int) -> set[int]:
        seen = {s}
        stack = [s]
        while stack:
            a = stack.pop()
            for i in self.out[a]:
                b = self.head[i]
                if self.cap[i] > 0 and b not in seen:
                    seen.add(b)
                    stack.append(b)
        return seen

    def augment_cheapest(self, s: int, t: int) -> int | None:
        """One unit along a minimum-cost residual path (Bellman-Ford/SPFA). Returns its cost."""
        n = len(self.out)
        inf = float("inf")
        dist = [inf] * n
        prev = [-1] * n
        inq = [False] * n
        dist[s] = 0
        dq = deque([s])
        head, cap, cost, out = self.head, self.cap, self.cost, self.out
        while dq:
            a = dq.popleft()
            inq[a] = False
            da = dist[a]
            for i in out[a]:
                if cap[i] > 0:
                    b = head[i]
                    nd = da + cost[i]
                    if nd < dist[b]:
                        dist[b] = nd
                        prev[b] = i
                        if not inq[b]:
                            inq[b] = True
                            dq.append(b)
        if dist[t] == inf:
            return None
        b = t
        while b != s:
            i = prev[b]
            cap[i] -= 1
            cap[i ^ 1] += 1
            b = head[i ^ 1]
        return dist[t]


def _split_net(G: Graph, index: dict[int, int], open_vertices: Iterable[int] = ()) -> _Net:
    n = len(index)
    net = _Net(2 * n)
    big = G.n + 1
    opened = set(open_vertices)
    for v, i in index.items():
        net.arc(2 * i, 2 * i + 1, big if v in opened else 1)
    for u, v in G.edges():
        a, b = index[u], index[v]
        net.arc(2 * a + 1, 2 * b, big)
        net.arc(2 * b + 1, 2 * a, big)
    return net


def local_vertex_connectivity(G: Graph, s: int, t: int, limit: int | None = None) -> int:
    """Number of internally disjoint ``s``-``t`` paths for non-adjacent ``s``, ``t`` (capped at ``limit``)."""
    if G.has_edge(s, t):
        raise GraphError("local vertex connectivity needs non-adjacent endpoints")
    index = {v: i for i, v in enumerate(G.vertices)}
    net = _split_net(G, index, (s, t))
    return net.max_flow(2 * index[s] + 1, 2 * index[t], G.n if limit is None else limit)


def _local_cut(G: Graph, s: int, t: int, k: int) -> frozenset[int] | None:
    index = {v: i for i, v in enumerate(G.vertices)}
    net = _split_net(G, index, (s, t))
    src, snk = 2 * index[s] + 1, 2 * index[t]
    if net.max_flow(src, snk, k) >= k:
        return None
    seen = net.reachable(src)
    return frozenset(v for v, i in index.items() if 2 * i in seen and 2 * i + 1 not in seen)


def _even_pairs(G: Graph, k: int):
    verts = G.vertices
    for a in range(min(k, len(verts))):
        s = verts[a]
        for t in verts[a + 1:]:
            if not G.has_edge(s, t):
                yield s, t


def find_vertex_cut_below(G: Graph, k: int) -> frozenset[int] | None:
    """A vertex set ``U`` with ``|U| < k`` whose removal disconnects ``G`` or leaves one vertex.

    ``None`` when ``G`` is ``k``-connected. The returned set is checked before it is returned.
    """
    if k < 1:
        raise GraphError("k must be positive")
    if G.is_complete():
        if G.n - 1 >= k:
            return None
        return frozenset(G.vertices[:max(G.n - 1, 0)])
    for s, t in _even_pairs(G, k):
        cut = _local_cut(G, s, t, k)
        if cut is not None:
            rest = remove_vertices(G, cut)
            if rest.is_connected() and rest.n > 1:
                raise AssertionError("flow produced a non-separating set")
            return cut
    return None


def vertex_connectivity_at_least(G: Graph, k: int) -> bool:
    """``kappa(G) >= k``, with ``kappa(K_n) = n - 1``."""
    if k <= 0:
        return True
    if G.n <= k:
        return False
    if G.is_complete():
        return True
    if any(G.degree(v) < k for v in G.vertices):
        return False
    if not G.is_connected():
        return False
    index = {v: i for i, v in enumerate(G.vertices)}
    for s, t in _even_pairs(G, k):
        net = _split_net(G, index, (s, t))
        if net.max_flow(2 * index[s] + 1, 2 * index[t], k) < k:
            return False
    return True


def vertex_connectivity(G: Graph) -> int:
    k = 0
    while vertex_connectivity_at_least(G, k + 1):
        k += 1
    return k


def _edge_net(G: Graph, index: dict[int, int]) -> _Net:
    net = _Net(len(index))
    for u, v in G.edges():
        a, b = index[u], index[v]
        net.arc(a, b, 1)
        net.arc(b, a, 1)
    return net


def find_edge_cut_below(G: Graph, k: int) -> frozenset[tuple[int, int]] | None:
    """An edge set of size ``< k`` whose removal disconnects ``G``; ``None`` if ``kappa'(G) >= k``.

    Graphs with fewer than two vertices have edge-connectivity 0 and yield the empty set.
    """
    if k < 1:
        raise GraphError("k must be positive")
    verts = G.vertices
    if len(verts) < 2:
        return frozenset()
    index = {v: i for i, v in enumerate(verts)}
    s = verts[0]
    for t in verts[1:]:
        net = _edge_net(G, index)
        if net.max_flow(index[s], index[t], k) < k:
            seen = net.reachable(index[s])
            side = {v for v, i in index.items() if i in seen}
            return frozenset((u, v) for u, v in G.edges() if (u in side) != (v in side))
    return None


def edge_connectivity_at_least(G: Graph, k: int) -> bool:
    if k <= 0:
        return True
    if G.n < 2:
        return False
    if any(G.degree(v) < k for v in G.vertices):
        return False
    if not G.is_connected():
        return False
    return find_edge_cut_below(G, k) is None


def edge_connectivity(G: Graph) -> int:
    k = 0
    while edge_connectivity_at_least(G, k + 1):
        k += 1
    return k


def connectivity_predicate(mode: str, k: int = 3):
    if mode == "vertex":
        return lambda H: vertex_connectivity_at_least(H, k)
    if mode == "edge":
        return lambda H: edge_connectivity_at_least(H, k)
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------- fans

@dataclass(frozen=True)
class Fan:
    center: int
    paths: tuple[tuple[int, ...], ...]

    @property
    def total_order(self) -> int:
        """Sum of path vertex counts; the center is counted once per path."""
        return sum(len(p) for p in self.paths)

    @property
    def ends(self) -> tuple[int, ...]:
        return tuple(sorted(p[-1] for p in self.paths))

    def vertices(self) -> frozenset[int]:
        return frozenset(v for p in self.paths for v in p)

    def edges(self) -> frozenset[tuple[int, int]]:
        return frozenset((min(a, b), max(a, b)) for p in self.paths for a, b in zip(p, p[1:]))


def _fan_network(G: Graph, v: int, S: frozenset[int], target_cap: int, tie_break: bool):
    verts = G.vertices
    index = {w: i for i, w in enumerate(verts)}
    n = len(verts)
    sink = 2 * n
    net = _Net(2 * n + 1)
    targets = sorted(S)
    # lexicographic preference for small endpoint ids, strictly below one unit of length
    width = len(targets)
    tie = {s: (1 << width) - (1 << (width - r)) for r, s in enumerate(targets)} if tie_break else {}
    unit = (1 << (width + 2)) * (n + 1) if tie_break else 1
    for w, i in index.items():
        if w == v:
            continue
        if w in S:
            net.arc(2 * i, sink, target_cap, tie.get(w, 0))
        else:
            net.arc(2 * i, 2 * i + 1, 1)
    for a, b in G.edges():
        for x, y in ((a, b), (b, a)):
            if x in S or y == v:
                continue
            net.arc(2 * index[x] + 1, 2 * index[y], n + 1, unit)
    return net, index, sink


def _trace_paths(net: _Net, index: dict[int, int], start: int, sink: int) -> list[tuple[int, ...]]:
    rev = {i: w for w, i in index.items()}
    # flow on forward arc j sits in the residual capacity of its twin
    flow = {j: net.cap[j ^ 1] for j in range(0, len(net.head), 2) if net.cap[j ^ 1] > 0}
    paths = []
    for i0 in net.out[start]:
        if i0 % 2 or flow.get(i0, 0) == 0:
            continue
        path = [rev[start // 2]]
        i = i0
        while True:
            flow[i] -= 1
            node = net.head[i]
            if node == sink:
                break
            if node % 2 == 0:
                path.append(rev[node // 2])
            i = next((j for j in net.out[node] if j % 2 == 0 and flow.get(j, 0) > 0), -1)
            if i < 0:
                raise AssertionError("broken flow decomposition")
        paths.append(tuple(path))
    return paths


def min_fan(G: Graph, v: int, S: Iterable[int], k: int, *, tie_break: bool = True) -> Fan | None:
    """``k`` paths from ``v`` to distinct vertices of ``S``, disjoint apart from ``v``, with
    interiors avoiding ``S``, minimising the total number of path vertices.

    Among fans of equal total the sorted endpoint tuple is lexicographically smallest.
    ``None`` if no ``k`` such paths exist (see :func:`fan_separator`).
    """
    targets = frozenset(S)
    if v in targets:
        raise GraphError("fan center must not lie in the target set")
    if k < 1:
        raise GraphError("k must be positive")
    net, index, sink = _fan_network(G, v, targets, 1, tie_break)
    src = 2 * index[v] + 1
    for _ in range(k):
        if net.augment_cheapest(src, sink) is None:
            return None
    paths = _trace_paths(net, index, src, sink)
    paths.sort(key=lambda p: (p[-1], p))
    return Fan(v, tuple(paths))


def fan_separator(G: Graph, v: int, S: Iterable[int], k: int) -> frozenset[int] | None:
    """Menger witness: ``X`` with ``|X| < k``, ``v`` not in ``X``, such that ``G - X`` has no
    ``v``-``S`` path. ``None`` when ``k`` disjoint paths exist."""
    targets = frozenset(S)
    if v in targets:
        raise GraphError("fan center must not lie in the target set")
    net, index, sink = _fan_network(G, v, targets, 1, False)
    src = 2 * index[v] + 1
    if net.max_flow(src, sink, k) >= k:
        return None
    seen = net.reachable(src)
    cut = set()
    for w, i in index.items():
        if w == v:
            continue
        if w in targets:
            if 2 * i in seen:
                cut.add(w)
        elif 2 * i in seen and 2 * i + 1 not in seen:
            cut.add(w)
    return frozenset(cut)


def min_disjoint_paths(G: Graph, s: int, t: int, k: int) -> tuple[tuple[int, ...], ...] | None:
    """``k`` internally disjoint ``s``-``t`` paths of minimum total length (``None`` if impossible)."""
    if s == t:
        raise GraphError("endpoints must differ")
    net, index, sink = _fan_network(G, s, frozenset([t]), k, False)
    src = 2 * index[s] + 1
    for _ in range(k):
        if net.augment_cheapest(src, sink) is None:
            return None
    paths = _trace_paths(net, index, src, sink)
    paths.sort(key=lambda p: (len(p), p))
    return tuple(paths)
