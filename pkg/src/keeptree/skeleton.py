"""Skeletons: subgraphs that are subdivisions of simple 3-connected graphs.

A skeleton ``B`` carries its branch vertices ``V1`` (degree at least 3 in ``B``),
its subdivision vertices ``V2`` and its ears (maximal paths whose interior is in
``V2``). Moves return fresh validated skeletons and never touch their input.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import total_ordering
from typing import Iterable, Sequence

from .connectivity import Fan, find_vertex_cut_below, min_disjoint_paths, vertex_connectivity_at_least
from .graph import Edge, Graph, norm_edge

EXHAUSTIVE_LIMIT = 12
SEARCH_BUDGET = 100_000


class SkeletonError(ValueError):
    pass


class MoveRejected(ValueError):
    pass


@dataclass(frozen=True)
class Validation:
    ok: bool
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok


@total_ordering
@dataclass(frozen=True)
class Potential:
    """``(n(B), -|V(B)|)`` compared lexicographically."""

    n: int
    neg_size: int

    def __lt__(self, other: "Potential") -> bool:
        return (self.n, self.neg_size) < (other.n, other.neg_size)


def _adjacency(vertices: Iterable[int], edges: Iterable[Edge]) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {v: set() for v in vertices}
    for u, v in edges:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    return adj


def _trace_ears(adj: dict[int, set[int]], branch: frozenset[int]) -> list[tuple[int, ...]]:
    ears = set()
    for a in sorted(branch):
        for nb in sorted(adj[a]):
            path = [a]
            prev, cur = a, nb
            while cur not in branch:
                path.append(cur)
                nxt = [u for u in adj[cur] if u != prev]
                if len(nxt) != 1:
                    break
                prev, cur = cur, nxt[0]
            path.append(cur)
            t = tuple(path)
            ears.add(min(t, t[::-1]))
    return sorted(ears)


def _analyse(vertices: frozenset[int], edges: frozenset[Edge]):
    adj = _adjacency(vertices, edges)
    if not adj:
        return Validation(False, "empty subgraph"), None
    for v in sorted(adj):
        if len(adj[v]) < 2:
            return Validation(False, f"vertex {v} has degree {len(adj[v])} < 2"), None
    seen = {min(adj)}
    stack = [min(adj)]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    if len(seen) != len(adj):
        return Validation(False, "subgraph is disconnected"), None
    branch = frozenset(v for v, nb in adj.items() if len(nb) >= 3)
    if not branch:
        return Validation(False, "no branch vertices (the subgraph is a cycle)"), None
    ears = _trace_ears(adj, branch)
    pairs: dict[tuple[int, int], tuple[int, ...]] = {}
    for ear in ears:
        a, b = ear[0], ear[-1]
        if a == b:
            return Validation(False, f"loop at branch vertex {a} in the branch graph"), None
        key = (min(a, b), max(a, b))
        if key in pairs:
            return Validation(False, f"multi-edge {key[0]}-{key[1]} in the branch graph"), None
        pairs[key] = ear
    if len(branch) < 4:
        return Validation(False, f"only {len(branch)} branch vertices"), None
    bg = Graph.from_edges(sorted(branch), pairs.keys())
    if not vertex_connectivity_at_least(bg, 3):
        cut = find_vertex_cut_below(bg, 3)
        return Validation(False, f"branch graph has a cut of size <= 2: {sorted(cut or [])}"), None
    return Validation(True), (adj, branch, tuple(ears))


def validate(B: Graph | Iterable[Edge], vertices: Iterable[int] | None = None) -> Validation:
    """Is ``B`` a subdivision of a simple 3-connected graph? The reason names the violated clause."""
    if isinstance(B, Graph):
        edges = frozenset(B.edges())
        verts = frozenset(B.vertices)
    else:
        edges = frozenset(norm_edge(*e) for e in B)
        verts = frozenset(v for e in edges for v in e) if vertices is None else frozenset(vertices)
    return _analyse(verts, edges)[0]


@dataclass(frozen=True, eq=False)
class Skeleton:
    vertices: frozenset[int]
    edges: frozenset[Edge]
    branch: frozenset[int] = field(init=False)
    ears: tuple[tuple[int, ...], ...] = field(init=False, repr=False)
    _adj: dict = field(init=False, repr=False)
    _ear_of: dict = field(init=False, repr=False)

    def __post_init__(self):
        edges = frozenset(norm_edge(*e) for e in self.edges)
        verts = frozenset(self.vertices) | {v for e in edges for v in e}
        verdict, derived = _analyse(verts, edges)
        if not verdict:
            raise SkeletonError(verdict.reason)
        adj, branch, ears = derived
        ear_of = {}
        for i, ear in enumerate(ears):
            for v in ear[1:-1]:
                ear_of[v] = i
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "branch", branch)
        object.__setattr__(self, "ears", ears)
        object.__setattr__(self, "_adj", {v: frozenset(nb) for v, nb in adj.items()})
        object.__setattr__(self, "_ear_of", ear_of)

    @classmethod
    def from_edges(cls, edges: Iterable[Iterable[int]]) -> "Skeleton":
        es = frozenset(norm_edge(*e) for e in edges)
        return cls(frozenset(v for e in es for v in e), es)

    @classmethod
    def from_graph(cls, G: Graph) -> "Skeleton":
        return cls(frozenset(G.vertices), frozenset(G.edges()))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Skeleton) and self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges))

    @property
    def subdivision(self) -> frozenset[int]:
        """``V2``: vertices of degree 2 in ``B``."""
        return self.vertices - self.branch

    @property
    def n(self) -> int:
        return len(self.branch)

    @property
    def size(self) -> int:
        return len(self.vertices)

    def potential(self) -> Potential:
        return Potential(self.n, -self.size)

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def ear_of(self, v: int) -> tuple[int, ...]:
        """The ear having ``v`` (a subdivision vertex) in its interior."""
        return self.ears[self._ear_of[v]]

    def closed_ear(self, v: int) -> frozenset[int]:
        return frozenset(self.ear_of(v))

    def common_ear(self, vs: Iterable[int]) -> tuple[int, ...] | None:
        """The ear whose closed vertex set contains all of ``vs``, if any."""
        xs = set(vs)
        inner = [x for x in xs if x in self._ear_of]
        if inner:
            ear = self.ear_of(inner[0])
            return ear if xs <= set(ear) else None
        if len(xs) > 2:
            return None
        for ear in self.ears:
            if xs <= {ear[0], ear[-1]}:
                return ear
        return None

    def branch_graph(self) -> Graph:
        return Graph.from_edges(sorted(self.branch), [(e[0], e[-1]) for e in self.ears])

    def to_text(self) -> str:
        lines = [f"# skeleton n(B)={self.n} |V(B)|={self.size}",
                 "# V1: " + " ".join(str(v) for v in sorted(self.branch))]
        lines += [f"{u} {v}" for u, v in sorted(self.edges)]
        return "\n".join(lines) + "\n"


def parse_skeleton(text: str) -> Skeleton:
    edges = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            u, v = line.split()
            edges.append((int(u), int(v)))
    return Skeleton.from_edges(edges)


def potential(B: Skeleton) -> Potential:
    return B.potential()


def _path_edges(path: Sequence[int]) -> set[Edge]:
    return {norm_edge(a, b) for a, b in zip(path, path[1:])}


def _check_host(host: Graph | None, edges: Iterable[Edge]) -> None:
    if host is None:
        return
    for u, v in edges:
        if not host.has_edge(u, v):
            raise MoveRejected(f"edge {u}-{v} is not available in the working graph")


def _build(vertices: Iterable[int], edges: Iterable[Edge]) -> Skeleton:
    try:
        return Skeleton(frozenset(vertices), frozenset(edges))
    except SkeletonError as exc:
        raise MoveRejected(f"result is not a valid skeleton: {exc}") from None


def attach_vertex_move(B: Skeleton, w: int, attach: Iterable[int], host: Graph | None = None) -> Skeleton:
    """Add an outside vertex ``w`` with edges to the vertices ``attach`` of ``B``."""
    if w in B.vertices:
        raise MoveRejected(f"vertex {w} already lies in the skeleton")
    targets = sorted(set(attach))
    if len(targets) < 3:
        raise MoveRejected("need at least three attachment vertices")
    if any(t not in B.vertices for t in targets):
        raise MoveRejected("attachments must lie in the skeleton")
    if B.common_ear(targets) is not None:
        raise MoveRejected("all attachments lie on one closed ear")
    new_edges = {norm_edge(w, t) for t in targets}
    _check_host(host, new_edges)
    out = _build(B.vertices | {w}, B.edges | new_edges)
    assert out.n > B.n
    return out


def shortcut_ear_move(B: Skeleton, w: int, ear: Sequence[int], p: int, q: int,
                      host: Graph | None = None) -> Skeleton:
    """Replace the stretch ``ear[p..q]`` by the two-edge detour ``ear[p] - w - ear[q]``.

    Indices are 0-based positions along ``ear``.
    """
    Q = tuple(ear)
    if Q not in B.ears and Q[::-1] not in B.ears:
        raise MoveRejected("not an ear of the skeleton")
    if w in B.vertices:
        raise MoveRejected(f"vertex {w} already lies in the skeleton")
    if not 0 <= p < q < len(Q):
        raise MoveRejected("indices out of range")
    if q - p < 3:
        raise MoveRejected("shortcut needs q - p >= 3")
    new_edges = {norm_edge(w, Q[p]), norm_edge(w, Q[q])}
    _check_host(host, new_edges)
    dropped = set(Q[p + 1:q])
    edges = (B.edges - _path_edges(Q[p:q + 1])) | new_edges
    out = _build((B.vertices - dropped) | {w}, edges)
    assert out.n == B.n and out.size < B.size
    return out


def chord_shortcut_move(B: Skeleton, ear: Sequence[int], i: int, j: int, host: Graph | None = None) -> Skeleton:
    """Short-circuit ``ear[i..j]`` through the chord ``ear[i] ear[j]`` (``j - i >= 2``)."""
    Q = tuple(ear)
    if Q not in B.ears and Q[::-1] not in B.ears:
        raise MoveRejected("not an ear of the skeleton")
    if not 0 <= i < j < len(Q) or j - i < 2:
        raise MoveRejected("chord must skip at least one ear vertex")
    chord = norm_edge(Q[i], Q[j])
    _check_host(host, [chord])
    edges = (B.edges - _path_edges(Q[i:j + 1])) | {chord}
    out = _build(B.vertices - set(Q[i + 1:j]), edges)
    assert out.n == B.n and out.size < B.size
    return out


def attach_fan_move(B: Skeleton, fan: Fan, host: Graph | None = None) -> Skeleton:
    """Add an outside center joined to ``B`` by the disjoint fan paths."""
    u = fan.center
    if u in B.vertices:
        raise MoveRejected("fan center lies in the skeleton")
    ends = [p[-1] for p in fan.paths]
    if len(set(ends)) != len(ends):
        raise MoveRejected("fan endpoints are not distinct")
    inner: list[int] = []
    for path in fan.paths:
        if path[0] != u or path[-1] not in B.vertices:
            raise MoveRejected("fan path must run from the center to the skeleton")
        if any(v in B.vertices for v in path[1:-1]):
            raise MoveRejected("fan path interior meets the skeleton")
        inner.extend(path[1:-1])
    if len(set(inner)) != len(inner) or u in inner:
        raise MoveRejected("fan paths are not disjoint")
    new_edges = set().union(*(_path_edges(p) for p in fan.paths))
    _check_host(host, new_edges)
    out = _build(B.vertices | {u} | set(inner), B.edges | new_edges)
    assert out.n > B.n
    return out


def attach_path_move(B: Skeleton, path: Sequence[int], host: Graph | None = None) -> Skeleton:
    """Add a path from a subdivision vertex to a vertex off its closed ear."""
    P = tuple(path)
    if len(P) < 2:
        raise MoveRejected("path needs two ends")
    u, u2 = P[0], P[-1]
    if u not in B.subdivision:
        raise MoveRejected("path must start at a subdivision vertex")
    if u2 not in B.vertices:
        raise MoveRejected("path must end in the skeleton")
    if u2 in B.closed_ear(u):
        raise MoveRejected("both ends lie on one closed ear")
    if any(v in B.vertices for v in P[1:-1]) or len(set(P)) != len(P):
        raise MoveRejected("path interior must avoid the skeleton and be simple")
    new_edges = _path_edges(P)
    if new_edges & B.edges:
        raise MoveRejected("path reuses a skeleton edge")
    _check_host(host, new_edges)
    out = _build(B.vertices | set(P), B.edges | new_edges)
    assert out.n > B.n
    return out


# ---------------------------------------------------------------- initial skeleton

def _core(H: Graph, k: int) -> Graph:
    adj = {v: set(H.neighbors(v)) for v in H.vertices}
    stack = [v for v, nb in adj.items() if len(nb) < k]
    while stack:
        v = stack.pop()
        if v not in adj:
            continue
        for u in adj.pop(v):
            if u in adj:
                adj[u].discard(v)
                if len(adj[u]) < k:
                    stack.append(u)
    return Graph(adj)


def _theta_bridge(H: Graph, paths: tuple[tuple[int, ...], ...]) -> list[int] | None:
    theta = {v for p in paths for v in p}
    interiors = [set(p[1:-1]) for p in paths]
    best = None
    for i, j in itertools.combinations(range(len(paths)), 2):
        src, dst = interiors[i], interiors[j]
        if not src or not dst:
            continue
        prev = {s: None for s in sorted(src)}
        frontier = sorted(src)
        hit = None
        while frontier and hit is None:
            nxt = []
            for v in frontier:
                for u in sorted(H.neighbors(v)):
                    if u in prev:
                        continue
                    if u in dst:
                        prev[u] = v
                        hit = u
                        break
                    if u in theta:
                        continue
                    prev[u] = v
                    nxt.append(u)
                if hit is not None:
                    break
            frontier = nxt
        if hit is None:
            continue
        route = [hit]
        while prev[route[-1]] is not None:
            route.append(prev[route[-1]])
        if best is None or len(route) < len(best):
            best = route
    return best


def _k4_exhaustive(H: Graph, budget: int) -> Skeleton | None:
    """Brute force: four branch vertices joined by six internally disjoint paths."""
    nodes = [0]
    verts = [v for v in H.vertices if H.degree(v) >= 3]

    def routes(a, b, banned):
        stack = [(a, (a,))]
        while stack:
            v, path = stack.pop()
            nodes[0] += 1
            if nodes[0] > budget:
                return
            for u in sorted(H.neighbors(v), reverse=True):
                if u == b:
                    yield path + (b,)
                elif u not in banned and u not in path:
                    stack.append((u, path + (u,)))

    def rec(pairs, used, chosen):
        if not pairs:
            return chosen
        a, b = pairs[0]
        for path in routes(a, b, used):
            got = rec(pairs[1:], used | set(path[1:-1]), chosen + [path])
            if got is not None:
                return got
            if nodes[0] > budget:
                return None
        return None

    for quad in itertools.combinations(verts, 4):
        pairs = list(itertools.combinations(quad, 2))
        got = rec(pairs, set(quad), [])
        if got is not None:
            return Skeleton.from_edges(set().union(*(_path_edges(p) for p in got)))
        if nodes[0] > budget:
            return None
    return None


def initial_skeleton(H: Graph, *, exhaustive_limit: int = EXHAUSTIVE_LIMIT,
                     budget: int = SEARCH_BUDGET) -> Skeleton | None:
    """A K4-subdivision in ``H``: a theta graph from minimum-length disjoint paths plus a
    shortest bridge between two of its interiors; brute force on small graphs."""
    core = _core(H, 3)
    if core.n < 4:
        return None
    order = sorted(core.vertices, key=lambda v: (-core.degree(v), v))
    tried = 0
    for x, y in itertools.combinations(order, 2):
        paths = min_disjoint_paths(core, x, y, 3)
        tried += 1
        if paths is None:
            continue
        bridge = _theta_bridge(core, paths)
        if bridge is None:
            continue
        edges = set().union(*(_path_edges(p) for p in paths)) | _path_edges(bridge)
        try:
            return Skeleton.from_edges(edges)
        except SkeletonError:
            continue
    if core.n <= exhaustive_limit:
        return _k4_exhaustive(core, budget)
    return None


__all__ = [
    "MoveRejected", "Potential", "Skeleton", "SkeletonError", "Validation", "attach_fan_move",
    "attach_path_move", "attach_vertex_move", "chord_shortcut_move", "initial_skeleton", "parse_skeleton",
    "potential", "shortcut_ear_move", "validate",
]
