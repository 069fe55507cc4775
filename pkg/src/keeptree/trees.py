"""Tree patterns, non-isomorphic tree enumeration, and greedy tree embedding.

Greedy extension works because of a degree count. A partial copy ``S'`` of a
subtree grows into a full copy of ``T`` as long as every host vertex that still
has to receive children has at least ``m - 1`` usable edges.
"""

from __future__ import annotations

import heapq
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .graph import Edge, Graph, GraphError, GraphFormatError, norm_edge, parse_edge_list

log = logging.getLogger(__name__)

BACKTRACK_BUDGET = 100_000


class TreeError(ValueError):
    pass


class EmbeddingError(ValueError):
    pass


class EmbeddingFailure(LookupError):
    """Extension got stuck; ``blocked`` is the pattern vertex that found no host."""

    def __init__(self, blocked: int | None, reason: str = "no admissible host vertex"):
        self.blocked = blocked
        super().__init__(f"{reason} (pattern vertex {blocked})")


class HypothesisError(ValueError):
    pass


@dataclass(frozen=True)
class TreePattern:
    order: int
    edges: tuple[Edge, ...]
    adj: tuple[frozenset[int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.order < 1:
            raise TreeError("a tree has at least one vertex")
        edges = tuple(sorted(norm_edge(u, v) for u, v in self.edges))
        if len(edges) != self.order - 1 or len(set(edges)) != len(edges):
            raise TreeError(f"a tree on {self.order} vertices has {self.order - 1} distinct edges")
        adj: list[set[int]] = [set() for _ in range(self.order)]
        for u, v in edges:
            if not (0 <= u < self.order and 0 <= v < self.order):
                raise TreeError(f"edge {u}-{v} out of range")
            adj[u].add(v)
            adj[v].add(u)
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        if len(seen) != self.order:
            raise TreeError("edges do not form a connected graph")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "adj", tuple(frozenset(a) for a in adj))

    @classmethod
    def from_parents(cls, parents: Iterable[int]) -> "TreePattern":
        ps = list(parents)
        return cls(len(ps) + 1, tuple((p, i + 1) for i, p in enumerate(ps)))

    @classmethod
    def path(cls, m: int) -> "TreePattern":
        return cls(m, tuple((i, i + 1) for i in range(m - 1)))

    @classmethod
    def star(cls, m: int) -> "TreePattern":
        return cls(m, tuple((0, i) for i in range(1, m)))

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    @property
    def internal(self) -> frozenset[int]:
        return frozenset(v for v in range(self.order) if len(self.adj[v]) >= 2)

    @property
    def leaves(self) -> frozenset[int]:
        return frozenset(v for v in range(self.order) if len(self.adj[v]) == 1)

    @property
    def internal_count(self) -> int:
        return len(self.internal)

    @property
    def leaf_count(self) -> int:
        return len(self.leaves)

    @property
    def is_star(self) -> bool:
        return self.order >= 2 and self.max_degree == self.order - 1

    def centroids(self) -> list[int]:
        m = self.order
        if m == 1:
            return [0]
        order = _bfs_order(self.adj, 0)
        parent = {0: -1}
        for v in order:
            for u in self.adj[v]:
                if u not in parent:
                    parent[u] = v
        size = [1] * m
        for v in reversed(order):
            if parent[v] >= 0:
                size[parent[v]] += size[v]
        best, out = m, []
        for v in range(m):
            heaviest = m - size[v]
            for u in self.adj[v]:
                if parent.get(u) == v:
                    heaviest = max(heaviest, size[u])
            if heaviest < best:
                best, out = heaviest, [v]
            elif heaviest == best:
                out.append(v)
        return out

    def canonical_form(self) -> str:
        """AHU parenthesis code rooted at the centroid(s); equal iff isomorphic."""
        return min(_ahu(self.adj, c) for c in self.centroids())

    def is_isomorphic(self, other: "TreePattern") -> bool:
        return self.order == other.order and self.canonical_form() == other.canonical_form()

    def to_parent_array(self) -> str:
        """``"m p1 ... p_{m-1}"`` with parents taken on the tree rooted at vertex 0."""
        parent = _parents_from_root(self.adj, 0)
        return " ".join([str(self.order)] + [str(parent[i]) for i in range(1, self.order)])

    def normalized(self) -> "TreePattern":
        """Isomorphic copy labelled in BFS order from the canonical root, so parents precede children."""
        return _tree_from_code(self.canonical_form())

    def edge_list(self) -> str:
        return "".join(f"{u} {v}\n" for u, v in self.edges)


def _bfs_order(adj, root: int, allowed=None) -> list[int]:
    order = [root]
    seen = {root}
    dq = deque([root])
    while dq:
        v = dq.popleft()
        for u in sorted(adj[v]):
            if u not in seen and (allowed is None or u in allowed):
                seen.add(u)
                order.append(u)
                dq.append(u)
    return order


def _parents_from_root(adj, root: int) -> dict[int, int]:
    parent = {root: -1}
    for v in _bfs_order(adj, root):
        for u in adj[v]:
            if u not in parent:
                parent[u] = v
    return parent


def _ahu(adj, root: int) -> str:
    order = _bfs_order(adj, root)
    parent = _parents_from_root(adj, root)
    code: dict[int, str] = {}
    for v in reversed(order):
        kids = sorted(code[u] for u in adj[v] if parent.get(u) == v)
        code[v] = "(" + "".join(kids) + ")"
    return code[root]


def _tree_from_code(code: str) -> TreePattern:
    # rebuild the rooted tree, then relabel breadth-first with children in code order
    children: list[list[int]] = []
    stack: list[int] = []
    for ch in code:
        if ch == "(":
            children.append([])
            if stack:
                children[stack[-1]].append(len(children) - 1)
            stack.append(len(children) - 1)
        else:
            stack.pop()
    label = {0: 0}
    dq = deque([0])
    edges = []
    while dq:
        v = dq.popleft()
        for c in children[v]:
            label[c] = len(label)
            edges.append((label[v], label[c]))
            dq.append(c)
    return TreePattern(len(children), tuple(edges))


def enumerate_trees(m: int) -> list[TreePattern]:
    """One representative per isomorphism class of trees on ``m`` vertices."""
    if m < 1:
        raise TreeError("m must be positive")
    codes = {"()"}
    for size in range(2, m + 1):
        grown = set()
        for code in codes:
            t = _tree_from_code(code)
            for v in range(size - 1):
                bigger = TreePattern(size, t.edges + ((v, size - 1),))
                grown.add(bigger.canonical_form())
        codes = grown
    return [_tree_from_code(c) for c in sorted(codes)]


def prufer_sequence(T: TreePattern) -> tuple[int, ...]:
    if T.order < 2:
        return ()
    deg = [len(a) for a in T.adj]
    adj = [set(a) for a in T.adj]
    heap = [v for v in range(T.order) if deg[v] == 1]
    heapq.heapify(heap)
    seq = []
    for _ in range(T.order - 2):
        leaf = heapq.heappop(heap)
        (nb,) = adj[leaf]
        seq.append(nb)
        adj[nb].discard(leaf)
        deg[nb] -= 1
        if deg[nb] == 1:
            heapq.heappush(heap, nb)
    return tuple(seq)


def from_prufer(seq: Iterable[int]) -> TreePattern:
    s = list(seq)
    m = len(s) + 2
    deg = [1] * m
    for v in s:
        if not 0 <= v < m:
            raise TreeError(f"Prüfer entry {v} out of range")
        deg[v] += 1
    heap = [v for v in range(m) if deg[v] == 1]
    heapq.heapify(heap)
    edges = []
    for v in s:
        leaf = heapq.heappop(heap)
        edges.append((leaf, v))
        deg[v] -= 1
        if deg[v] == 1:
            heapq.heappush(heap, v)
    edges.append((heapq.heappop(heap), heapq.heappop(heap)))
    return TreePattern(m, tuple(edges))


def parse_parent_array(text: str) -> TreePattern:
    """Parse ``"m p1 ... p_{m-1}"`` (vertex ``i`` hangs below ``p_i``; vertex 0 is the root)."""
    parts = text.split()
    try:
        nums = [int(p) for p in parts]
    except ValueError:
        raise TreeError(f"parent array must be integers: {text!r}") from None
    if not nums:
        raise TreeError("empty parent array")
    m, parents = nums[0], nums[1:]
    if m < 1 or len(parents) != m - 1:
        raise TreeError(f"parent array announces m={m} but lists {len(parents)} parents")
    for i, p in enumerate(parents, 1):
        if not 0 <= p < m or p == i:
            raise TreeError(f"invalid parent {p} for vertex {i}")
    return TreePattern.from_parents(parents)


def parse_tree(text: str) -> TreePattern:
    """Parent array (single line) or an ``"n m"`` edge list."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise TreeError("empty tree description")
    if len(lines) == 1:
        return parse_parent_array(lines[0])
    try:
        g = parse_edge_list("\n".join(lines))
    except GraphFormatError as exc:
        raise TreeError(str(exc)) from None
    return TreePattern(g.n, tuple(g.edges()))


# ---------------------------------------------------------------- embeddings

@dataclass(frozen=True)
class Embedding:
    """Injective map from (a subtree of) ``pattern`` into a host graph."""

    pattern: TreePattern
    mapping: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, pattern: TreePattern, phi: Mapping[int, int]) -> "Embedding":
        return cls(pattern, tuple(sorted(phi.items())))

    @property
    def phi(self) -> dict[int, int]:
        return dict(self.mapping)

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(p for p, _ in self.mapping)

    @property
    def image(self) -> frozenset[int]:
        return frozenset(h for _, h in self.mapping)

    @property
    def image_edges(self) -> frozenset[Edge]:
        phi = self.phi
        return frozenset(norm_edge(phi[u], phi[v]) for u, v in self.pattern.edges if u in phi and v in phi)

    @property
    def is_complete(self) -> bool:
        return len(self.mapping) == self.pattern.order

    def check(self, host: Graph) -> None:
        """Raise :class:`EmbeddingError` unless this is a valid (partial) copy in ``host``."""
        phi = self.phi
        if len(set(phi.values())) != len(phi):
            raise EmbeddingError("vertex map is not injective")
        dom = set(phi)
        if dom and len(_bfs_order(self.pattern.adj, min(dom), dom)) != len(dom):
            raise EmbeddingError("domain is not a subtree of the pattern")
        for p, h in phi.items():
            if h not in host:
                raise EmbeddingError(f"pattern vertex {p} mapped to unknown host vertex {h}")
        for u, v in self.pattern.edges:
            if u in phi and v in phi and not host.has_edge(phi[u], phi[v]):
                raise EmbeddingError(f"pattern edge {u}-{v} maps to non-edge {phi[u]}-{phi[v]}")

    def restrict(self, vertices: Iterable[int]) -> "Embedding":
        keep = set(vertices)
        return Embedding(self.pattern, tuple((p, h) for p, h in self.mapping if p in keep))


def embedding_from_edges(host: Graph, edges: Iterable[Iterable[int]], pattern: TreePattern | None = None) -> Embedding:
    """Recover an :class:`Embedding` from a host edge set forming a tree (isomorphic to ``pattern`` if given)."""
    es = sorted({norm_edge(*e) for e in edges})
    for u, v in es:
        if not host.has_edge(u, v):
            raise EmbeddingError(f"{u}-{v} is not an edge of the host graph")
    verts = sorted({v for e in es for v in e})
    if not verts:
        raise EmbeddingError("empty edge set")
    index = {v: i for i, v in enumerate(verts)}
    try:
        shape = TreePattern(len(verts), tuple((index[u], index[v]) for u, v in es))
    except TreeError as exc:
        raise EmbeddingError(f"edges do not form a tree: {exc}") from None
    if pattern is None:
        return Embedding.of(shape, {i: v for v, i in index.items()})
    if not shape.is_isomorphic(pattern):
        raise EmbeddingError("edge set is not isomorphic to the tree pattern")
    iso = tree_isomorphism(pattern, shape)
    return Embedding.of(pattern, {p: verts[iso[p]] for p in range(pattern.order)})


def tree_isomorphism(a: TreePattern, b: TreePattern) -> dict[int, int]:
    """An explicit isomorphism ``a -> b``; raises :class:`TreeError` if none exists."""
    if a.order != b.order:
        raise TreeError("orders differ")
    ca, cb = a.centroids(), b.centroids()
    for ra in ca[:1]:
        code_a = _ahu(a.adj, ra)
        for rb in cb:
            if _ahu(b.adj, rb) == code_a:
                return _match_rooted(a, ra, b, rb)
    raise TreeError("trees are not isomorphic")


def _match_rooted(a: TreePattern, ra: int, b: TreePattern, rb: int) -> dict[int, int]:
    pa, pb = _parents_from_root(a.adj, ra), _parents_from_root(b.adj, rb)
    codes_a, codes_b = {}, {}
    for t, root, par, codes in ((a, ra, pa, codes_a), (b, rb, pb, codes_b)):
        for v in reversed(_bfs_order(t.adj, root)):
            kids = sorted(codes[u] for u in t.adj[v] if par.get(u) == v)
            codes[v] = "(" + "".join(kids) + ")"
    iso = {ra: rb}
    stack = [(ra, rb)]
    while stack:
        x, y = stack.pop()
        kx = sorted((u for u in a.adj[x] if pa.get(u) == x), key=lambda u: codes_a[u])
        ky = sorted((u for u in b.adj[y] if pb.get(u) == y), key=lambda u: codes_b[u])
        for u, w in zip(kx, ky):
            iso[u] = w
            stack.append((u, w))
    return iso


class _Grower:
    """Attach pattern vertices one at a time to already placed parents."""

    def __init__(self, host: Graph, pattern: TreePattern, blocked: frozenset[Edge], budget: int,
                 targets: frozenset[int] | None = None):
        self.host = host
        self.pattern = pattern
        self.targets = frozenset(range(pattern.order)) if targets is None else targets
        self.blocked = blocked
        self.budget = budget
        self.nodes = 0

    def usable(self, a: int, b: int) -> bool:
        return (a, b) not in self.blocked and (b, a) not in self.blocked

    def free_degree(self, h: int, used: set[int]) -> int:
        return sum(1 for u in self.host.neighbors(h) if u not in used and self.usable(h, u))

    def candidates(self, c: int, parent_host: int, used: set[int]) -> list[int]:
        need = sum(1 for u in self.pattern.adj[c] if u in self.targets) - 1
        cands = []
        for h in self.host.neighbors(parent_host):
            if h in used or not self.usable(parent_host, h):
                continue
            free = self.free_degree(h, used) if need > 0 else 0
            if free < need:
                continue
            cands.append((-free, h))
        cands.sort()
        return [h for _, h in cands]

    def greedy(self, phi: dict[int, int], steps: list[tuple[int, int]]) -> dict[int, int]:
        phi = dict(phi)
        used = set(phi.values())
        for c, p in steps:
            cands = self.candidates(c, phi[p], used)
            if not cands:
                raise EmbeddingFailure(c)
            phi[c] = cands[0]
            used.add(cands[0])
        return phi

    def backtrack(self, phi: dict[int, int], steps: list[tuple[int, int]]) -> dict[int, int]:
        phi = dict(phi)
        used = set(phi.values())
        deepest = [0]

        def rec(i: int) -> bool:
            if i == len(steps):
                return True
            self.nodes += 1
            if self.nodes > self.budget:
                raise EmbeddingFailure(steps[i][0], "backtracking budget exhausted")
            deepest[0] = max(deepest[0], i)
            c, p = steps[i]
            for h in self.candidates(c, phi[p], used):
                phi[c] = h
                used.add(h)
                if rec(i + 1):
                    return True
                used.discard(h)
                del phi[c]
            return False

        if not rec(0):
            raise EmbeddingFailure(steps[deepest[0]][0] if steps else None)
        return phi

    def run(self, phi: dict[int, int], steps: list[tuple[int, int]], backtrack: bool) -> dict[int, int]:
        try:
            return self.greedy(phi, steps)
        except EmbeddingFailure:
            if not backtrack or self.budget <= 0:
                raise
        return self.backtrack(phi, steps)


def _attachment_steps(pattern: TreePattern, placed: Iterable[int], targets: Iterable[int],
                      first: Iterable[int] = ()) -> list[tuple[int, int]]:
    """(child, parent) pairs in breadth-first order away from ``placed``; children of ``first`` go first."""
    placed = set(placed)
    targets = set(targets)
    priority = set(first)
    steps = []
    frontier = sorted(placed, key=lambda v: (v not in priority, v))
    seen = set(placed)
    dq = deque(frontier)
    while dq:
        v = dq.popleft()
        for u in sorted(pattern.adj[v]):
            if u in targets and u not in seen:
                seen.add(u)
                steps.append((u, v))
                dq.append(u)
    if seen & targets != targets:
        raise TreeError("placed vertices do not reach every target pattern vertex")
    return steps


def _blocked_edges(forbidden: Iterable[Iterable[int]], reserved: Mapping[int, Iterable[Iterable[int]]] | None) -> frozenset[Edge]:
    out = {norm_edge(*e) for e in forbidden}
    for es in (reserved or {}).values():
        out.update(norm_edge(*e) for e in es)
    return frozenset(out)


def _embed_from_scratch(host: Graph, pattern: TreePattern, targets: frozenset[int], blocked: frozenset[Edge],
                        backtrack: bool, budget: int) -> dict[int, int]:
    root = min(_subtree_centroids(pattern, targets))
    steps = _attachment_steps(pattern, [root], targets)
    grower = _Grower(host, pattern, blocked, budget, targets)
    need = sum(1 for u in pattern.adj[root] if u in targets)
    roots = sorted((-(grower.free_degree(h, set())), h) for h in host.vertices)
    roots = [h for f, h in roots if -f >= need]
    if not roots:
        raise EmbeddingFailure(root)
    try:
        return grower.greedy({root: roots[0]}, steps)
    except EmbeddingFailure as exc:
        if not backtrack or budget <= 0:
            raise
        last = exc
    for h in roots:
        try:
            return grower.backtrack({root: h}, steps)
        except EmbeddingFailure as exc:
            last = exc
            if grower.nodes > budget:
                break
    raise last


def _subtree_centroids(pattern: TreePattern, vertices: frozenset[int]) -> list[int]:
    vs = sorted(vertices)
    index = {v: i for i, v in enumerate(vs)}
    sub = TreePattern(len(vs), tuple((index[u], index[v]) for u, v in pattern.edges if u in index and v in index))
    return [vs[c] for c in sub.centroids()]


def internal_degree_ok(H: Graph, T: TreePattern) -> bool:
    """The greedy guarantee for the internal tree: ``delta(H) >= I(T) - 1``."""
    return H.n > 0 and min(H.degree(v) for v in H.vertices) >= T.internal_count - 1


def greedy_embed_internal(H: Graph, T: TreePattern, *, strict: bool = False, backtrack: bool = True,
                          budget: int = BACKTRACK_BUDGET) -> Embedding | None:
    """Embed ``T - V_L(T)`` into ``H`` vertex by vertex from a centroid.

    With ``strict`` the degree guarantee ``delta(H) >= I(T) - 1`` is enforced and a
    violation raises :class:`HypothesisError`; otherwise the attempt is made anyway.
    """
    if H.n == 0:
        raise HypothesisError("host graph is empty")
    inner = T.internal if T.order > 2 else frozenset([0])
    if not inner:
        inner = frozenset([0])
    if strict and not internal_degree_ok(H, T):
        raise HypothesisError("minimum degree below I(T) - 1")
    try:
        phi = _embed_from_scratch(H, T, inner, frozenset(), backtrack, budget)
    except EmbeddingFailure as exc:
        log.debug("internal embedding failed: %s", exc)
        return None
    return Embedding.of(T, phi)


def extend_embedding(G: Graph, base: Embedding, T: TreePattern | None = None,
                     forbidden: Iterable[Iterable[int]] = (),
                     reserved: Mapping[int, Iterable[Iterable[int]]] | None = None, *,
                     backtrack: bool = True, budget: int = BACKTRACK_BUDGET,
                     strict: bool = False) -> Embedding | None:
    """Grow ``base`` into a copy of all of ``T`` in ``G`` avoiding ``forbidden`` and reserved edges.

    Vertices owning reserved edges get their children first. Returns ``None`` on
    failure, or raises :class:`EmbeddingFailure` (naming the blocked pattern vertex)
    when ``strict`` is set.
    """
    T = base.pattern if T is None else T
    if T != base.pattern:
        raise EmbeddingError("base embedding belongs to a different pattern")
    blocked = _blocked_edges(forbidden, reserved)
    try:
        base.check(G)
        for e in base.image_edges:
            if e in blocked:
                raise EmbeddingError(f"base already uses blocked edge {e}")
    except EmbeddingError:
        if strict:
            raise
        return None
    if base.is_complete:
        return base
    try:
        if not base.mapping:
            phi = _embed_from_scratch(G, T, frozenset(range(T.order)), blocked, backtrack, budget)
        else:
            phi = base.phi
            owners = {h for h in (reserved or {})}
            first = [p for p, h in phi.items() if h in owners]
            steps = _attachment_steps(T, phi, range(T.order), first)
            phi = _Grower(G, T, blocked, budget).run(phi, steps, backtrack)
    except EmbeddingFailure as exc:
        if strict:
            raise
        log.debug("extension failed: %s", exc)
        return None
    return Embedding.of(T, phi)


def embed_tree(G: Graph, T: TreePattern, forbidden: Iterable[Iterable[int]] = (), *,
               backtrack: bool = True, budget: int = BACKTRACK_BUDGET) -> Embedding | None:
    """A copy of ``T`` in ``G`` avoiding ``forbidden``, grown from a single vertex."""
    return extend_embedding(G, Embedding(T, ()), T, forbidden, backtrack=backtrack, budget=budget)


def available_degree(G: Graph, v: int, blocked: Iterable[Iterable[int]]) -> int:
    bl = {norm_edge(*e) for e in blocked}
    return sum(1 for u in G.neighbors(v) if norm_edge(u, v) not in bl)


def check_tree_copy(G: Graph, emb: Embedding, T: TreePattern) -> None:
    """Full soundness check: complete, injective, edge-preserving, pattern ``T``."""
    if emb.pattern != T:
        raise EmbeddingError("embedding pattern differs from the requested tree")
    if not emb.is_complete:
        raise EmbeddingError("embedding does not cover the whole tree")
    emb.check(G)
    if len(emb.image_edges) != T.order - 1:
        raise EmbeddingError("image edge count mismatch")


__all__ = [
    "BACKTRACK_BUDGET", "Embedding", "EmbeddingError", "EmbeddingFailure", "GraphError", "HypothesisError",
    "TreeError", "TreePattern", "available_degree", "check_tree_copy", "embed_tree", "embedding_from_edges",
    "enumerate_trees", "extend_embedding", "from_prufer", "greedy_embed_internal", "internal_degree_ok",
    "parse_parent_array", "parse_tree", "prufer_sequence", "tree_isomorphism",
]
