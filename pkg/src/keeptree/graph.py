"""Simple undirected graphs, subgraph algebra and text I/O (graph6, edge lists)."""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

Edge = tuple[int, int]


class GraphError(ValueError):
    pass


class GraphFormatError(GraphError):
    """Malformed graph text. ``offset`` is a byte offset (graph6) or a 1-based line number."""

    def __init__(self, message: str, offset: int | None = None, line: int | None = None):
        self.offset = offset
        self.line = line
        where = ""
        if offset is not None:
            where = f" at byte {offset}"
        elif line is not None:
            where = f" at line {line}"
        super().__init__(message + where)


def norm_edge(u: int, v: int) -> Edge:
    if u == v:
        raise GraphError(f"self-loop at vertex {u}")
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable simple graph on an arbitrary set of integer vertices.

    Graphs built from external input use vertices ``0..n-1``; derived subgraphs
    keep the identifiers of their parent.
    """

    __slots__ = ("_adj", "_m")

    def __init__(self, adjacency: Mapping[int, Iterable[int]]):
        adj = {int(v): frozenset(int(u) for u in nb) for v, nb in adjacency.items()}
        half = 0
        for v, nb in adj.items():
            if v in nb:
                raise GraphError(f"self-loop at vertex {v}")
            for u in nb:
                other = adj.get(u)
                if other is None:
                    raise GraphError(f"edge {v}-{u} leaves the vertex set")
                if v not in other:
                    raise GraphError(f"adjacency not symmetric for {v}-{u}")
            half += len(nb)
        self._adj = adj
        self._m = half // 2

    @classmethod
    def from_edges(cls, vertices: int | Iterable[int], edges: Iterable[Iterable[int]]) -> "Graph":
        verts = range(vertices) if isinstance(vertices, int) else vertices
        adj: dict[int, set[int]] = {int(v): set() for v in verts}
        for e in edges:
            u, v = e
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if u not in adj or v not in adj:
                raise GraphError(f"edge {u}-{v} leaves the vertex set")
            if v in adj[u]:
                raise GraphError(f"parallel edge {u}-{v}")
            adj[u].add(v)
            adj[v].add(u)
        return cls(adj)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls({v: [u for u in range(n) if u != v] for v in range(n)})

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def petersen(cls) -> "Graph":
        outer = [(i, (i + 1) % 5) for i in range(5)]
        spokes = [(i, i + 5) for i in range(5)]
        inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
        return cls.from_edges(10, outer + spokes + inner)

    @classmethod
    def hypercube(cls, d: int) -> "Graph":
        n = 1 << d
        return cls.from_edges(n, [(v, v ^ (1 << b)) for v in range(n) for b in range(d) if v < v ^ (1 << b)])

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self._adj))

    @property
    def n(self) -> int:
        return len(self._adj)

    @property
    def m(self) -> int:
        return self._m

    def __len__(self) -> int:
        return len(self._adj)

    def __contains__(self, v: object) -> bool:
        return v in self._adj

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self._adj))

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        nb = self._adj.get(u)
        return nb is not None and v in nb

    def edges(self) -> list[Edge]:
        return sorted((v, u) for v, nb in self._adj.items() for u in nb if v < u)

    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges())

    def adjacency(self) -> dict[int, frozenset[int]]:
        return dict(self._adj)

    def degree_sequence(self) -> tuple[int, ...]:
        return tuple(len(self._adj[v]) for v in sorted(self._adj))

    def is_complete(self) -> bool:
        n = len(self._adj)
        return all(len(nb) == n - 1 for nb in self._adj.values())

    def is_connected(self) -> bool:
        if not self._adj:
            return True
        start = next(iter(self._adj))
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for u in self._adj[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == len(self._adj)

    def components(self) -> list[frozenset[int]]:
        seen: set[int] = set()
        out = []
        for s in sorted(self._adj):
            if s in seen:
                continue
            comp = {s}
            stack = [s]
            while stack:
                v = stack.pop()
                for u in self._adj[v]:
                    if u not in comp:
                        comp.add(u)
                        stack.append(u)
            seen |= comp
            out.append(frozenset(comp))
        return out

    def relabeled(self) -> "Graph":
        """Copy with vertices renamed ``0..n-1`` in increasing order."""
        index = {v: i for i, v in enumerate(sorted(self._adj))}
        return Graph({index[v]: [index[u] for u in nb] for v, nb in self._adj.items()})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self._adj == other._adj

    def __hash__(self) -> int:
        return hash((frozenset(self._adj), self.edge_set()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def __getstate__(self):
        return {v: sorted(nb) for v, nb in self._adj.items()}

    def __setstate__(self, state):
        self._adj = {v: frozenset(nb) for v, nb in state.items()}
        self._m = sum(len(nb) for nb in self._adj.values()) // 2


def remove_edges(G: Graph, F: Iterable[Iterable[int]]) -> Graph:
    """``G - F``; every edge of ``F`` must be an edge of ``G``."""
    adj = {v: set(nb) for v, nb in G.adjacency().items()}
    for e in F:
        u, v = e
        if not G.has_edge(u, v):
            raise GraphError(f"{u}-{v} is not an edge of the graph")
        adj[u].discard(v)
        adj[v].discard(u)
    return Graph(adj)


def add_edges(G: Graph, F: Iterable[Iterable[int]]) -> Graph:
    adj = {v: set(nb) for v, nb in G.adjacency().items()}
    for e in F:
        u, v = e
        if u == v or u not in adj or v not in adj:
            raise GraphError(f"cannot add edge {u}-{v}")
        adj[u].add(v)
        adj[v].add(u)
    return Graph(adj)


def induced_subgraph(G: Graph, U: Iterable[int]) -> Graph:
    keep = frozenset(U)
    unknown = [v for v in keep if v not in G]
    if unknown:
        raise GraphError(f"unknown vertices {sorted(unknown)}")
    return Graph({v: G.neighbors(v) & keep for v in keep})


def remove_vertices(G: Graph, U: Iterable[int]) -> Graph:
    drop = frozenset(U)
    return induced_subgraph(G, [v for v in G.vertices if v not in drop])


def min_degree(G: Graph) -> int:
    if G.n == 0:
        raise GraphError("minimum degree of the empty graph is undefined")
    return min(G.degree(v) for v in G.vertices)


def max_degree(G: Graph) -> int:
    if G.n == 0:
        raise GraphError("maximum degree of the empty graph is undefined")
    return max(G.degree(v) for v in G.vertices)


def edges_between(G: Graph, V1: Iterable[int], V2: Iterable[int]) -> frozenset[Edge]:
    """The edge set ``[V1, V2]_G``."""
    a, b = frozenset(V1), frozenset(V2)
    return frozenset(norm_edge(u, v) for u in a for v in G.neighbors(u) if v in b)


# ---------------------------------------------------------------- graph6

_G6_HEADER = ">>graph6<<"


def _encode_n(n: int) -> str:
    if n < 0:
        raise GraphError("negative order")
    if n <= 62:
        return chr(63 + n)
    if n <= 258047:
        return "~" + "".join(chr(63 + ((n >> s) & 63)) for s in (12, 6, 0))
    if n <= 68719476735:
        return "~~" + "".join(chr(63 + ((n >> s) & 63)) for s in (30, 24, 18, 12, 6, 0))
    raise GraphError("order too large for graph6")


def encode_graph6(G: Graph) -> str:
    """graph6 word for ``G``; vertices are taken in increasing order."""
    order = G.vertices
    n = len(order)
    bits = []
    for j in range(1, n):
        for i in range(j):
            bits.append(1 if G.has_edge(order[i], order[j]) else 0)
    bits.extend([0] * (-len(bits) % 6))
    out = [_encode_n(n)]
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k:k + 6]:
            val = (val << 1) | b
        out.append(chr(63 + val))
    return "".join(out)


def parse_graph6(text: str) -> Graph:
    """Decode one graph6 word. Errors carry the byte offset of the offending character."""
    word = text.strip("\r\n")
    base = 0
    if word.startswith(_G6_HEADER):
        word = word[len(_G6_HEADER):]
        base = len(_G6_HEADER)
    if not word:
        raise GraphFormatError("empty graph6 word", offset=base)
    if word[0] == ":" or word[0] == ";":
        raise GraphFormatError("sparse6/incremental formats are not supported", offset=base)
    for i, ch in enumerate(word):
        if not 63 <= ord(ch) <= 126:
            raise GraphFormatError(f"character {ch!r} outside range 63..126", offset=base + i)
    vals = [ord(ch) - 63 for ch in word]
    if vals[0] < 63:
        n, pos = vals[0], 1
    elif len(vals) >= 2 and vals[1] < 63:
        if len(vals) < 4:
            raise GraphFormatError("truncated order field", offset=base + len(vals))
        n = (vals[1] << 12) | (vals[2] << 6) | vals[3]
        pos = 4
        if n <= 62:
            raise GraphFormatError("non-canonical order field", offset=base)
    else:
        if len(vals) < 8:
            raise GraphFormatError("truncated order field", offset=base + len(vals))
        n = 0
        for v in vals[2:8]:
            n = (n << 6) | v
        pos = 8
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    payload = vals[pos:]
    if len(payload) != need:
        off = base + pos + min(len(payload), need)
        raise GraphFormatError(f"expected {need} payload characters for n={n}, got {len(payload)}", offset=off)
    pad = need * 6 - nbits
    if pad and payload[-1] & ((1 << pad) - 1):
        raise GraphFormatError("nonzero padding bits", offset=base + len(vals) - 1)
    adj: dict[int, set[int]] = {v: set() for v in range(n)}
    k = 0
    for j in range(1, n):
        for i in range(j):
            if (payload[k // 6] >> (5 - k % 6)) & 1:
                adj[i].add(j)
                adj[j].add(i)
            k += 1
    return Graph(adj)


# ---------------------------------------------------------------- edge lists

def format_edge_list(G: Graph) -> str:
    g = G if G.vertices == tuple(range(G.n)) else G.relabeled()
    lines = [f"{g.n} {g.m}"]
    lines += [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> Graph:
    """Parse ``"n m"`` followed by ``m`` lines ``"u v"``; ``#`` starts a comment."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line))
    if not rows:
        raise GraphFormatError("empty edge list", line=1)

    def ints(lineno: int, line: str) -> tuple[int, int]:
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"expected two integers, got {line!r}", line=lineno)
        try:
            return int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"expected two integers, got {line!r}", line=lineno) from None

    n, m = ints(*rows[0])
    if n < 0 or m < 0:
        raise GraphFormatError("negative header values", line=rows[0][0])
    body = rows[1:]
    if len(body) != m:
        raise GraphFormatError(f"header announces {m} edges, found {len(body)}", line=rows[0][0])
    adj: dict[int, set[int]] = {v: set() for v in range(n)}
    for lineno, line in body:
        u, v = ints(lineno, line)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"vertex out of range in {line!r}", line=lineno)
        if u == v:
            raise GraphFormatError(f"self-loop {line!r}", line=lineno)
        if v in adj[u]:
            raise GraphFormatError(f"parallel edge {line!r}", line=lineno)
        adj[u].add(v)
        adj[v].add(u)
    return Graph(adj)


def parse_graph(text: str) -> Graph:
    """Edge list if the first meaningful line holds two integers, graph6 otherwise."""
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if len(line.split()) == 2:
            return parse_edge_list(text)
        return parse_graph6(line)
    raise GraphFormatError("no graph found", line=1)


def read_graph6_lines(text: str) -> Iterator[tuple[int, Graph | GraphFormatError]]:
    """Yield ``(line number, graph or error)`` for each nonblank line of a graph6 corpus."""
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        try:
            yield lineno, parse_graph6(line)
        except GraphFormatError as exc:
            exc.line = lineno
            yield lineno, exc
