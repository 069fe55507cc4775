"""Constructive search for a tree copy whose edge removal keeps 3-(edge-)connectivity.

The procedure keeps a pair ``(T', B)``: a copy ``T'`` of the pattern and a skeleton
``B`` living in ``G - E(T')``. While ``G - E(T')`` fails the connectivity test it
applies one improvement move, each of which strictly raises the potential
``(n(B), -|V(B)|)``:

* an outside vertex with four or more ``B``-neighbours in ``G - E(T')`` is attached
  to ``B``, or shortcuts the ear holding all of those neighbours;
* an ear chord present in ``G - E(T')`` shortcuts its ear;
* an outside vertex with four or more ``B``-neighbours in ``G`` gets four of those
  edges freed by re-embedding ``T'`` (or re-centring a star), and is then attached;
* with no subdivision vertices, a minimum-length 3-fan from an outside vertex is added;
* otherwise a shortest path from a subdivision vertex to ``B`` off its closed ear is added.

After the last two moves ``T'`` is re-embedded away from the grown skeleton when needed.
"""

from __future__ import annotations

import itertools
import logging
import warnings
from dataclasses import dataclass, field
from typing import Iterator

from .connectivity import Fan, connectivity_predicate, edge_connectivity_at_least, min_fan, vertex_connectivity_at_least
from .graph import Graph, encode_graph6, induced_subgraph, min_degree, norm_edge, parse_graph6, remove_edges
from .skeleton import (MoveRejected, Potential, Skeleton, attach_fan_move, attach_path_move, attach_vertex_move,
                       chord_shortcut_move, initial_skeleton, shortcut_ear_move)
from .trees import (Embedding, HypothesisError, TreePattern, check_tree_copy, embed_tree, extend_embedding,
                    greedy_embed_internal, parse_parent_array)

log = logging.getLogger(__name__)

VERTEX = "vertex"
EDGE = "edge"
MODES = (VERTEX, EDGE)

NO_MOVE = "no move applicable"
REEMBED_FAILED = "re-embedding failed"
BUDGET_EXHAUSTED = "budget exhausted"

ORACLE_FALLBACK_LIMIT = 12


class HypothesisWarning(UserWarning):
    pass


def hypotheses_hold(G: Graph, T: TreePattern, mode: str, k: int = 3) -> bool:
    """``G`` is ``k``-(edge-)connected with minimum degree at least ``k + m - 1``."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if G.n == 0 or min_degree(G) < k + T.order - 1:
        return False
    return (vertex_connectivity_at_least if mode == VERTEX else edge_connectivity_at_least)(G, k)


@dataclass(frozen=True)
class Step:
    move: str
    potential: Potential
    skeleton: Skeleton
    embedding: Embedding
    detail: str = ""


@dataclass
class SearchState:
    host: Graph
    pattern: TreePattern
    mode: str
    embedding: Embedding
    skeleton: Skeleton | None = None
    trace: list[Step] = field(default_factory=list)
    initial: Embedding | None = None
    budget: int | None = None

    def working_graph(self) -> Graph:
        return remove_edges(self.host, self.embedding.image_edges)

    def check(self) -> None:
        check_tree_copy(self.host, self.embedding, self.pattern)
        if self.skeleton is None:
            return
        used = self.embedding.image_edges
        for e in self.skeleton.edges:
            if e in used:
                raise AssertionError(f"skeleton edge {e} is used by the tree copy")
            if not self.host.has_edge(*e):
                raise AssertionError(f"skeleton edge {e} is not an edge of the host")
        pots = [s.potential for s in self.trace]
        if any(a >= b for a, b in zip(pots, pots[1:])):
            raise AssertionError("potential did not increase strictly along the trace")


@dataclass
class FailureDiagnostic:
    state: SearchState
    reason: str
    detail: str = ""

    def bundle(self) -> str:
        """Self-contained text sufficient to replay the failing run."""
        st = self.state
        lines = ["# keeptree failure bundle",
                 f"reason: {self.reason}",
                 f"detail: {self.detail}",
                 f"mode: {st.mode}",
                 f"graph6: {encode_graph6(st.host)}",
                 f"tree: {st.pattern.to_parent_array()}"]
        if st.budget is not None:
            lines.append(f"budget: {st.budget}")
        if st.initial is not None:
            lines.append("initial: " + " ".join(f"{p}:{h}" for p, h in st.initial.mapping))
        lines.append("embedding: " + " ".join(f"{u}-{v}" for u, v in sorted(st.embedding.image_edges)))
        lines.append("skeleton:")
        if st.skeleton is not None:
            lines += ["  " + ln for ln in st.skeleton.to_text().splitlines()]
        lines.append("trace:")
        for i, s in enumerate(st.trace):
            lines.append(f"  {i} {s.move} n={s.potential.n} size={-s.potential.neg_size} {s.detail}".rstrip())
        return "\n".join(lines) + "\n"


@dataclass
class SearchResult:
    state: SearchState
    embedding: Embedding | None
    failure: FailureDiagnostic | None = None
    fallback: str | None = None

    @property
    def success(self) -> bool:
        return self.embedding is not None


@dataclass(frozen=True)
class Claim1Hit:
    """Outside vertex ``w`` with at least four ``B``-neighbours in the working graph.

    ``ear`` is set when one closed ear holds all of them; ``p`` and ``q`` are then the
    0-based positions of the first and last neighbour along it.
    """

    w: int
    neighbors: frozenset[int]
    ear: tuple[int, ...] | None = None
    p: int | None = None
    q: int | None = None

    @property
    def on_ear(self) -> bool:
        return self.ear is not None


def _classify(H: Graph, B: Skeleton, w: int) -> Claim1Hit | None:
    nb = H.neighbors(w) & B.vertices
    if len(nb) < 4:
        return None
    ear = B.common_ear(nb)
    if ear is None:
        return Claim1Hit(w, frozenset(nb))
    pos = [i for i, v in enumerate(ear) if v in nb]
    return Claim1Hit(w, frozenset(nb), ear, pos[0], pos[-1])


def _claim1_hits(H: Graph, B: Skeleton) -> Iterator[Claim1Hit]:
    for w in H.vertices:
        if w not in B.vertices:
            hit = _classify(H, B, w)
            if hit is not None:
                yield hit


def claim1_scan(G: Graph, state: SearchState) -> Claim1Hit | None:
    """First outside vertex with four or more skeleton neighbours in ``G - E(T')``."""
    H = remove_edges(G, state.embedding.image_edges)
    return next(_claim1_hits(H, state.skeleton), None)


def _claim1_move(H: Graph, B: Skeleton, hit: Claim1Hit) -> Skeleton:
    if hit.on_ear:
        return shortcut_ear_move(B, hit.w, hit.ear, hit.p, hit.q, host=H)
    return attach_vertex_move(B, hit.w, hit.neighbors, host=H)


def _chords(H: Graph, B: Skeleton) -> Iterator[tuple[tuple[int, ...], int, int]]:
    found = []
    for ear in B.ears:
        for i, j in itertools.combinations(range(len(ear)), 2):
            if j - i >= 2 and H.has_edge(ear[i], ear[j]):
                found.append((-(j - i), ear, i, j))
    for _, ear, i, j in sorted(found):
        yield ear, i, j


def free_edges_reembed(G: Graph, T: TreePattern, B: Skeleton, x: int, count: int = 4) -> Embedding | None:
    """Copy of a non-star ``T`` in ``G - E(B)`` leaving ``count`` edges from ``x`` into ``B`` unused.

    The internal tree goes into ``G - V(B)``, then leaves are added with the chosen
    ``x``-to-``B`` edges reserved.
    """
    if T.is_star:
        raise HypothesisError("stars are handled by re-centring, not by re-embedding")
    targets = sorted(G.neighbors(x) & B.vertices)
    if x in B.vertices or len(targets) < count:
        raise HypothesisError(f"vertex {x} needs {count} neighbours in the skeleton from outside it")
    designated = [norm_edge(x, b) for b in targets[:count]]
    outside = [v for v in G.vertices if v not in B.vertices]
    inner = greedy_embed_internal(induced_subgraph(G, outside), T)
    if inner is None:
        return None
    return extend_embedding(G, inner, T, forbidden=B.edges, reserved={x: designated})


@dataclass(frozen=True)
class StarOutcome:
    embedding: Embedding
    terminal: bool


def _star_at(T: TreePattern, center: int, leaves) -> Embedding:
    c = max(range(T.order), key=lambda v: (T.degree(v), -v))
    others = [v for v in range(T.order) if v != c]
    return Embedding.of(T, {c: center, **dict(zip(others, leaves))})


def star_case(G: Graph, T: TreePattern, state: SearchState, x: int, *, attempts: int = 200) -> StarOutcome | None:
    """Star pattern: re-centre away from ``B`` and ``x``, or centre at ``x`` when nothing else is left.

    A terminal outcome has been verified with the connectivity predicate; ``None``
    means every tried centring at ``x`` failed verification.
    """
    if not T.is_star:
        raise HypothesisError("pattern is not a star")
    B = state.skeleton
    if x in B.vertices or len(G.neighbors(x) & B.vertices) < 4:
        raise HypothesisError(f"vertex {x} needs four neighbours in the skeleton from outside it")
    m = T.order
    rest = [v for v in G.vertices if v not in B.vertices and v != x]
    if rest:
        y = rest[0]
        return StarOutcome(_star_at(T, y, sorted(G.neighbors(y))[:m - 1]), False)
    pred = connectivity_predicate(state.mode, 3)
    options = []
    cur = state.embedding
    c = max(range(T.order), key=lambda v: (T.degree(v), -v))
    if cur.phi.get(c) == x:
        options.append(cur)
    for leaves in itertools.islice(itertools.combinations(sorted(G.neighbors(x)), m - 1), attempts):
        options.append(_star_at(T, x, leaves))
    for emb in options:
        if pred(remove_edges(G, emb.image_edges)):
            return StarOutcome(emb, True)
    if hypotheses_hold(G, T, state.mode):
        log.error("star centred at %s fails verification under the hypotheses", x)
    return None


def bridging_path_search(G: Graph, state: SearchState, graph: Graph | None = None) -> tuple[int, ...] | None:
    """Shortest path from a subdivision vertex ``u`` to a vertex of ``B`` off ``u``'s closed ear,
    with interior outside ``B``. Searches ``G - E(T')`` unless ``graph`` is given."""
    return next(_bridging_paths(state.skeleton, graph if graph is not None else state.working_graph()), None)


def _bridging_paths(B: Skeleton, W: Graph) -> Iterator[tuple[int, ...]]:
    if not B.subdivision:
        raise HypothesisError("skeleton has no subdivision vertices")
    found = []
    for u in sorted(B.subdivision):
        blocked = B.closed_ear(u)
        prev = {u: None}
        frontier = [u]
        hit = None
        while frontier and hit is None:
            nxt = []
            for v in frontier:
                for z in sorted(W.neighbors(v)):
                    if z in prev:
                        continue
                    if z in B.vertices:
                        if z not in blocked:
                            prev[z] = v
                            hit = z
                            break
                        continue
                    prev[z] = v
                    nxt.append(z)
                if hit is not None:
                    break
            frontier = nxt
        if hit is None:
            continue
        path = [hit]
        while prev[path[-1]] is not None:
            path.append(prev[path[-1]])
        path.reverse()
        found.append((len(path), tuple(path)))
    for _, path in sorted(found):
        yield path


def _fans(B: Skeleton, W: Graph) -> Iterator[Fan]:
    found = []
    for u in W.vertices:
        if u in B.vertices:
            continue
        fan = min_fan(W, u, B.vertices, 3)
        if fan is not None:
            found.append((fan.total_order, u, fan))
    for _, _, fan in sorted(found, key=lambda t: t[:2]):
        yield fan


def reembed_avoiding(G: Graph, T: TreePattern, B: Skeleton, current: Embedding | None = None) -> Embedding | None:
    """Copy of ``T`` edge-disjoint from ``B``: keep ``current`` if it already is, else
    internal tree in ``G - V(B)`` plus leaves in ``G - E(B)``, else any copy in ``G - E(B)``."""
    if current is not None and not (current.image_edges & B.edges):
        return current
    outside = [v for v in G.vertices if v not in B.vertices]
    if outside:
        inner = greedy_embed_internal(induced_subgraph(G, outside), T)
        if inner is not None:
            full = extend_embedding(G, inner, T, forbidden=B.edges)
            if full is not None:
                return full
    return embed_tree(G, T, forbidden=B.edges)


@dataclass
class _Move:
    name: str
    embedding: Embedding
    skeleton: Skeleton
    detail: str = ""
    terminal: bool = False


def _next_move(G: Graph, T: TreePattern, state: SearchState) -> _Move | None:
    emb, B = state.embedding, state.skeleton
    H = state.working_graph()

    for hit in _claim1_hits(H, B):
        try:
            nb = _claim1_move(H, B, hit)
        except MoveRejected as exc:
            log.debug("attach move at %s rejected: %s", hit.w, exc)
            continue
        return _Move("shortcut-ear" if hit.on_ear else "attach-vertex", emb, nb, f"w={hit.w}")

    for ear, i, j in _chords(H, B):
        try:
            nb = chord_shortcut_move(B, ear, i, j, host=H)
        except MoveRejected:
            continue
        return _Move("chord-shortcut", emb, nb, f"chord={ear[i]}-{ear[j]}")

    for x in G.vertices:
        if x in B.vertices or len(G.neighbors(x) & B.vertices) < 4:
            continue
        if T.is_star:
            out = star_case(G, T, state, x)
            if out is None:
                continue
            if out.terminal:
                return _Move("star-center", out.embedding, B, f"x={x}", terminal=True)
            new_emb, name = out.embedding, "recenter-star"
        else:
            new_emb, name = free_edges_reembed(G, T, B, x), "free-edges"
        if new_emb is None:
            continue
        H2 = remove_edges(G, new_emb.image_edges)
        hit = _classify(H2, B, x)
        if hit is None:
            continue
        try:
            nb = _claim1_move(H2, B, hit)
        except MoveRejected:
            continue
        return _Move(name + ("+shortcut-ear" if hit.on_ear else "+attach-vertex"), new_emb, nb, f"x={x}")

    if not B.subdivision:
        for W in (H, G):
            for fan in _fans(B, W):
                try:
                    nb = attach_fan_move(B, fan, host=W)
                except MoveRejected:
                    continue
                new_emb = reembed_avoiding(G, T, nb, emb)
                if new_emb is None:
                    continue
                return _Move("attach-fan", new_emb, nb, f"u={fan.center} total={fan.total_order}")
    else:
        for W in (H, G):
            for path in _bridging_paths(B, W):
                try:
                    nb = attach_path_move(B, path, host=W)
                except MoveRejected:
                    continue
                new_emb = reembed_avoiding(G, T, nb, emb)
                if new_emb is None:
                    continue
                return _Move("attach-path", new_emb, nb, "P=" + "-".join(map(str, path)))
    return None


def run_search(G: Graph, T: TreePattern, mode: str = VERTEX, *, initial: Embedding | None = None,
               max_steps: int | None = None) -> SearchResult:
    """The improvement loop alone (no fallback). Returns the final state and, on success, ``T'``."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    pred = connectivity_predicate(mode, 3)
    emb = initial if initial is not None else embed_tree(G, T)
    if emb is None:
        state = SearchState(G, T, mode, Embedding(T, ()), None, [], initial)
        return SearchResult(state, None, FailureDiagnostic(state, REEMBED_FAILED, "no initial tree copy"))
    check_tree_copy(G, emb, T)
    state = SearchState(G, T, mode, emb, None, [], initial)
    if pred(state.working_graph()):
        return SearchResult(state, emb)
    B = initial_skeleton(state.working_graph())
    if B is None:
        return SearchResult(state, None, FailureDiagnostic(state, NO_MOVE, "no initial skeleton in G - E(T')"))
    state.skeleton = B
    state.trace.append(Step("initial-skeleton", B.potential(), B, emb))
    state.check()
    budget = G.n * G.n if max_steps is None else max_steps
    state.budget = max_steps
    for _ in range(budget):
        move = _next_move(G, T, state)
        if move is None:
            detail = "closure: V(B) = V(G)" if state.skeleton.vertices == frozenset(G.vertices) else ""
            return SearchResult(state, None, FailureDiagnostic(state, NO_MOVE, detail))
        if move.terminal:
            state.embedding = move.embedding
            state.check()
            if pred(state.working_graph()):
                return SearchResult(state, move.embedding)
            return SearchResult(state, None, FailureDiagnostic(state, NO_MOVE, "star centre failed verification"))
        if not move.skeleton.potential() > state.skeleton.potential():
            raise AssertionError(f"move {move.name} did not raise the potential")
        state.embedding, state.skeleton = move.embedding, move.skeleton
        state.trace.append(Step(move.name, move.skeleton.potential(), move.skeleton, move.embedding, move.detail))
        state.check()
        if pred(state.working_graph()):
            return SearchResult(state, state.embedding)
    return SearchResult(state, None, FailureDiagnostic(state, BUDGET_EXHAUSTED, f"{budget} steps"))


def search_with_fallback(G: Graph, T: TreePattern, mode: str = VERTEX, *, initial: Embedding | None = None,
                         oracle_limit: int = ORACLE_FALLBACK_LIMIT, max_steps: int | None = None) -> SearchResult:
    """:func:`run_search`, then restarts from other initial copies, then the exhaustive oracle on small hosts."""
    if not hypotheses_hold(G, T, mode):
        warnings.warn(f"hypotheses fail for this instance ({mode} mode); no guarantee applies",
                      HypothesisWarning, stacklevel=3)
    res = run_search(G, T, mode, initial=initial, max_steps=max_steps)
    if res.success:
        return res
    pred = connectivity_predicate(mode, 3)
    c = T.centroids()[0]
    for root in G.vertices:
        start = extend_embedding(G, Embedding.of(T, {c: root}), T)
        if start is None:
            continue
        alt = run_search(G, T, mode, initial=start, max_steps=max_steps)
        if alt.success:
            log.info("loop failed (%s); restart from root %s succeeded", res.failure.reason, root)
            return SearchResult(alt.state, alt.embedding, res.failure, f"restart:{root}")
    if G.n <= oracle_limit:
        from .oracle import oracle_find

        found = oracle_find(G, T, mode)
        if found is not None and pred(remove_edges(G, found.image_edges)):
            log.info("loop failed (%s); exhaustive oracle succeeded", res.failure.reason)
            return SearchResult(res.state, found, res.failure, "oracle")
    return res


def find_removable_tree(G: Graph, T: TreePattern, mode: str = VERTEX, *,
                        initial: Embedding | None = None, max_steps: int | None = None) -> Embedding | FailureDiagnostic:
    """A copy ``T'`` of ``T`` in ``G`` such that ``G - E(T')`` is 3-connected (vertex mode)
    or 3-edge-connected (edge mode), re-verified before it is returned."""
    res = search_with_fallback(G, T, mode, initial=initial, max_steps=max_steps)
    if not res.success:
        return res.failure
    emb = res.embedding
    check_tree_copy(G, emb, T)
    if not connectivity_predicate(mode, 3)(remove_edges(G, emb.image_edges)):
        raise AssertionError("unverified success")
    return emb


def parse_bundle(text: str) -> dict:
    fields: dict = {}
    for line in text.splitlines():
        if ": " in line and not line.startswith(" "):
            key, val = line.split(": ", 1)
            fields[key.strip()] = val.strip()
    G = parse_graph6(fields["graph6"])
    T = parse_parent_array(fields["tree"])
    initial = None
    if "initial" in fields:
        initial = Embedding.of(T, {int(a): int(b) for a, b in (tok.split(":") for tok in fields["initial"].split())})
    budget = int(fields["budget"]) if "budget" in fields else None
    return {"graph": G, "tree": T, "mode": fields["mode"], "initial": initial, "reason": fields.get("reason"),
            "budget": budget}


def replay_bundle(text: str) -> SearchResult:
    """Re-run the loop recorded in a failure bundle."""
    b = parse_bundle(text)
    return run_search(b["graph"], b["tree"], b["mode"], initial=b["initial"], max_steps=b["budget"])
