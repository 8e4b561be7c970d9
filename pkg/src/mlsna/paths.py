"""Multi-layered distances, multi-layered edges and shortest paths.

The distance of an ordered pair is its strangeness ``1 - sum_l w / |L|``.
Two single-source searches are offered: DAP runs Dijkstra over the
pre-filtered multi-layered edge graph, MDA expands ``MN_out(v, alpha)``
lazily while relaxing.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .errors import InvalidParameter, WeightOutOfRange
from .graph import Msn, node_key
from .measures import (
    NeighbourhoodMode,
    betweenness_scores,
    check_alpha,
    closeness_from_lengths,
    multi_neighbourhood,
)

INF = float("inf")
MODES = ("by_layers", "by_distance", "both")


@dataclass(frozen=True)
class MultiEdge:
    source: str
    target: str
    distance: float
    layer_count: int


@dataclass
class PathResult:
    source: str
    lengths: dict = field(default_factory=dict)
    predecessors: dict = field(default_factory=dict)

    def path_to(self, target) -> list:
        if self.lengths.get(target, INF) == INF:
            return []
        path = [target]
        while path[-1] != self.source:
            path.append(self.predecessors[path[-1]])
        return path[::-1]


def check_weights(msn: Msn):
    for key, w in msn.edges.items():
        if not 0.0 <= w <= 1.0:
            raise WeightOutOfRange(f"weight {w} of {key} outside [0, 1]")


def normalize_weights(msn: Msn) -> Msn:
    """Divide every weight by the largest one so all lie in [0, 1]."""
    top = max(msn.edges.values(), default=0.0)
    if top <= 1.0:
        return msn
    return Msn(msn.nodes, msn.layers, {k: w / top for k, w in msn.edges.items()})


def _distance(msn: Msn, by_layer: dict, invert: bool) -> float:
    total = 0.0
    for w in by_layer.values():
        if not 0.0 <= w <= 1.0:
            raise WeightOutOfRange(f"weight {w} outside [0, 1]")
        total += w
    share = total / len(msn.layers)
    return 1.0 - share if invert else share


def strangeness(msn: Msn, x, y, invert: bool = True) -> float:
    """d(x, y); missing tuples count as weight 0."""
    msn.check_node(x)
    msn.check_node(y)
    return _distance(msn, msn.out_links(x).get(y, {}), invert)


def _check_params(msn, mode, alpha, beta):
    if mode not in MODES:
        raise InvalidParameter(f"unknown multi-edge mode {mode!r}")
    if mode in ("by_layers", "both"):
        check_alpha(msn, alpha)
    if mode in ("by_distance", "both") and not 0.0 <= beta <= 1.0:
        raise InvalidParameter(f"beta={beta} outside [0, 1]")


def _qualifies(mode, count, dist, alpha, beta):
    if mode == "by_layers":
        return count >= alpha
    if mode == "by_distance":
        return dist <= beta
    return count >= alpha and dist <= beta


def out_multi_edges(msn: Msn, x, mode="both", alpha=1, beta=1.0, invert=True) -> list:
    """Multi-layered edges leaving x."""
    out = []
    for y, ls in msn.out_links(x).items():
        d = _distance(msn, ls, invert)
        if _qualifies(mode, len(ls), d, alpha, beta):
            out.append(MultiEdge(x, y, d, len(ls)))
    return out


def multi_edges(msn: Msn, mode: str = "both", alpha: int = 1, beta: float = 1.0,
                invert: bool = True) -> set:
    """All directed multi-layered edges passing the mode's thresholds."""
    _check_params(msn, mode, alpha, beta)
    out = set()
    for x in msn.nodes:
        out.update(out_multi_edges(msn, x, mode, alpha, beta, invert))
    return out


def _dijkstra(msn: Msn, source, succ) -> PathResult:
    lengths = {v: INF for v in msn.nodes}
    lengths[source] = 0.0
    preds = {}
    done = set()
    heap = [(0.0, node_key(source), source)]
    while heap:
        d, _, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        for w, c in succ(v):
            nd = d + c
            if nd < lengths[w]:
                lengths[w] = nd
                preds[w] = v
                heapq.heappush(heap, (nd, node_key(w), w))
    return PathResult(source, lengths, preds)


def shortest_paths_dap(msn: Msn, source, alpha: int = 1, beta: float = 1.0,
                       invert: bool = True, materialize: bool = False) -> PathResult:
    """Dijkstra over the multi-layered edge graph ME(., ., alpha, beta).

    With ``materialize`` the whole edge graph is built first; otherwise
    each node's qualifying edges are computed when it is settled.  Both
    give the same result.
    """
    msn.check_node(source)
    _check_params(msn, "both", alpha, beta)
    if materialize:
        table = {v: [] for v in msn.nodes}
        for e in multi_edges(msn, "both", alpha, beta, invert):
            table[e.source].append((e.target, e.distance))
        for v in table:
            table[v].sort(key=lambda t: node_key(t[0]))
        succ = table.__getitem__
    else:
        def succ(v):
            es = out_multi_edges(msn, v, "both", alpha, beta, invert)
            return sorted(((e.target, e.distance) for e in es), key=lambda t: node_key(t[0]))
    return _dijkstra(msn, source, succ)


def shortest_paths_mda(msn: Msn, source, alpha: int = 1, invert: bool = True) -> PathResult:
    """Multi-layered Dijkstra relaxing through MN_out(v, alpha)."""
    msn.check_node(source)
    check_alpha(msn, alpha)

    def succ(v):
        outs = msn.out_links(v)
        for w in sorted(multi_neighbourhood(msn, v, alpha, NeighbourhoodMode.OUT), key=node_key):
            yield w, _distance(msn, outs[w], invert)

    return _dijkstra(msn, source, succ)


def multilayer_closeness(msn: Msn, x, alpha: int = 1, beta: float = 1.0,
                         normalized: bool = True, invert: bool = True) -> float:
    res = shortest_paths_dap(msn, x, alpha, beta, invert)
    return closeness_from_lengths(res.lengths, x, len(msn.nodes), normalized)


def multilayer_betweenness(msn: Msn, alpha: int = 1, beta: float = 1.0,
                           normalized: bool = True, conventional: bool = False,
                           invert: bool = True) -> dict:
    _check_params(msn, "both", alpha, beta)

    def succ(v):
        return [(e.target, e.distance) for e in out_multi_edges(msn, v, "both", alpha, beta, invert)]

    return betweenness_scores(msn.nodes, succ, normalized, conventional)
