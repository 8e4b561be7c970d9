"""Multi-layered social network data model.

An ``Msn`` holds a node set, an ordered layer set and directed weighted
tuples ``(source, target, layer) -> weight``.  A ``Dsn`` is a list of
``Msn`` time frames sharing one node universe and one layer set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Hashable, Iterable, Mapping

from .errors import (
    DuplicateEdge,
    EmptyLog,
    InvalidParameter,
    SelfLoop,
    UnknownLayer,
    UnknownNode,
)

Node = str
Layer = str


def node_key(v):
    """Sort key putting integer-like ids in numeric order before other ids."""
    s = str(v)
    if s.lstrip("-").isdigit():
        return (0, int(s), s)
    return (1, 0, s)


class Msn:
    """Immutable multi-layered network.

    Adjacency is kept per node as ``{neighbour: {layer: weight}}`` in both
    directions so neighbourhood queries never scan the edge set.
    """

    __slots__ = ("_nodes", "_layers", "_edges", "_out", "_in", "_order")

    def __init__(self, nodes: Iterable[Node], layers: Iterable[Layer],
                 edges: Mapping[tuple, float]):
        self._nodes = frozenset(nodes)
        self._layers = tuple(sorted(set(layers), key=node_key))
        self._order = tuple(sorted(self._nodes, key=node_key))
        layer_set = set(self._layers)
        out = {v: {} for v in self._nodes}
        inc = {v: {} for v in self._nodes}
        clean = {}
        for (s, t, l), w in edges.items():
            if s == t:
                raise SelfLoop(f"self-loop on {s!r} in layer {l!r}")
            if s not in self._nodes:
                raise UnknownNode(s)
            if t not in self._nodes:
                raise UnknownNode(t)
            if l not in layer_set:
                raise UnknownLayer(l)
            w = float(w)
            clean[(s, t, l)] = w
            out[s].setdefault(t, {})[l] = w
            inc[t].setdefault(s, {})[l] = w
        self._edges = MappingProxyType(clean)
        self._out = out
        self._in = inc

    # basic accessors
    @property
    def nodes(self) -> frozenset:
        return self._nodes

    @property
    def layers(self) -> tuple:
        return self._layers

    @property
    def edges(self) -> Mapping[tuple, float]:
        return self._edges

    @property
    def ordered_nodes(self) -> tuple:
        return self._order

    def __len__(self):
        return len(self._nodes)

    def __eq__(self, other):
        if not isinstance(other, Msn):
            return NotImplemented
        return (self._nodes == other._nodes and self._layers == other._layers
                and dict(self._edges) == dict(other._edges))

    def __hash__(self):
        return hash((self._nodes, self._layers, frozenset(self._edges.items())))

    def __repr__(self):
        return (f"Msn(nodes={len(self._nodes)}, layers={len(self._layers)}, "
                f"edges={len(self._edges)})")

    def check_node(self, x):
        if x not in self._nodes:
            raise UnknownNode(x)

    def check_layer(self, l):
        if l not in self._layers:
            raise UnknownLayer(l)

    def weight(self, x, y, l) -> float:
        """w(x,y,l), zero when the tuple is absent."""
        return self._edges.get((x, y, l), 0.0)

    def has_edge(self, x, y, l=None) -> bool:
        if l is None:
            return y in self._out.get(x, {})
        return (x, y, l) in self._edges

    def out_links(self, x) -> Mapping[Node, Mapping[Layer, float]]:
        return self._out[x]

    def in_links(self, x) -> Mapping[Node, Mapping[Layer, float]]:
        return self._in[x]

    def neighbours(self, x) -> set:
        """Nodes linked with x in either direction on any layer."""
        return set(self._out[x]) | set(self._in[x])

    def layer_edges(self, l) -> dict:
        self.check_layer(l)
        return {(s, t): w for (s, t, ll), w in self._edges.items() if ll == l}

    def pair_count(self, l=None) -> int:
        """Number of unordered connected pairs, on one layer or on any layer."""
        pairs = set()
        for (s, t, ll) in self._edges:
            if l is None or ll == l:
                pairs.add(frozenset((s, t)))
        return len(pairs)


def load_msn(records: Iterable[tuple], nodes: Iterable[Node] | None = None,
             layers: Iterable[Layer] | None = None,
             undirected: bool = False) -> Msn:
    """Build an Msn from ``(source, target, layer, weight)`` records.

    ``nodes`` and ``layers`` add members that carry no edges.  With
    ``undirected`` every record also yields the reverse tuple.
    """
    edges: dict = {}
    node_set = set(nodes or ())
    layer_set = set(layers or ())
    for rec in records:
        s, t, l = rec[0], rec[1], rec[2]
        w = rec[3] if len(rec) > 3 else 1.0
        w = float(w)
        if not math.isfinite(w) or w < 0:
            raise InvalidParameter(f"weight must be finite and >= 0, got {w}")
        if s == t:
            raise SelfLoop(f"self-loop on {s!r} in layer {l!r}")
        pairs = [(s, t), (t, s)] if undirected else [(s, t)]
        for a, b in pairs:
            if (a, b, l) in edges:
                raise DuplicateEdge(f"duplicate edge ({a!r}, {b!r}, {l!r})")
            edges[(a, b, l)] = w
        node_set.update((s, t))
        layer_set.add(l)
    return Msn(node_set, layer_set, edges)


def layer_view(msn: Msn, l: Layer) -> Msn:
    """Single-layer network holding every edge of layer ``l``."""
    msn.check_layer(l)
    edges = {k: w for k, w in msn.edges.items() if k[2] == l}
    return Msn(msn.nodes, (l,), edges)


def induced_subgraph(msn: Msn, members: Iterable[Node]) -> Msn:
    """Sub-network on ``members`` keeping edges with both endpoints inside."""
    keep = set(members)
    for v in keep:
        msn.check_node(v)
    edges = {}
    for v in keep:
        for y, by_layer in msn.out_links(v).items():
            if y in keep:
                for l, w in by_layer.items():
                    edges[(v, y, l)] = w
    return Msn(keep, msn.layers, edges)


def flatten(msn: Msn) -> Msn:
    """Collapse all layers into one layer ``"1"`` summing weights."""
    edges: dict = {}
    for (s, t, _l), w in msn.edges.items():
        edges[(s, t, "1")] = edges.get((s, t, "1"), 0.0) + w
    return Msn(msn.nodes, ("1",), edges)


@dataclass(frozen=True)
class Dsn:
    """Ordered time frames over one node universe and one layer set."""

    frames: tuple
    window: int
    overlap: int
    starts: tuple = ()

    @property
    def layers(self):
        return self.frames[0].layers if self.frames else ()

    @property
    def nodes(self):
        return self.frames[0].nodes if self.frames else frozenset()

    def __len__(self):
        return len(self.frames)


def frame_bounds(k: int, window: int, overlap: int, origin: int = 0):
    start = origin + k * (window - overlap)
    return start, start + window


def load_dsn(events: Iterable[tuple], window: int, overlap: int = 0,
             origin: int | None = None, undirected: bool = False) -> Dsn:
    """Slice ``(source, target, layer, weight, timestamp)`` events into frames.

    Frame k covers ``[origin + k*(window-overlap), ... + window)``.  The origin
    defaults to the earliest timestamp.  Frames are added until the last
    event is covered; weights of repeated tuples inside a frame are summed.
    """
    if window <= 0:
        raise InvalidParameter("window must be positive")
    if not 0 <= overlap < window:
        raise InvalidParameter("overlap must satisfy 0 <= overlap < window")
    events = list(events)
    if not events:
        raise EmptyLog("event log is empty")
    step = window - overlap
    times = [int(e[4]) for e in events]
    if origin is None:
        origin = min(times)
    span = max(times) - origin + 1
    count = max(1, math.ceil((span - window) / step) + 1)
    universe = set()
    layers = set()
    buckets = [dict() for _ in range(count)]
    for (s, t, l, w, _ts), ts in zip(events, times):
        if s == t:
            raise SelfLoop(f"self-loop on {s!r} in layer {l!r}")
        w = float(w)
        if not math.isfinite(w) or w < 0:
            raise InvalidParameter(f"weight must be finite and >= 0, got {w}")
        universe.update((s, t))
        layers.add(l)
        rel = ts - origin
        if rel < 0:
            continue
        first = max(0, -(-(rel - window + 1) // step))
        last = min(count - 1, rel // step)
        pairs = [(s, t), (t, s)] if undirected else [(s, t)]
        for k in range(first, last + 1):
            for a, b in pairs:
                key = (a, b, l)
                buckets[k][key] = buckets[k].get(key, 0.0) + w
    frames = tuple(Msn(universe, layers, b) for b in buckets)
    starts = tuple(origin + k * step for k in range(count))
    return Dsn(frames, window, overlap, starts)


@dataclass(frozen=True)
class Group:
    members: frozenset
    id: Hashable = None
    frame: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        if not self.members:
            from .errors import EmptyGroup
            raise EmptyGroup("group must have at least one member")

    def __len__(self):
        return len(self.members)

    def __contains__(self, v):
        return v in self.members

    def __iter__(self):
        return iter(self.members)


@dataclass(frozen=True)
class Partition:
    """Groups plus the nodes left without a group."""

    groups: tuple = ()
    unassigned: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(self.groups))
        object.__setattr__(self, "unassigned", frozenset(self.unassigned))

    @property
    def nodes(self) -> frozenset:
        out = set(self.unassigned)
        for g in self.groups:
            out |= g.members
        return frozenset(out)

    def is_disjoint(self) -> bool:
        seen = set()
        for g in self.groups:
            if seen & g.members:
                return False
            seen |= g.members
        return not (seen & self.unassigned)

    def labels(self) -> dict:
        """Node -> group id; unassigned nodes are omitted."""
        out = {}
        for g in self.groups:
            for v in g.members:
                out[v] = g.id
        return out

    def group(self, gid) -> Group:
        for g in self.groups:
            if g.id == gid:
                return g
        raise KeyError(gid)

    @classmethod
    def from_labels(cls, labels: Mapping, unassigned_label=-1, frame=None):
        """Build from a node -> label map; ``unassigned_label`` marks no group."""
        members: dict = {}
        loose = set()
        for v, g in labels.items():
            if g == unassigned_label or g is None:
                loose.add(v)
            else:
                members.setdefault(g, set()).add(v)
        groups = [Group(m, gid, frame)
                  for gid, m in sorted(members.items(), key=lambda kv: node_key(kv[0]))]
        return cls(tuple(groups), frozenset(loose))
