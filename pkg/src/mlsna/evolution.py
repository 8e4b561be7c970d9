"""Group evolution discovery (GED).

Groups in consecutive frames are compared through the inclusion measure
(share of members times share of member importance), and every pair of
groups receives at most one event.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum

from .errors import EmptyGroup, FrameMismatch, InvalidParameter
from .graph import Dsn, Group, Msn, Partition, induced_subgraph, node_key
from .measures import social_position

log = logging.getLogger(__name__)

CONTINUING = "continuing"
SHRINKING = "shrinking"
GROWING = "growing"
SPLITTING = "splitting"
MERGING = "merging"
DISSOLVING = "dissolving"
FORMING = "forming"
EVENT_KINDS = (CONTINUING, SHRINKING, GROWING, SPLITTING, MERGING, DISSOLVING, FORMING)


class Importance(str, Enum):
    SP = "sp"
    DEGREE = "degree"
    NONE = "none"


@dataclass(frozen=True)
class ImportanceSource:
    kind: Importance = Importance.SP
    epsilon: float = 0.85
    tol: float = 1e-6

    @classmethod
    def of(cls, value) -> "ImportanceSource":
        if isinstance(value, ImportanceSource):
            return value
        return cls(Importance(value))


@dataclass(frozen=True)
class EvolutionEvent:
    frame_i: int
    group_i: object
    frame_j: int
    group_j: object
    kind: str
    inclusion_fwd: float
    inclusion_bwd: float


def node_importance(net: Msn | None, members, importance=Importance.NONE) -> dict:
    """Importance of each member inside the sub-network the group induces."""
    src = ImportanceSource.of(importance)
    members = set(members)
    if src.kind is Importance.NONE or net is None:
        return dict.fromkeys(members, 1.0)
    sub = induced_subgraph(net, members)
    if src.kind is Importance.DEGREE:
        return {v: float(len(sub.neighbours(v))) for v in members}
    return social_position(sub, src.epsilon, src.tol)


def inclusion(g1, g2, net_i: Msn | None = None, importance=Importance.NONE,
              ni: dict | None = None) -> float:
    """I(G1, G2): member share of G1 inside G2 times its importance share.

    ``ni`` may carry precomputed importances of G1's members.  When they
    are all zero the importance factor is dropped with a warning.
    """
    a = g1.members if isinstance(g1, Group) else frozenset(g1)
    b = g2.members if isinstance(g2, Group) else frozenset(g2)
    if not a:
        raise EmptyGroup("inclusion of an empty group")
    common = a & b
    quantity = len(common) / len(a)
    if ni is None:
        if ImportanceSource.of(importance).kind is Importance.NONE:
            return quantity
        ni = node_importance(net_i, a, importance)
    total = sum(ni[v] for v in a)
    if total <= 0:
        log.warning("all member importances are zero; using member share only")
        return quantity
    return quantity * sum(ni[v] for v in common) / total


def classify_event(i12: float, i21: float, size1: int, size2: int,
                   matches_prev: int = 1, matches_next: int = 1,
                   alpha: float = 0.5, beta: float = 0.5):
    """Event for one pair of groups, or None.

    ``matches_next`` counts next-frame groups matched by G1 (used for
    shrinking and splitting); ``matches_prev`` counts previous-frame groups
    matched by G2 (used for growing and merging).  Conditions are tried in
    the order continuing, shrinking, growing, splitting, merging.
    """
    fwd = i12 >= alpha
    bwd = i21 >= beta
    if fwd and bwd and size1 == size2:
        return CONTINUING
    if (fwd and bwd and size1 > size2) or \
            (not fwd and bwd and size1 >= size2 and matches_next == 1):
        return SHRINKING
    if (fwd and bwd and size1 < size2) or \
            (fwd and not bwd and size1 <= size2 and matches_prev == 1):
        return GROWING
    if not fwd and bwd and size1 >= size2 and matches_next > 1:
        return SPLITTING
    if fwd and not bwd and size1 <= size2 and matches_prev > 1:
        return MERGING
    return None


def ged(dsn: Dsn | None, partitions: list, alpha: float = 0.5, beta: float = 0.5,
        importance=Importance.SP, threshold: float = 0.1) -> list:
    """Events between every pair of consecutive frames.

    ``dsn`` supplies the frame networks for importance; it may be None when
    importance is NONE.
    """
    if not (0 <= alpha <= 1 and 0 <= beta <= 1):
        raise InvalidParameter("alpha and beta must lie in [0, 1]")
    if dsn is not None and len(dsn.frames) != len(partitions):
        raise FrameMismatch(f"{len(dsn.frames)} frames but {len(partitions)} partitions")
    src = ImportanceSource.of(importance)
    cache = {}

    def importance_of(i, g):
        key = (i, g.id)
        if key not in cache:
            net = dsn.frames[i] if dsn is not None else None
            cache[key] = node_importance(net, g.members, src)
        return cache[key]

    events = []
    for i in range(len(partitions) - 1):
        before = list(partitions[i].groups)
        after = list(partitions[i + 1].groups)
        fwd = {}
        bwd = {}
        for a in before:
            for b in after:
                fwd[a.id, b.id] = inclusion(a, b, ni=importance_of(i, a))
                bwd[a.id, b.id] = inclusion(b, a, ni=importance_of(i + 1, b))
        match = {k: fwd[k] >= alpha or bwd[k] >= beta for k in fwd}
        m_next = {a.id: sum(match[a.id, b.id] for b in after) for a in before}
        m_prev = {b.id: sum(match[a.id, b.id] for a in before) for b in after}
        for a in before:
            for b in after:
                k = (a.id, b.id)
                kind = classify_event(fwd[k], bwd[k], len(a), len(b),
                                      m_prev[b.id], m_next[a.id], alpha, beta)
                if kind:
                    events.append(EvolutionEvent(i, a.id, i + 1, b.id, kind, fwd[k], bwd[k]))
        for a in before:
            if all(fwd[a.id, b.id] < threshold and bwd[a.id, b.id] < threshold for b in after):
                events.append(EvolutionEvent(i, a.id, i + 1, None, DISSOLVING, 0.0, 0.0))
        for b in after:
            if all(fwd[a.id, b.id] < threshold and bwd[a.id, b.id] < threshold for a in before):
                events.append(EvolutionEvent(i, None, i + 1, b.id, FORMING, 0.0, 0.0))
    return events


@dataclass
class Timeline:
    """One path through the event graph.

    ``events[k]`` joins ``groups[k]`` and ``groups[k + 1]``.  ``start`` is
    "forming" when the first group formed; ``end`` is the event after the
    last group (dissolving, or a merge into a group continued by another
    chain), or None.
    """

    groups: list = field(default_factory=list)
    events: list = field(default_factory=list)
    start: str | None = None
    end: str | None = None

    def __len__(self):
        return len(self.groups)

    @property
    def all_events(self) -> list:
        return self.events + ([self.end] if self.end else [])


def _gkey(node):
    frame, gid = node
    return (frame, node_key(gid))


def evolution_chains(events: list) -> list:
    """Timelines following group identity through events.

    A split forks the chain, each branch repeating the shared prefix.  A
    group with several parents continues only the chain of the parent with
    the largest backward inclusion (ties go to the smaller group id); the
    other parents' chains end with that event.
    """
    out_edges: dict = {}
    parents: dict = {}
    formed = set()
    dissolved = set()
    nodes = set()
    for e in events:
        if e.kind == FORMING:
            formed.add((e.frame_j, e.group_j))
            nodes.add((e.frame_j, e.group_j))
            continue
        src = (e.frame_i, e.group_i)
        nodes.add(src)
        if e.kind == DISSOLVING:
            dissolved.add(src)
            continue
        dst = (e.frame_j, e.group_j)
        nodes.add(dst)
        out_edges.setdefault(src, []).append((dst, e.kind))
        parents.setdefault(dst, []).append((src, e.inclusion_bwd))
    primary = {}
    for dst, ps in parents.items():
        best = min(ps, key=lambda t: (-t[1], _gkey(t[0])))
        primary[dst] = best[0]
    chains = []

    def walk(node, groups, evs, start):
        groups = groups + [node]
        branches = sorted(out_edges.get(node, []), key=lambda t: _gkey(t[0]))
        ended = False
        for dst, kind in branches:
            if primary.get(dst) == node:
                walk(dst, groups, evs + [kind], start)
            else:
                chains.append(Timeline(groups, evs, start, kind))
            ended = True
        if node in dissolved:
            chains.append(Timeline(groups, evs, start, DISSOLVING))
            ended = True
        if not ended:
            chains.append(Timeline(groups, evs, start, None))

    for node in sorted(nodes, key=_gkey):
        if node not in primary:
            walk(node, [], [], FORMING if node in formed else None)
    return chains
