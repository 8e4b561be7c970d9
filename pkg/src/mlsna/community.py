"""Community-existence predicates and the CLECC divisive method.

The method repeatedly removes every pair whose CLECC value equals the
current minimum, recomputes the values touched by the removal and, when a
component falls apart into several non-trivial pieces, freezes each piece
that passes the chosen community condition on the original network.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from enum import Enum

from .graph import Group, Msn, Partition, node_key
from .measures import alpha_graph, check_alpha, clecc_from_sets


class Condition(str, Enum):
    WEAK = "weak"
    STRONG = "strong"


def degree_split(msn: Msn, members) -> dict:
    """node -> (k_in, k_out) counted as directed tuples over all layers."""
    members = set(members)
    for v in members:
        msn.check_node(v)
    out = {}
    for v in members:
        k_in = k_out = 0
        for links in (msn.out_links(v), msn.in_links(v)):
            for y, ls in links.items():
                if y in members:
                    k_in += len(ls)
                else:
                    k_out += len(ls)
        out[v] = (k_in, k_out)
    return out


def _members(g):
    return g.members if isinstance(g, Group) else set(g)


def is_weak_community(msn: Msn, g) -> bool:
    ks = degree_split(msn, _members(g))
    return sum(a for a, _ in ks.values()) > sum(b for _, b in ks.values())


def is_strong_community(msn: Msn, g) -> bool:
    ks = degree_split(msn, _members(g))
    return all(a > b for a, b in ks.values())


def satisfies(msn: Msn, g, condition) -> bool:
    if Condition(condition) is Condition.WEAK:
        return is_weak_community(msn, g)
    return is_strong_community(msn, g)


@dataclass
class Iteration:
    index: int
    value: float
    removed: list
    values: dict | None = None


@dataclass
class ExtractionTrace:
    iterations: list = field(default_factory=list)
    frozen: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "iterations": [
                {"iteration": it.index, "value": it.value,
                 "removed": [list(p) for p in it.removed]}
                for it in self.iterations],
            "frozen": [{"iteration": i, "group": g.id,
                        "members": sorted(g.members, key=node_key)}
                       for i, g in self.frozen],
        }


def _pair(x, y):
    return (x, y) if node_key(x) <= node_key(y) else (y, x)


def _components(adj):
    comp = {}
    pieces = []
    for s in sorted(adj, key=node_key):
        if s in comp:
            continue
        cid = len(pieces)
        comp[s] = cid
        stack = [s]
        seen = {s}
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    comp[w] = cid
                    stack.append(w)
        pieces.append(seen)
    return comp, pieces


def _cut_side(adj, x, y):
    """None when x and y are still connected, else the component of one of them.

    Breadth-first search grows from both ends, always expanding the smaller
    frontier, so the cost is bounded by the smaller side.
    """
    seen = ({x}, {y})
    front = ([x], [y])
    while front[0] and front[1]:
        side = 0 if len(front[0]) <= len(front[1]) else 1
        mine, other = seen[side], seen[1 - side]
        nxt = []
        for v in front[side]:
            for w in adj[v]:
                if w in other:
                    return None
                if w not in mine:
                    mine.add(w)
                    nxt.append(w)
        front = (nxt, front[1]) if side == 0 else (front[0], nxt)
    return seen[0] if not front[0] else seen[1]


FREEZE = "freeze"
RECURSIVE = "recursive"


def clecc_method(msn: Msn, alpha: int = 1, condition=Condition.WEAK,
                 smoothed: bool = True, tol: float = 1e-9,
                 record_values: bool = False, policy: str = FREEZE) -> tuple:
    """Extract disjoint groups by divisive CLECC edge removal.

    Pairs are those joined in MN(., alpha).  ``smoothed`` selects the CLECC
    denominator with the added one (see ``measures.clecc``).  With
    ``record_values`` each trace iteration keeps the values of all live
    pairs before its removals.
    """
    check_alpha(msn, alpha)
    condition = Condition(condition)
    adj = alpha_graph(msn, alpha)
    trace = ExtractionTrace()
    groups = []

    comp_of, pieces = _components(adj)
    comps = dict(enumerate(pieces))
    next_cid = len(pieces)

    # recursive policy: latest accepted group of every node
    owner: dict = {}
    accepted: dict = {}

    def accept(members, it_index):
        gid = len(accepted)
        accepted[gid] = set(members)
        for v in members:
            old = owner.get(v)
            if old is not None:
                accepted[old].discard(v)
            owner[v] = gid
        trace.frozen.append((it_index, Group(frozenset(members), gid)))

    def accept_split(cids, it_index):
        if all(satisfies(msn, comps[c], condition) for c in cids):
            for c in cids:
                accept(comps[c], it_index)

    def handle_shatter(members, it_index):
        # no real split happened: the component fell apart into single nodes
        if not satisfies(msn, members, condition):
            return
        if policy == RECURSIVE:
            if not any(owner.get(v) is not None and accepted[owner[v]] == set(members)
                       for v in members):
                accept(members, it_index)
        else:
            g = Group(frozenset(members), len(groups))
            groups.append(g)
            trace.frozen.append((it_index, g))

    def handle_split(cids, it_index):
        if policy == RECURSIVE:
            accept_split(cids, it_index)
        else:
            for c in cids:
                freeze_if_group(c, it_index)

    def freeze_if_group(cid, it_index):
        members = comps[cid]
        if satisfies(msn, members, condition):
            g = Group(frozenset(members), len(groups))
            groups.append(g)
            trace.frozen.append((it_index, g))
            for v in members:
                for w in adj[v]:
                    val.pop(_pair(v, w), None)
            for v in members:
                adj[v] = set()
            return True
        return False

    val = {}
    heap = []

    def push(p):
        v = clecc_from_sets(adj[p[0]], adj[p[1]], p[0], p[1], smoothed)
        val[p] = v
        heapq.heappush(heap, (v, node_key(p[0]), node_key(p[1]), p))

    for x in sorted(adj, key=node_key):
        for y in adj[x]:
            if node_key(x) < node_key(y):
                push((x, y))

    # an input that is already split is treated like a split at iteration 0
    big = [cid for cid, m in comps.items() if len(m) > 1]
    if len(big) >= 2:
        handle_split(big, 0)

    def valid(entry):
        v, _, _, p = entry
        return val.get(p) == v

    index = 0
    while heap:
        while heap and not valid(heap[0]):
            heapq.heappop(heap)
        if not heap:
            break
        index += 1
        snapshot = dict(val) if record_values else None
        m = heap[0][0]
        batch = []
        while heap and heap[0][0] <= m + tol:
            e = heapq.heappop(heap)
            if valid(e):
                batch.append(e[3])
                del val[e[3]]
        batch.sort(key=lambda p: (node_key(p[0]), node_key(p[1])))
        for x, y in batch:
            adj[x].discard(y)
            adj[y].discard(x)

        # split detection: root component -> all pieces derived from it
        derived = {}
        for x, y in batch:
            if comp_of[x] != comp_of[y]:
                continue
            side = _cut_side(adj, x, y)
            if side is None:
                continue
            parent = comp_of[x]
            cid = next_cid
            next_cid += 1
            comps[parent] -= side
            comps[cid] = side
            for v in side:
                comp_of[v] = cid
            root = next((r for r, kids in derived.items() if parent in kids), parent)
            derived.setdefault(root, {root}).add(cid)
        for root in sorted(derived):
            kids = sorted(derived[root])
            big = [c for c in kids if len(comps[c]) > 1]
            if len(big) >= 2:
                handle_split(big, index)
            elif not big:
                handle_shatter(set().union(*(comps[c] for c in kids)), index)

        touched = set()
        for x, y in batch:
            for u in (x, y):
                for w in adj[u]:
                    touched.add(_pair(u, w))
        for p in sorted(touched, key=lambda q: (node_key(q[0]), node_key(q[1]))):
            push(p)
        trace.iterations.append(Iteration(index, m, batch, snapshot))

    if policy == RECURSIVE:
        groups = [Group(frozenset(m), i) for i, m in
                  enumerate(m for _, m in sorted(accepted.items()) if m)]
    assigned = set()
    for g in groups:
        assigned |= g.members
    return Partition(tuple(groups), frozenset(msn.nodes - assigned)), trace


def clecc_plus(msn: Msn, p: Partition) -> Partition:
    """Attach each unassigned node to the group holding most of its neighbours.

    Neighbours are counted once over all layers of the original network.
    A tie between groups, or no grouped neighbour at all, leaves the node
    unassigned.  All decisions use the input partition.
    """
    owner = p.labels()
    extra: dict = {}
    still = set()
    for v in sorted(p.unassigned, key=node_key):
        counts: dict = {}
        for y in msn.neighbours(v):
            if y in owner:
                counts[owner[y]] = counts.get(owner[y], 0) + 1
        if not counts:
            still.add(v)
            continue
        top = max(counts.values())
        best = [g for g, c in counts.items() if c == top]
        if len(best) == 1:
            extra.setdefault(best[0], set()).add(v)
        else:
            still.add(v)
    groups = tuple(Group(g.members | extra.get(g.id, set()), g.id, g.frame) for g in p.groups)
    return Partition(groups, frozenset(still))
