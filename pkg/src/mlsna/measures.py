"""Node and edge measures for single-layer and multi-layered networks.

Single-layer measures (degree, closeness, betweenness, social position, ECC)
accept any ``Msn``; when it has several layers the edges are read as one
aggregated layer.
"""

from __future__ import annotations

import heapq
from enum import Enum

from .errors import (
    AlphaOutOfRange,
    DegenerateDenominator,
    DegenerateNetwork,
    InvalidParameter,
    NoConvergence,
    NoSuchEdge,
)
from .graph import Msn, node_key

TOL = 1e-9


class NeighbourhoodMode(str, Enum):
    IN = "in"
    OUT = "out"
    IN_OUT_ANY = "in_out_any"
    IN_OUT = "in_out"
    ANY = "any"


def check_alpha(msn: Msn, alpha: int):
    if not isinstance(alpha, int) or alpha < 1 or alpha > len(msn.layers):
        raise AlphaOutOfRange(f"alpha={alpha} outside [1, {len(msn.layers)}]")


def layer_neighbourhood(msn: Msn, x, l) -> set:
    """N(x, l): nodes tied to x on layer l in either direction."""
    msn.check_node(x)
    msn.check_layer(l)
    out = {y for y, ls in msn.out_links(x).items() if l in ls}
    out |= {y for y, ls in msn.in_links(x).items() if l in ls}
    return out


def multi_neighbourhood(msn: Msn, x, alpha: int = 1,
                        mode: NeighbourhoodMode | str = NeighbourhoodMode.ANY) -> set:
    """MN(x, alpha) under one of the five directionality modes."""
    msn.check_node(x)
    check_alpha(msn, alpha)
    mode = NeighbourhoodMode(mode)
    outs = msn.out_links(x)
    ins = msn.in_links(x)
    result = set()
    for y in set(outs) | set(ins):
        lo = outs.get(y, {}).keys()
        li = ins.get(y, {}).keys()
        if mode is NeighbourhoodMode.IN:
            n = len(li)
        elif mode is NeighbourhoodMode.OUT:
            n = len(lo)
        elif mode is NeighbourhoodMode.IN_OUT_ANY:
            n = min(len(li), len(lo))
        elif mode is NeighbourhoodMode.IN_OUT:
            n = len(li & lo)
        else:
            n = len(li | lo)
        if n >= alpha:
            result.add(y)
    return result


def any_layer_counts(msn: Msn) -> dict:
    """Unordered pair -> number of layers carrying an edge either way."""
    counts: dict = {}
    for x in msn.nodes:
        for y, ls in msn.out_links(x).items():
            key = (x, y) if node_key(x) <= node_key(y) else (y, x)
            counts.setdefault(key, set()).update(ls)
    return {k: len(v) for k, v in counts.items()}


def alpha_graph(msn: Msn, alpha: int) -> dict:
    """Adjacency sets of the undirected graph of pairs in MN(., alpha)."""
    check_alpha(msn, alpha)
    adj = {v: set() for v in msn.nodes}
    for (x, y), c in any_layer_counts(msn).items():
        if c >= alpha:
            adj[x].add(y)
            adj[y].add(x)
    return adj


# ---------------------------------------------------------------- single layer

def _aggregate(net: Msn):
    """Out-adjacency of the layer-aggregated network: x -> {y: weight}."""
    return {x: {y: sum(ls.values()) for y, ls in net.out_links(x).items()}
            for x in net.nodes}


def degree_centrality(net: Msn, x, variant: str = "total", normalized: bool = True,
                      weighted: bool = False) -> float:
    net.check_node(x)
    n = len(net.nodes)
    if normalized and n < 2:
        raise DegenerateNetwork("normalized degree needs at least 2 nodes")
    outs = net.out_links(x)
    ins = net.in_links(x)
    if variant == "in":
        d = sum(sum(ls.values()) for ls in ins.values()) if weighted else len(ins)
    elif variant == "out":
        d = sum(sum(ls.values()) for ls in outs.values()) if weighted else len(outs)
    elif variant == "total":
        if weighted:
            d = (sum(sum(ls.values()) for ls in ins.values())
                 + sum(sum(ls.values()) for ls in outs.values()))
        else:
            d = len(set(ins) | set(outs))
    else:
        raise InvalidParameter(f"unknown degree variant {variant!r}")
    return d / (n - 1) if normalized else float(d)


def _dijkstra(nodes, succ, source):
    """Distances, path counts and predecessor lists from ``source``.

    ``succ(v)`` yields ``(w, cost)``.  Equal lengths are detected with an
    absolute tolerance so float costs still count parallel shortest paths.
    """
    dist = {source: 0.0}
    sigma = {source: 1}
    preds = {source: []}
    order = []
    done = set()
    heap = [(0.0, node_key(source), source)]
    while heap:
        d, _, v = heapq.heappop(heap)
        if v in done or d > dist[v] + TOL:
            continue
        done.add(v)
        order.append(v)
        for w, c in succ(v):
            nd = d + c
            old = dist.get(w)
            if old is None or nd < old - TOL:
                dist[w] = nd
                sigma[w] = sigma[v]
                preds[w] = [v]
                heapq.heappush(heap, (nd, node_key(w), w))
            elif abs(nd - old) <= TOL and w not in done:
                sigma[w] += sigma[v]
                preds[w].append(v)
    return dist, sigma, preds, order


def _unit_succ(net: Msn):
    return lambda v: ((y, 1.0) for y in net.out_links(v))


def closeness_from_lengths(lengths: dict, source, n: int, normalized: bool = True) -> float:
    """Closeness from a map of shortest-path lengths, skipping unreachable nodes."""
    total = sum(d for v, d in lengths.items() if v != source and d != float("inf"))
    reach = sum(1 for v, d in lengths.items() if v != source and d != float("inf"))
    if reach == 0 or total <= 0:
        return 0.0
    return reach / total if normalized else 1.0 / total


def closeness(net: Msn, x, normalized: bool = True) -> float:
    """Closeness over reachable nodes with unit edge cost."""
    net.check_node(x)
    dist, _, _, _ = _dijkstra(net.nodes, _unit_succ(net), x)
    return closeness_from_lengths(dist, x, len(net.nodes), normalized)


def betweenness_scores(nodes, succ, normalized: bool = True,
                       conventional: bool = False) -> dict:
    """Brandes accumulation over ordered source/target pairs.

    Normalization divides by n-1, or by (n-1)(n-2) when ``conventional``
    (for symmetric graphs this equals the usual unordered-pair rule).
    """
    nodes = list(nodes)
    n = len(nodes)
    if n < 3:
        raise DegenerateNetwork("betweenness needs at least 3 nodes")
    bc = dict.fromkeys(nodes, 0.0)
    for s in nodes:
        _, sigma, preds, order = _dijkstra(nodes, succ, s)
        delta = dict.fromkeys(order, 0.0)
        for w in reversed(order):
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                bc[w] += delta[w]
    if normalized:
        scale = (n - 1) * (n - 2) if conventional else (n - 1)
        bc = {v: b / scale for v, b in bc.items()}
    return bc


def betweenness_all(net: Msn, normalized: bool = True, conventional: bool = False) -> dict:
    return betweenness_scores(net.nodes, _unit_succ(net), normalized, conventional)


def betweenness(net: Msn, x, normalized: bool = True, conventional: bool = False) -> float:
    net.check_node(x)
    return betweenness_all(net, normalized, conventional)[x]


def social_position(net: Msn, epsilon: float = 0.85, tol: float = 1e-6,
                    max_iter: int = 1000) -> dict:
    """Iterate SP(x) = (1-eps) + eps * sum_y SP(y) C(y->x) from SP = 1.

    The commitment C(y->x) is y's weight towards x over y's total outgoing
    weight, all layers pooled.
    """
    if not 0 < epsilon < 1:
        raise InvalidParameter("epsilon must lie in (0, 1)")
    agg = _aggregate(net)
    share = {}
    for y, outs in agg.items():
        tot = sum(outs.values())
        if tot > 0:
            share[y] = [(x, w / tot) for x, w in outs.items() if w > 0]
    sp = dict.fromkeys(net.nodes, 1.0)
    for _ in range(max_iter):
        nxt = dict.fromkeys(net.nodes, 0.0)
        for y, links in share.items():
            s = sp[y]
            for x, c in links:
                nxt[x] += s * c
        nxt = {x: (1 - epsilon) + epsilon * v for x, v in nxt.items()}
        diff = max((abs(nxt[v] - sp[v]) for v in sp), default=0.0)
        sp = nxt
        if diff < tol:
            return sp
    raise NoConvergence(f"social position did not converge in {max_iter} iterations")


def ecc(net: Msn, x, y, plus_one: bool = True) -> float:
    """Edge clustering coefficient (z + 1) / s of the edge between x and y.

    z counts triangles on the edge and s = min of the two endpoint degrees
    taken without the edge itself.  ``plus_one=False`` gives z / s.
    """
    net.check_node(x)
    net.check_node(y)
    nx_ = net.neighbours(x)
    ny_ = net.neighbours(y)
    if y not in nx_:
        raise NoSuchEdge(f"no edge between {x!r} and {y!r}")
    nx_.discard(y)
    ny_.discard(x)
    s = min(len(nx_), len(ny_))
    if s == 0:
        raise DegenerateDenominator(f"no triangle possible on ({x!r}, {y!r})")
    z = len(nx_ & ny_)
    return (z + 1) / s if plus_one else z / s


# ----------------------------------------------------------------- multi layer

def clcc(msn: Msn, x, alpha: int = 1) -> float:
    """Cross-layered clustering coefficient of x."""
    mn = multi_neighbourhood(msn, x, alpha)
    if len(mn) <= 1:
        return 0.0
    total = 0.0
    for y in mn:
        for z, ls in msn.out_links(y).items():
            if z in mn:
                # w(y,z,l) is y's out-weight and z's in-weight inside MN
                total += 2 * sum(ls.values())
    return total / (2 * len(mn) * len(msn.layers))


def _weights(msn: Msn, x, ys, direction):
    total = 0.0
    outs = msn.out_links(x)
    ins = msn.in_links(x)
    for y in ys:
        if direction in ("total", "out"):
            total += sum(outs.get(y, {}).values())
        if direction in ("total", "in"):
            total += sum(ins.get(y, {}).values())
    if direction not in ("total", "in", "out"):
        raise InvalidParameter(f"unknown direction {direction!r}")
    return total


def cdc(msn: Msn, x, alpha: int = 1, direction: str = "total") -> float:
    """Cross-layered degree centrality over MN(x, alpha)."""
    n = len(msn.nodes)
    if n < 2:
        raise DegenerateNetwork("degree centrality needs at least 2 nodes")
    mn = multi_neighbourhood(msn, x, alpha)
    return _weights(msn, x, mn, direction) / ((n - 1) * len(msn.layers))


def mdc(msn: Msn, x, version: int = 1, direction: str = "total") -> float:
    """Multi-layered degree centrality, versions 1 to 3."""
    n = len(msn.nodes)
    if n < 2:
        raise DegenerateNetwork("degree centrality needs at least 2 nodes")
    msn.check_node(x)
    num = _weights(msn, x, msn.neighbours(x), direction)
    if version == 1:
        den = len(msn.layers)
    elif version == 2:
        den = len(msn.neighbours(x))
    elif version == 3:
        den = sum(len(layer_neighbourhood(msn, x, l)) for l in msn.layers)
    else:
        raise InvalidParameter(f"unknown MDC version {version!r}")
    if den == 0:
        return 0.0
    return num / ((n - 1) * den)


def clecc(msn: Msn, x, y, alpha: int = 1, smoothed: bool = False) -> float:
    """Cross-layered edge clustering coefficient of the pair (x, y).

    Common multi-layered neighbours over the union of both neighbourhoods
    without x and y.  ``smoothed`` adds one to the denominator, the form
    under which the published karate trace was computed.
    """
    mx = multi_neighbourhood(msn, x, alpha)
    my = multi_neighbourhood(msn, y, alpha)
    return clecc_from_sets(mx, my, x, y, smoothed)


def clecc_from_sets(mx, my, x, y, smoothed=False) -> float:
    num = len(mx & my)
    union = len((mx | my) - {x, y})
    den = union + (1 if smoothed else 0)
    if den == 0:
        return 0.0
    return num / den


def clecc_all(msn: Msn, alpha: int = 1, smoothed: bool = False) -> dict:
    """CLECC of every unordered pair joined in MN(., alpha)."""
    adj = alpha_graph(msn, alpha)
    out = {}
    for x in adj:
        for y in adj[x]:
            if node_key(x) < node_key(y):
                out[(x, y)] = clecc_from_sets(adj[x], adj[y], x, y, smoothed)
    return out
