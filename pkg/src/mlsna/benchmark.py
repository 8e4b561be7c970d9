"""Synthetic networks with planted communities.

* ``generate_gn``: 128 nodes in four groups of 32, every node of degree 16.
* ``generate_lfr_base``: power-law degrees and community sizes with a
  mixing parameter, wired by configuration-model pairing.
* ``generate_mlfr``: a multi-layer network whose first layer is an LFR
  network and whose other layers are derived from it.

All randomness comes from one ``Rng``.  Node ids are "1".."n" and the base
layer is "1".
"""

from __future__ import annotations

import bisect
import logging
import math
from dataclasses import asdict, dataclass, fields

from .errors import InfeasibleSpec, InvalidParameter, WiringFailure
from .graph import Msn, Partition, node_key
from .rng import Rng

log = logging.getLogger(__name__)

BASE = "1"


@dataclass
class BenchmarkSpec:
    n: int = 1000
    layers: int = 1
    avg_degree: float = 20.0
    max_degree: float = 50.0
    tau1: float = 2.0
    tau2: float = 1.0
    mu: float = 0.1
    cmin: int = 10
    cmax: int = 50
    layer_exponent: float = 2.0
    degree_swap_prob: float = 0.1
    membership_swap_prob: float = 0.1
    seed: int = 0

    def validate(self):
        if self.n < 2:
            raise InfeasibleSpec("n must be at least 2")
        if self.layers < 1:
            raise InfeasibleSpec("layers must be at least 1")
        if not 1 <= self.cmin <= self.cmax <= self.n:
            raise InfeasibleSpec("need 1 <= cmin <= cmax <= n")
        if not 0 < self.avg_degree <= self.max_degree:
            raise InfeasibleSpec("need 0 < avg_degree <= max_degree")
        if self.max_degree > self.n - 1:
            raise InfeasibleSpec("max_degree exceeds n - 1")
        if not 0.0 <= self.mu <= 1.0:
            raise InfeasibleSpec("mu must lie in [0, 1]")
        for name in ("degree_swap_prob", "membership_swap_prob"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise InfeasibleSpec(f"{name} must lie in [0, 1]")
        top_in = _round((1 - self.mu) * self.max_degree)
        if top_in > self.cmax - 1:
            raise InfeasibleSpec(
                f"internal degree up to {top_in} does not fit communities of at most {self.cmax}")
        return self

    @classmethod
    def from_text(cls, text: str) -> "BenchmarkSpec":
        """Parse flat ``key = value`` lines; ``#`` starts a comment."""
        types = {f.name: f.type for f in fields(cls)}
        values = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InvalidParameter(f"line {lineno}: expected key = value")
            key, val = (s.strip() for s in line.split("=", 1))
            val = val.strip("\"'")
            if key not in types:
                raise InvalidParameter(f"line {lineno}: unknown spec key {key!r}")
            try:
                values[key] = int(val) if types[key] in (int, "int") else float(val)
            except ValueError:
                raise InvalidParameter(f"line {lineno}: bad value for {key}: {val!r}") from None
        return cls(**values)

    def to_text(self) -> str:
        return "".join(f"{k} = {v}\n" for k, v in asdict(self).items())


@dataclass
class GroundTruth:
    """Community of every node on every layer."""

    layers: dict
    base: str = BASE

    def partition(self, layer=None) -> Partition:
        return Partition.from_labels(self.layers[layer or self.base])

    def sizes(self, layer=None) -> list:
        counts: dict = {}
        for c in self.layers[layer or self.base].values():
            counts[c] = counts.get(c, 0) + 1
        return sorted(counts.values())


def _round(x):
    return int(math.floor(x + 0.5))


def _ids(n):
    return [str(i) for i in range(1, n + 1)]


def _key(a, b):
    return (a, b) if node_key(a) <= node_key(b) else (b, a)


def _to_msn(nodes, layer_edges: dict) -> Msn:
    """Undirected edge sets per layer -> Msn with both tuple directions."""
    edges = {}
    for l, es in layer_edges.items():
        for a, b in es:
            edges[(a, b, l)] = 1.0
            edges[(b, a, l)] = 1.0
    return Msn(nodes, layer_edges.keys(), edges)


# ---------------------------------------------------------------- wiring

def wire_stubs(degrees: dict, rng: Rng, allowed=None, budget: int = 0, taken=None):
    """Configuration-model pairing with repair by edge swaps.

    Stubs are shuffled and paired.  A pair that is a self-loop, a duplicate
    or rejected by ``allowed`` is repaired by exchanging endpoints with a
    random accepted edge; after ``budget`` failed swaps in total, remaining
    bad pairs are dropped.  Callers pass 100 times the number of nodes
    being wired.  Returns ``(edges, dropped_stubs)``.
    """
    taken = taken or set()
    edges: set = set()
    good: list = []

    def ok(a, b):
        if a == b:
            return False
        k = _key(a, b)
        if k in edges or k in taken:
            return False
        return allowed is None or allowed(a, b)

    stubs = [v for v in sorted(degrees, key=node_key) for _ in range(degrees[v])]
    rng.shuffle(stubs)
    dropped = 0
    if len(stubs) % 2:
        stubs.pop()
        dropped += 1
    bad = []
    for i in range(0, len(stubs), 2):
        a, b = stubs[i], stubs[i + 1]
        if ok(a, b):
            edges.add(_key(a, b))
            good.append((a, b))
        else:
            bad.append((a, b))
    attempts = 0
    for a, b in bad:
        placed = False
        while attempts < budget and good:
            attempts += 1
            j = rng.randbelow(len(good))
            c, d = good[j]
            if rng.random() < 0.5:
                c, d = d, c
            if ok(a, c) and ok(b, d) and _key(a, c) != _key(b, d):
                edges.discard(_key(c, d))
                good[j] = good[-1]
                good.pop()
                edges.add(_key(a, c))
                edges.add(_key(b, d))
                good.append((a, c))
                good.append((b, d))
                placed = True
                break
        if not placed:
            dropped += 2
    return edges, dropped


# ---------------------------------------------------------------- GN

def generate_gn(out_ratio: float, rng: Rng, retries: int = 20):
    """Four communities of 32 nodes; each node has 16 - k_out internal and
    k_out = round(16 * out_ratio) external neighbours."""
    if not 0.0 <= out_ratio <= 1.0:
        raise InvalidParameter("out_ratio must lie in [0, 1]")
    k_out = _round(16 * out_ratio)
    k_in = 16 - k_out
    nodes = _ids(128)
    comm = {v: str(i // 32 + 1) for i, v in enumerate(nodes)}
    for _ in range(retries):
        edges = set()
        lost = 0
        for c in "1234":
            members = [v for v in nodes if comm[v] == c]
            es, d = wire_stubs({v: k_in for v in members}, rng, budget=100 * 128)
            edges |= es
            lost += d
        es, d = wire_stubs({v: k_out for v in nodes}, rng,
                           allowed=lambda a, b: comm[a] != comm[b], budget=100 * 128)
        edges |= es
        lost += d
        if lost == 0:
            return _to_msn(nodes, {BASE: edges}), GroundTruth({BASE: comm})
    raise WiringFailure(f"could not wire a 16-regular GN network in {retries} tries")


# ---------------------------------------------------------------- LFR

def _powerlaw_sample(a, b, tau, u):
    if abs(tau - 1.0) < 1e-12:
        return a * (b / a) ** u
    e = 1.0 - tau
    return (a ** e + u * (b ** e - a ** e)) ** (1.0 / e)


def powerlaw_mean(a, b, tau):
    """Mean of the continuous power law x^-tau on [a, b]."""
    if b <= a:
        return a
    if abs(tau - 1.0) < 1e-12:
        return (b - a) / math.log(b / a)
    if abs(tau - 2.0) < 1e-12:
        return math.log(b / a) / (1.0 / a - 1.0 / b)
    return ((1 - tau) / (2 - tau)) * (b ** (2 - tau) - a ** (2 - tau)) / (b ** (1 - tau) - a ** (1 - tau))


def lower_cutoff(avg, kmax, tau):
    """Lower cutoff giving the requested mean, by bisection."""
    lo, hi = 1.0, float(kmax)
    if powerlaw_mean(lo, kmax, tau) > avg or avg > kmax:
        raise InfeasibleSpec(f"average degree {avg} unreachable with max degree {kmax}")
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if powerlaw_mean(mid, kmax, tau) < avg:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def sample_degrees(spec: BenchmarkSpec, rng: Rng) -> list:
    kmin = lower_cutoff(spec.avg_degree, spec.max_degree, spec.tau1)
    out = []
    for _ in range(spec.n):
        k = _round(_powerlaw_sample(kmin, spec.max_degree, spec.tau1, rng.random()))
        out.append(max(1, min(int(spec.max_degree), k)))
    return out


def sample_sizes(spec: BenchmarkSpec, rng: Rng) -> list:
    """Community sizes from the tau2 power law, adjusted to sum to n."""
    sizes = []
    while sum(sizes) < spec.n:
        s = _round(_powerlaw_sample(spec.cmin, spec.cmax, spec.tau2, rng.random()))
        sizes.append(max(spec.cmin, min(spec.cmax, s)))
    guard = 0
    while sum(sizes) != spec.n:
        guard += 1
        if guard > 100 * spec.n:
            raise InfeasibleSpec("cannot fit community sizes to n")
        if sum(sizes) > spec.n:
            idx = [i for i, s in enumerate(sizes) if s > spec.cmin]
            if not idx:
                sizes.pop()
                continue
            sizes[rng.choice(idx)] -= 1
        else:
            idx = [i for i, s in enumerate(sizes) if s < spec.cmax]
            if not idx:
                raise InfeasibleSpec("cannot fit community sizes to n")
            sizes[rng.choice(idx)] += 1
    return sizes


def _assign(nodes, k_in, sizes, rng: Rng) -> dict:
    """Place nodes into communities large enough for their internal degree.

    A node joining a full community evicts a random member, which goes back
    to the queue.
    """
    members = [[] for _ in sizes]
    queue = list(nodes)
    rng.shuffle(queue)
    budget = 100 * len(nodes)
    while queue:
        budget -= 1
        if budget < 0:
            raise InfeasibleSpec("could not place nodes into communities")
        v = queue.pop()
        fits = [c for c, s in enumerate(sizes) if s > k_in[v]]
        if not fits:
            raise InfeasibleSpec(f"no community can host internal degree {k_in[v]}")
        c = rng.choice(fits)
        members[c].append(v)
        if len(members[c]) > sizes[c]:
            queue.append(members[c].pop(rng.randbelow(len(members[c]))))
    return {v: str(c + 1) for c, ms in enumerate(members) for v in ms}


def generate_lfr_base(spec: BenchmarkSpec, rng: Rng):
    """Single-layer LFR-style network and its communities."""
    spec.validate()
    nodes = _ids(spec.n)
    for _ in range(20):
        degrees = dict(zip(nodes, sample_degrees(spec, rng)))
        k_in = {v: _round((1 - spec.mu) * k) for v, k in degrees.items()}
        sizes = sample_sizes(spec, rng)
        if max(k_in.values()) < max(sizes):
            break
    else:
        raise InfeasibleSpec("drawn community sizes cannot host the internal degrees")
    comm = _assign(nodes, k_in, sizes, rng)
    by_comm: dict = {}
    for v in nodes:
        by_comm.setdefault(comm[v], []).append(v)
    # each community needs an even internal stub count
    for c, ms in sorted(by_comm.items(), key=lambda kv: node_key(kv[0])):
        if sum(k_in[v] for v in ms) % 2:
            up = [v for v in ms if k_in[v] < degrees[v] and k_in[v] < len(ms) - 1]
            if up:
                k_in[rng.choice(up)] += 1
            else:
                # drop the stub altogether so the external share is untouched
                down = [v for v in ms if k_in[v] > 0]
                v = rng.choice(down)
                k_in[v] -= 1
                degrees[v] -= 1
    edges = set()
    lost = 0
    for c, ms in sorted(by_comm.items(), key=lambda kv: node_key(kv[0])):
        es, d = wire_stubs({v: k_in[v] for v in ms}, rng, budget=100 * len(ms))
        edges |= es
        lost += d
    k_out = {v: degrees[v] - k_in[v] for v in nodes}
    es, d = wire_stubs(k_out, rng, allowed=lambda a, b: comm[a] != comm[b],
                       budget=100 * spec.n, taken=edges)
    edges |= es
    lost += d
    if lost:
        log.info("LFR wiring dropped %d stubs", lost)
    return _to_msn(nodes, {BASE: edges}), GroundTruth({BASE: comm})


# ---------------------------------------------------------------- mLFR

@dataclass
class LayerPlan:
    """Targets for one derived layer: community, internal and external degree."""

    community: dict
    k_in: dict
    k_ext: dict

    def copy(self):
        return LayerPlan(dict(self.community), dict(self.k_in), dict(self.k_ext))


def plan_from_base(base: Msn, truth: GroundTruth) -> LayerPlan:
    comm = truth.layers[truth.base]
    k_in, k_ext = {}, {}
    for v in base.nodes:
        nb = base.neighbours(v)
        k_in[v] = sum(1 for y in nb if comm[y] == comm[v])
        k_ext[v] = len(nb) - k_in[v]
    return LayerPlan(dict(comm), k_in, k_ext)


def swap_degrees(plan: LayerPlan, prob: float, rng: Rng) -> tuple:
    """Exchange internal degrees of random pairs inside one community.

    A swap of x and y is accepted when x != y and afterwards neither node's
    external degree exceeds its internal degree.  Returns
    ``(triggered, accepted)``.
    """
    groups: dict = {}
    for v in sorted(plan.community, key=node_key):
        groups.setdefault(plan.community[v], []).append(v)
    triggered = accepted = 0
    for v in sorted(plan.community, key=node_key):
        if rng.random() >= prob:
            continue
        triggered += 1
        y = rng.choice(groups[plan.community[v]])
        if y == v:
            continue
        if plan.k_ext[v] <= plan.k_in[y] and plan.k_ext[y] <= plan.k_in[v]:
            plan.k_in[v], plan.k_in[y] = plan.k_in[y], plan.k_in[v]
            accepted += 1
    return triggered, accepted


def swap_memberships(plan: LayerPlan, prob: float, rng: Rng) -> tuple:
    """Exchange the slots of random node pairs from different communities.

    Community, internal and external degree move together, so every
    community keeps its size and degree sequence.  Returns
    ``(triggered, accepted)``.
    """
    nodes = sorted(plan.community, key=node_key)
    if len(set(plan.community.values())) < 2:
        return 0, 0
    triggered = accepted = 0
    for v in nodes:
        if rng.random() >= prob:
            continue
        triggered += 1
        y = rng.choice(nodes)
        if plan.community[y] == plan.community[v]:
            continue
        for attr in (plan.community, plan.k_in, plan.k_ext):
            attr[v], attr[y] = attr[y], attr[v]
        accepted += 1
    return triggered, accepted


def layer_cdf(layers: int, theta: float) -> list:
    """F(c) for c = 0..layers: power-law cumulative share of layer counts."""
    w = [j ** (-theta) for j in range(1, layers + 1)]
    tot = sum(w)
    out = [0.0]
    acc = 0.0
    for x in w:
        acc += x
        out.append(acc / tot)
    out[-1] = 1.0
    return out


class PairList:
    """Ascending list of (remaining degree, node) for one group on one layer."""

    def __init__(self, degrees: dict):
        self.k = {v: d for v, d in degrees.items() if d > 0}
        self.items = sorted((d, node_key(v), v) for v, d in self.k.items())

    def __len__(self):
        return len(self.items)

    def __contains__(self, v):
        return v in self.k

    def last(self):
        return self.items[-1][2]

    def remove(self, v):
        d = self.k.pop(v)
        i = bisect.bisect_left(self.items, (d, node_key(v), v))
        del self.items[i]

    def decrement(self, v):
        d = self.k[v]
        self.remove(v)
        if d > 1:
            self.k[v] = d - 1
            bisect.insort(self.items, (d - 1, node_key(v), v))


class _Distributor:
    def __init__(self, base: Msn, layers: list, theta: float, rng: Rng):
        self.rng = rng
        self.layers = layers
        self.cdf = layer_cdf(len(layers), theta)
        self.adj = {l: {v: set() for v in base.nodes} for l in layers}
        self.count: dict = {}
        self.base_adj = {v: base.neighbours(v) for v in base.nodes}
        for v, nb in self.base_adj.items():
            self.adj[BASE][v] = set(nb)
            for y in nb:
                self.count[_key(v, y)] = 1
        self.dropped = 0

    def connect(self, l, x, y):
        self.adj[l][x].add(y)
        self.adj[l][y].add(x)
        k = _key(x, y)
        self.count[k] = self.count.get(k, 0) + 1

    def skew(self, x, y):
        """True when a fresh draw rejects a new edge for this pair."""
        return self.rng.random() < self.cdf[self.count.get(_key(x, y), 0)]

    def place_vertex(self, l, plist: PairList, fits, converge: bool):
        """Give the last vertex of ``plist`` all its remaining neighbours."""
        x = plist.last()
        need = plist.k[x]
        adj = self.adj[l]
        if converge:
            props = sorted((y for y in self.base_adj[x]
                            if y not in adj[x] and y in plist and y != x and fits(x, y)),
                           key=node_key)
            self.rng.shuffle(props)
            inserted = []
            for y in props:
                if need == 0:
                    break
                if not self.skew(x, y):
                    self.connect(l, x, y)
                    inserted.append(y)
                    need -= 1
            for z in inserted:
                plist.decrement(z)
        jumper = max(0, len(plist) - need - 1)
        erase = []
        i = len(plist.items) - 1
        while need > 0:
            y = None
            while i >= 0:
                cand = plist.items[i][2]
                i -= 1
                if cand == x or cand in adj[x] or not fits(x, cand):
                    continue
                if jumper > 0 and self.skew(x, cand):
                    jumper -= 1
                    continue
                y = cand
                break
            if y is None:
                self.dropped += need
                break
            self.connect(l, x, y)
            erase.append(y)
            need -= 1
        for z in erase:
            plist.decrement(z)
        plist.remove(x)


def distribute_layers(base: Msn, plans: dict, layer_exponent: float, rng: Rng,
                      base_truth: GroundTruth | None = None) -> Msn:
    """Derive every non-base layer from the base layer.

    ``plans`` maps each derived layer to its ``LayerPlan``.  Each community
    on each layer, plus the set of inter-community links treated as one
    more subgraph, keeps a ``PairList``.  Steps pick a random layer and a
    random non-empty list and give its last vertex all its neighbours:
    first base-layer neighbours (if the vertex keeps its base community),
    then list members from the top, skipping up to ``jumper`` candidates
    that the layer-count distribution rejects.  Unplaceable stubs are
    dropped.
    """
    layers = [BASE] + sorted(plans, key=node_key)
    dist = _Distributor(base, layers, layer_exponent, rng)
    base_comm = base_truth.layers[base_truth.base] if base_truth else None
    lists = {}
    for l in layers[1:]:
        plan = plans[l]
        groups: dict = {}
        for v in plan.community:
            groups.setdefault(plan.community[v], {})[v] = plan.k_in[v]
        for c in sorted(groups, key=node_key):
            lists[(l, "in", c)] = PairList(groups[c])
        lists[(l, "ext", None)] = PairList(plan.k_ext)
    while True:
        live = sorted({k[0] for k, pl in lists.items() if len(pl)}, key=node_key)
        if not live:
            break
        l = rng.choice(live)
        keys = sorted((k for k in lists if k[0] == l and len(lists[k])),
                      key=lambda k: (k[1], node_key(k[2] or "")))
        key = rng.choice(keys)
        plan = plans[l]
        comm = plan.community
        if key[1] == "in":
            def fits(a, b, comm=comm):
                return comm[a] == comm[b]
        else:
            def fits(a, b, comm=comm):
                return comm[a] != comm[b]
        x = lists[key].last()
        converge = base_comm is None or base_comm[x] == comm[x]
        dist.place_vertex(l, lists[key], fits, converge)
    if dist.dropped:
        log.info("layer distribution dropped %d stubs", dist.dropped)
    layer_edges = {}
    for l in layers:
        layer_edges[l] = {_key(a, b) for a, nb in dist.adj[l].items() for b in nb}
    return _to_msn(base.nodes, layer_edges)


def generate_mlfr(spec: BenchmarkSpec, rng: Rng):
    """LFR base layer, degree swaps, membership swaps, layer distribution."""
    spec.validate()
    base, truth = generate_lfr_base(spec, rng)
    if spec.layers == 1:
        return base, truth
    start = plan_from_base(base, truth)
    plans = {}
    for i in range(2, spec.layers + 1):
        plan = start.copy()
        swap_degrees(plan, spec.degree_swap_prob, rng)
        swap_memberships(plan, spec.membership_swap_prob, rng)
        plans[str(i)] = plan
    msn = distribute_layers(base, plans, spec.layer_exponent, rng, truth)
    per_layer = {BASE: truth.layers[BASE]}
    per_layer.update({l: p.community for l, p in plans.items()})
    return msn, GroundTruth(per_layer)
