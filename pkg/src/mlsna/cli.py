"""Batch command-line front end.

Exit status is 0 on success, 1 on invalid input or usage and 2 on internal
errors.  Every output file is written to a temporary file and renamed into
place, so a failed run leaves no partial outputs behind.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .benchmark import BenchmarkSpec, generate_gn, generate_lfr_base, generate_mlfr
from .community import FREEZE, RECURSIVE, Condition, clecc_method, clecc_plus
from .errors import DegenerateDenominator, InvalidParameter, MlsnaError
from .evaluation import DROP, SINGLETON, nmi
from .evolution import Importance, evolution_chains, ged, EvolutionEvent
from .graph import Dsn, layer_view, node_key
from .io import atomic_write, read_edge_list, read_partition, write_edge_list, write_partition
from .measures import (NeighbourhoodMode, betweenness_all, cdc, clcc, clecc_all, closeness,
                       degree_centrality, ecc, mdc, multi_neighbourhood, social_position)
from .paths import INF, shortest_paths_dap, shortest_paths_mda
from .prediction import export_dataset, extract_sequences, prf
from .rng import Rng

NODE_METRICS = ("mn", "clcc", "cdc", "mdc1", "mdc2", "mdc3", "dc", "cc")
METRICS = NODE_METRICS + ("clecc", "ecc", "bc", "sp")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(round(v, 12))
    return str(v)


def _emit(rows, out):
    """Write CSV rows to ``out`` atomically, or to stdout when ``out`` is None."""
    if out is None:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerows(rows)
        return
    with atomic_write(out) as fh:
        csv.writer(fh, lineterminator="\n").writerows(rows)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("MLSNA_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise InvalidParameter(f"MLSNA_SEED must be an integer, got {env!r}") from None


def _jobs(args) -> int:
    jobs = args.jobs if args.jobs is not None else (os.cpu_count() or 1)
    if jobs < 1:
        raise InvalidParameter("--jobs must be at least 1")
    return jobs


# ---------------------------------------------------------------- measure

def _node_value(net, x, args):
    m = args.metric
    if m == "mn":
        return ";".join(sorted(multi_neighbourhood(net, x, args.alpha, args.mode), key=node_key))
    if m == "clcc":
        return clcc(net, x, args.alpha)
    if m == "cdc":
        return cdc(net, x, args.alpha, args.direction)
    if m.startswith("mdc"):
        return mdc(net, x, int(m[3]), args.direction)
    if m == "dc":
        return degree_centrality(net, x, args.direction, weighted=args.weighted)
    return closeness(net, x)


def _node_chunk(payload):
    net, nodes, args = payload
    return [(x, _node_value(net, x, args)) for x in nodes]


def _pairs(net):
    seen = set()
    for (s, t, _l) in net.edges:
        p = (s, t) if node_key(s) <= node_key(t) else (t, s)
        seen.add(p)
    return sorted(seen, key=lambda p: (node_key(p[0]), node_key(p[1])))


def cmd_measure(args):
    net = read_edge_list(args.input, args.undirected)
    if args.layer is not None:
        net = layer_view(net, args.layer)
    if args.metric in ("clcc", "cdc", "mn", "clecc"):
        # validate alpha before any work
        from .measures import check_alpha
        check_alpha(net, args.alpha)
    m = args.metric
    rows = []
    if m in NODE_METRICS:
        nodes = list(net.ordered_nodes)
        jobs = min(_jobs(args), max(1, len(nodes) // 50))
        if jobs > 1:
            chunks = [nodes[i::jobs] for i in range(jobs)]
            with ProcessPoolExecutor(jobs) as ex:
                found = dict(kv for part in ex.map(_node_chunk, [(net, c, args) for c in chunks])
                             for kv in part)
            values = [(x, found[x]) for x in nodes]
        else:
            values = _node_chunk((net, nodes, args))
        rows = [["node", "value"]] + [[x, _fmt(v)] for x, v in values]
    elif m == "bc":
        vals = betweenness_all(net, conventional=args.conventional)
        rows = [["node", "value"]] + [[x, _fmt(vals[x])] for x in net.ordered_nodes]
    elif m == "sp":
        vals = social_position(net, args.epsilon)
        rows = [["node", "value"]] + [[x, _fmt(vals[x])] for x in net.ordered_nodes]
    elif m == "clecc":
        vals = clecc_all(net, args.alpha, args.smoothed)
        rows = [["node", "node2", "value"]]
        rows += [[a, b, _fmt(vals[a, b])] for a, b in
                 sorted(vals, key=lambda p: (node_key(p[0]), node_key(p[1])))]
    else:
        rows = [["node", "node2", "value"]]
        for a, b in _pairs(net):
            try:
                v = _fmt(ecc(net, a, b, not args.no_plus_one))
            except DegenerateDenominator:
                v = ""  # undefined when an endpoint has no other neighbour
            rows.append([a, b, v])
    _emit(rows, args.out)


# ---------------------------------------------------------------- paths

def cmd_paths(args):
    net = read_edge_list(args.input, args.undirected)
    if args.algo == "dap":
        res = shortest_paths_dap(net, args.source, args.alpha, args.beta,
                                 not args.no_invert, args.materialize)
    else:
        res = shortest_paths_mda(net, args.source, args.alpha, not args.no_invert)
    rows = [["target", "length", "predecessor"]]
    for v in net.ordered_nodes:
        d = res.lengths.get(v, INF)
        if d == INF:
            continue
        rows.append([v, _fmt(d), res.predecessors.get(v, "")])
    _emit(rows, args.out)


# ---------------------------------------------------------------- community

def cmd_community(args):
    net = read_edge_list(args.input, args.undirected)
    part, trace = clecc_method(net, args.alpha, args.condition, policy=args.policy)
    if args.plus:
        part = clecc_plus(net, part)
    if args.trace:
        with atomic_write(args.trace) as fh:
            json.dump(trace.to_json(), fh, indent=1)
            fh.write("\n")
    if args.out is None:
        labels = part.labels()
        rows = [["node", "group_id"]] + [[v, labels.get(v, -1)] for v in net.ordered_nodes]
        _emit(rows, None)
    else:
        write_partition(part, args.out, net.nodes)


# ---------------------------------------------------------------- nmi

def cmd_nmi(args):
    a = read_partition(args.model)
    b = read_partition(args.extracted)
    print(_fmt(nmi(a, b, DROP if args.drop_unassigned else SINGLETON)))


# ---------------------------------------------------------------- generate

def cmd_generate(args):
    spec = BenchmarkSpec()
    if args.spec:
        spec = BenchmarkSpec.from_text(Path(args.spec).read_text(encoding="utf-8"))
    seed = _seed(args)
    rng = Rng(seed)
    if args.kind == "gn":
        net, truth = generate_gn(args.out_ratio, rng)
    elif args.kind == "lfr":
        spec.validate()
        net, truth = generate_lfr_base(spec, rng)
    else:
        net, truth = generate_mlfr(spec, rng)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_edge_list(net, out / "edges.tsv")
    for l, comm in sorted(truth.layers.items(), key=lambda kv: node_key(kv[0])):
        with atomic_write(out / f"truth_layer_{l}.csv") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["node", "community"])
            for v in sorted(comm, key=node_key):
                w.writerow([v, comm[v]])


# ---------------------------------------------------------------- ged / sequences

_FRAME = re.compile(r"^frame_(\d+)\.tsv$")


def _frames(directory, undirected, with_nets=True):
    """Frame networks and partitions from ``frame_<k>.tsv`` / ``groups_<k>.csv`` pairs."""
    d = Path(directory)
    if not d.is_dir():
        raise InvalidParameter(f"{d} is not a directory")
    ks = sorted(int(m.group(1)) for f in d.iterdir() if (m := _FRAME.match(f.name)))
    if not ks:
        raise InvalidParameter(f"no frame_<k>.tsv files in {d}")
    nets, parts = [], []
    for k in ks:
        g = d / f"groups_{k}.csv"
        if not g.exists():
            raise InvalidParameter(f"missing {g.name} for frame {k}")
        if with_nets:
            nets.append(read_edge_list(d / f"frame_{k}.tsv", undirected))
        parts.append(read_partition(g))
    return nets, parts


def _event_rows(events):
    rows = [["frame_i", "group_i", "frame_j", "group_j", "event", "incl_fwd", "incl_bwd"]]
    for e in events:
        rows.append([e.frame_i, "" if e.group_i is None else e.group_i,
                     e.frame_j, "" if e.group_j is None else e.group_j,
                     e.kind, _fmt(e.inclusion_fwd), _fmt(e.inclusion_bwd)])
    return rows


def cmd_ged(args):
    need_nets = args.importance != Importance.NONE.value
    nets, parts = _frames(args.frames, args.undirected, need_nets)
    dsn = Dsn(tuple(nets), 1, 0, tuple(range(len(nets)))) if need_nets else None
    events = ged(dsn, parts, args.alpha, args.beta, args.importance)
    _emit(_event_rows(events), args.out)


def _read_events(path):
    events = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        next(reader, None)
        for lineno, r in enumerate(reader, 2):
            if len(r) != 7:
                raise InvalidParameter(f"{path}:{lineno}: expected 7 columns")
            try:
                events.append(EvolutionEvent(int(r[0]), r[1] or None, int(r[2]), r[3] or None,
                                             r[4], float(r[5]), float(r[6])))
            except ValueError:
                raise InvalidParameter(f"{path}:{lineno}: malformed event row") from None
    return events


def cmd_sequences(args):
    _, parts = _frames(args.frames, False, with_nets=False)
    rows = extract_sequences(evolution_chains(_read_events(args.events)), parts, args.window)
    if args.out is None:
        import tempfile
        with tempfile.TemporaryDirectory() as tmp:
            p = Path(tmp) / "rows"
            export_dataset(rows, p, args.format)
            sys.stdout.write(p.read_text(encoding="utf-8"))
    else:
        export_dataset(rows, args.out, args.format)


# ---------------------------------------------------------------- score

def _label_column(path):
    vals = []
    with open(path, encoding="utf-8", newline="") as fh:
        for r in csv.reader(fh):
            if r:
                vals.append(r[-1].strip())
    if vals and vals[0] in ("label", "prediction", "predicted"):
        vals = vals[1:]
    return vals


def cmd_score(args):
    rep = prf(_label_column(args.predictions), _label_column(args.labels))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["class", "precision", "recall", "f", "support"])
    for c, s in rep.per_class.items():
        w.writerow([c, _fmt(s.precision), _fmt(s.recall), _fmt(s.f), s.support])
    w.writerow(["weighted", _fmt(rep.weighted_precision), _fmt(rep.weighted_recall),
                _fmt(rep.weighted_f), sum(s.support for s in rep.per_class.values())])
    if args.out is None:
        sys.stdout.write(buf.getvalue())
    else:
        with atomic_write(args.out) as fh:
            fh.write(buf.getvalue())


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mlsna", description="Multi-layered social network analysis.")
    p.add_argument("--version", action="version", version=f"mlsna {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    def common(sp, net=True):
        if net:
            sp.add_argument("input", help="edge list: source, target, layer, weight")
            sp.add_argument("--undirected", action="store_true",
                            help="add the reverse of every edge")
        sp.add_argument("--out", help="output file (default: stdout)")
        sp.add_argument("--jobs", type=int, help="worker processes (default: all cores)")
        sp.add_argument("-v", "--verbose", action="store_true")

    m = sub.add_parser("measure", help="node and edge measures")
    common(m)
    m.add_argument("--metric", choices=METRICS, required=True)
    m.add_argument("--alpha", type=int, default=1)
    m.add_argument("--mode", choices=[e.value for e in NeighbourhoodMode], default="any")
    m.add_argument("--direction", choices=("total", "in", "out"), default="total")
    m.add_argument("--layer", help="restrict to one layer")
    m.add_argument("--weighted", action="store_true", help="weighted degree for dc")
    m.add_argument("--conventional", action="store_true",
                   help="bc normalised by (n-1)(n-2) instead of (n-1)")
    m.add_argument("--epsilon", type=float, default=0.85, help="sp damping")
    m.add_argument("--smoothed", action="store_true", help="clecc with the +1 denominator")
    m.add_argument("--no-plus-one", action="store_true", help="ecc as z/s instead of (z+1)/s")
    m.set_defaults(func=cmd_measure)

    pa = sub.add_parser("paths", help="multi-layered shortest paths from one source")
    common(pa)
    pa.add_argument("--source", required=True)
    pa.add_argument("--alpha", type=int, default=1)
    pa.add_argument("--beta", type=float, default=1.0)
    pa.add_argument("--algo", choices=("dap", "mda"), default="dap")
    pa.add_argument("--no-invert", action="store_true", help="use weights as distances")
    pa.add_argument("--materialize", action="store_true", help="build the edge graph up front")
    pa.set_defaults(func=cmd_paths)

    c = sub.add_parser("community", help="CLECC community extraction")
    common(c)
    c.add_argument("--alpha", type=int, default=1)
    c.add_argument("--condition", choices=[e.value for e in Condition], default="weak")
    c.add_argument("--plus", action="store_true", help="assign leftovers by neighbour plurality")
    c.add_argument("--policy", choices=(FREEZE, RECURSIVE), default=FREEZE)
    c.add_argument("--trace", help="write the extraction trace as JSON")
    c.set_defaults(func=cmd_community)

    n = sub.add_parser("nmi", help="NMI between two node,group_id files")
    n.add_argument("model")
    n.add_argument("extracted")
    n.add_argument("--drop-unassigned", action="store_true")
    n.set_defaults(func=cmd_nmi)

    g = sub.add_parser("generate", help="benchmark networks with planted communities")
    g.add_argument("--kind", choices=("gn", "lfr", "mlfr"), required=True)
    g.add_argument("--spec", help="key = value benchmark spec file")
    g.add_argument("--seed", type=int, help="default: $MLSNA_SEED, then 0")
    g.add_argument("--out-ratio", type=float, default=0.1, help="gn external share")
    g.add_argument("--out", required=True, help="output directory")
    g.add_argument("--jobs", type=int)
    g.add_argument("-v", "--verbose", action="store_true")
    g.set_defaults(func=cmd_generate)

    e = sub.add_parser("ged", help="group evolution events between frames")
    e.add_argument("frames", help="directory of frame_<k>.tsv and groups_<k>.csv")
    e.add_argument("--undirected", action="store_true")
    e.add_argument("--alpha", type=float, default=0.5)
    e.add_argument("--beta", type=float, default=0.5)
    e.add_argument("--importance", choices=[i.value for i in Importance], default="sp")
    common(e, net=False)
    e.set_defaults(func=cmd_ged)

    s = sub.add_parser("sequences", help="evolution sequences for classification")
    s.add_argument("frames", help="directory of groups_<k>.csv (and frame_<k>.tsv)")
    s.add_argument("--events", required=True, help="CSV written by ged")
    s.add_argument("--window", type=int, default=4)
    s.add_argument("--format", choices=("csv", "arff"), default="csv")
    common(s, net=False)
    s.set_defaults(func=cmd_sequences)

    sc = sub.add_parser("score", help="precision, recall and F of predictions")
    sc.add_argument("predictions")
    sc.add_argument("labels")
    common(sc, net=False)
    sc.set_defaults(func=cmd_score)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help and --version
        return int(exc.code or 0)
    if not getattr(args, "func", None):
        print(parser.format_usage(), end="", file=sys.stderr)
        return 1
    try:
        args.func(args)
    except (MlsnaError, OSError) as exc:
        print(f"mlsna: error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001
        print(f"mlsna: internal error: {exc!r}", file=sys.stderr)
        return 2
    return 0
