"""Bundled reference data and loaders for external reference networks.

The karate club network and its post-fission factions ship with the
package.  The football and dolphins networks are not redistributable here;
they are read from a data directory (``MLSNA_DATA_DIR`` or an explicit
path) holding ``football.gml`` and ``dolphins.gml`` as published by
M. Newman, plus ``dolphins_truth.csv`` (``node,group_id``).
"""

from __future__ import annotations

import csv
import os
from importlib import resources
from pathlib import Path

from .graph import Msn, Partition, load_msn
from .io import read_edge_records, read_partition


def _data(name):
    return resources.files("mlsna").joinpath("data", name)


def karate() -> Msn:
    with resources.as_file(_data("karate.tsv")) as p:
        return load_msn(read_edge_records(p), undirected=True)


def karate_factions() -> Partition:
    """Club each member joined after the fission ("hi" or "john")."""
    with resources.as_file(_data("karate_factions.csv")) as p:
        return read_partition(p)


def football_groups() -> dict:
    """team -> (conference, group id reported for the CLECC method)."""
    out = {}
    with resources.as_file(_data("football_groups.tsv")) as p:
        with open(p, encoding="utf-8") as fh:
            rows = [r for r in csv.reader(fh, delimiter="\t") if r and not r[0].startswith("#")]
    for team, conf, gid in rows[1:]:
        out[team] = (conf, gid)
    return out


def data_dir(path=None) -> Path:
    return Path(path or os.environ.get("MLSNA_DATA_DIR", "data"))


def read_gml(path, label_attr="label") -> tuple:
    """Undirected single-layer Msn from a GML file plus node attributes."""
    import networkx as nx

    g = nx.read_gml(path, label=label_attr)
    records = []
    seen = set()
    for a, b in g.edges():
        a, b = str(a), str(b)
        if a == b or frozenset((a, b)) in seen:
            continue
        seen.add(frozenset((a, b)))
        records.append((a, b, "1", 1.0))
    msn = load_msn(records, nodes=[str(v) for v in g.nodes], undirected=True)
    attrs = {str(v): dict(d) for v, d in g.nodes(data=True)}
    return msn, attrs


def football(path=None) -> tuple:
    """(network, conference partition) of the college football network."""
    msn, attrs = read_gml(data_dir(path) / "football.gml")
    labels = {v: str(a.get("value")) for v, a in attrs.items()}
    return msn, Partition.from_labels(labels)


def dolphins(path=None) -> tuple:
    """(network, ground-truth partition) of the Doubtful Sound dolphins."""
    base = data_dir(path)
    msn, _ = read_gml(base / "dolphins.gml")
    return msn, read_partition(base / "dolphins_truth.csv")
