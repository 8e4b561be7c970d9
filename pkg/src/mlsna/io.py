"""Edge-list, event-log and partition file formats.

Edge lists are tab separated ``source target layer weight`` lines.  A header
line is optional and ``#`` starts a comment.  Event logs add an integer
timestamp column.  Partitions are ``node,group_id`` CSV files where ``-1``
marks an unassigned node.
"""

from __future__ import annotations

import csv
import os
import tempfile
from contextlib import contextmanager
from pathlib import Path

from .errors import InvalidParameter
from .graph import Msn, Partition, load_dsn, load_msn, node_key


def _is_number(s):
    try:
        float(s)
        return True
    except ValueError:
        return False


def _rows(path, min_cols):
    with open(path, encoding="utf-8") as fh:
        first = True
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split("\t") if "\t" in line else line.split()
            if first:
                first = False
                # a header has a non-numeric value where a number belongs
                if len(parts) >= 4 and not _is_number(parts[3]):
                    continue
                if len(parts) >= min_cols and min_cols >= 5 and not _is_number(parts[4]):
                    continue
            if len(parts) < min_cols:
                raise InvalidParameter(f"{path}:{lineno}: expected at least {min_cols} columns")
            yield lineno, parts


def read_edge_records(path):
    """Records from an edge-list file; layer defaults to "1", weight to 1."""
    out = []
    for lineno, parts in _rows(path, 2):
        layer = parts[2] if len(parts) > 2 else "1"
        try:
            w = float(parts[3]) if len(parts) > 3 else 1.0
        except ValueError:
            raise InvalidParameter(f"{path}:{lineno}: bad weight {parts[3]!r}") from None
        out.append((parts[0], parts[1], layer, w))
    return out


def read_edge_list(path, undirected=False) -> Msn:
    return load_msn(read_edge_records(path), undirected=undirected)


def read_event_log(path):
    out = []
    for lineno, parts in _rows(path, 5):
        try:
            out.append((parts[0], parts[1], parts[2], float(parts[3]), int(parts[4])))
        except ValueError:
            raise InvalidParameter(f"{path}:{lineno}: bad weight or timestamp") from None
    return out


def read_dsn(path, window, overlap=0, undirected=False):
    return load_dsn(read_event_log(path), window, overlap, undirected=undirected)


@contextmanager
def atomic_write(path, mode="w"):
    """Write to a temp file next to ``path`` and rename it into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        kwargs = {} if "b" in mode else {"encoding": "utf-8", "newline": ""}
        with os.fdopen(fd, mode, **kwargs) as fh:
            yield fh
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def format_weight(w):
    return repr(float(w)) if w != int(w) else str(int(w))


def write_edge_list(msn: Msn, path):
    with atomic_write(path) as fh:
        fh.write("source\ttarget\tlayer\tweight\n")
        for (s, t, l) in sorted(msn.edges, key=lambda e: (node_key(e[2]), node_key(e[0]), node_key(e[1]))):
            fh.write(f"{s}\t{t}\t{l}\t{format_weight(msn.edges[(s, t, l)])}\n")


def read_partition(path) -> Partition:
    labels = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or row[0].startswith("#"):
                continue
            if len(row) < 2:
                raise InvalidParameter(f"{path}:{lineno}: expected node,group_id")
            node, gid = row[0].strip(), row[1].strip()
            if lineno == 1 and node == "node":
                continue
            if node in labels:
                raise InvalidParameter(f"{path}:{lineno}: node {node!r} listed twice")
            labels[node] = gid
    return Partition.from_labels(labels, unassigned_label="-1")


def write_partition(p: Partition, path, nodes=None):
    labels = p.labels()
    every = set(nodes) if nodes is not None else set(p.nodes)
    with atomic_write(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["node", "group_id"])
        for v in sorted(every, key=node_key):
            w.writerow([v, labels.get(v, -1)])
