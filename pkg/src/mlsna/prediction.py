"""Evolution sequences for event prediction, dataset export and scoring.

A row describes a group over ``window`` consecutive frames (its sizes and
the events between them) and is labelled with the event that follows.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

from .errors import EmptyDataset, InvalidParameter, LengthMismatch
from .evolution import EVENT_KINDS, FORMING
from .io import atomic_write

LABELS = tuple(k for k in EVENT_KINDS if k != FORMING)


@dataclass(frozen=True)
class SequenceRow:
    sizes: tuple
    events: tuple
    label: str

    def features(self) -> list:
        out = []
        for k, s in enumerate(self.sizes):
            out.append(s)
            if k < len(self.events):
                out.append(self.events[k])
        return out


def group_sizes(partitions: list) -> dict:
    return {(i, g.id): len(g) for i, p in enumerate(partitions) for g in p.groups}


def extract_sequences(chains: list, partitions: list, window: int = 4) -> list:
    """Rows for every chain position with ``window - 1`` earlier events and a next event."""
    if window < 2:
        raise InvalidParameter("window must be at least 2")
    sizes = group_sizes(partitions)
    rows = []
    for ch in chains:
        evs = ch.all_events
        for n in range(window - 1, len(evs)):
            lo = n - window + 1
            rows.append(SequenceRow(
                tuple(sizes[g] for g in ch.groups[lo:n + 1]),
                tuple(evs[lo:n]),
                evs[n]))
    return rows


def header(window: int) -> list:
    cols = []
    for k in range(window):
        off = window - 1 - k
        here = "n" if off == 0 else f"n-{off}"
        cols.append(f"size_{here}")
        if off:
            nxt = "n" if off == 1 else f"n-{off - 1}"
            cols.append(f"event_{here}_{nxt}")
    return cols + ["label"]


def export_dataset(rows: list, path, fmt: str = "csv"):
    """Write rows as CSV or as an ARFF-style file with nominal event types."""
    if not rows:
        raise EmptyDataset("no sequence rows to export")
    window = len(rows[0].sizes)
    cols = header(window)
    with atomic_write(path) as fh:
        if fmt == "csv":
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(cols)
            for r in rows:
                w.writerow(r.features() + [r.label])
        elif fmt == "arff":
            nominal = "{" + ",".join(LABELS) + "}"
            every = "{" + ",".join(EVENT_KINDS) + "}"
            fh.write("@relation group_evolution\n\n")
            for c in cols:
                if c.startswith("size"):
                    kind = "numeric"
                elif c == "label":
                    kind = nominal
                else:
                    kind = every
                fh.write(f"@attribute {c} {kind}\n")
            fh.write("\n@data\n")
            for r in rows:
                fh.write(",".join(map(str, r.features() + [r.label])) + "\n")
        else:
            raise InvalidParameter(f"unknown dataset format {fmt!r}")


def read_dataset(path) -> list:
    """Read rows back from a CSV written by ``export_dataset``."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        cols = next(reader)
        window = sum(1 for c in cols if c.startswith("size"))
        rows = []
        for rec in reader:
            feats = rec[:-1]
            sizes = tuple(int(feats[2 * k]) for k in range(window))
            events = tuple(feats[2 * k + 1] for k in range(window - 1))
            rows.append(SequenceRow(sizes, events, rec[-1]))
    return rows


@dataclass(frozen=True)
class ClassScore:
    precision: float
    recall: float
    f: float
    support: int
    tp: int
    fp: int
    fn: int


@dataclass(frozen=True)
class PRFReport:
    per_class: dict
    weighted_precision: float
    weighted_recall: float
    weighted_f: float


def prf(predictions: list, labels: list) -> PRFReport:
    """One-vs-rest precision, recall and F per class, plus support-weighted averages."""
    if len(predictions) != len(labels):
        raise LengthMismatch(f"{len(predictions)} predictions for {len(labels)} labels")
    classes = sorted(set(labels) | set(predictions), key=str)
    per = {}
    for c in classes:
        tp = sum(1 for p, t in zip(predictions, labels) if p == c and t == c)
        fp = sum(1 for p, t in zip(predictions, labels) if p == c and t != c)
        fn = sum(1 for p, t in zip(predictions, labels) if p != c and t == c)
        prec = tp / (tp + fp) if tp + fp else 0.0
        rec = tp / (tp + fn) if tp + fn else 0.0
        f = 2 * prec * rec / (prec + rec) if prec + rec else 0.0
        per[c] = ClassScore(prec, rec, f, tp + fn, tp, fp, fn)
    total = len(labels)

    def avg(attr):
        if not total:
            return 0.0
        return sum(getattr(s, attr) * s.support for s in per.values()) / total

    return PRFReport(per, avg("precision"), avg("recall"), avg("f"))
