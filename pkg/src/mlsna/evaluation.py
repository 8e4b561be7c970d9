"""Confusion matrices and normalized mutual information between partitions."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidParameter, UniverseMismatch
from .graph import Partition, node_key

SINGLETON = "singleton"
DROP = "drop"


@dataclass(frozen=True)
class ConfusionMatrix:
    rows: tuple
    cols: tuple
    counts: tuple

    @property
    def n(self) -> int:
        return sum(map(sum, self.counts))

    def row_sums(self):
        return [sum(r) for r in self.counts]

    def col_sums(self):
        return [sum(c) for c in zip(*self.counts)] if self.counts else []


def _labelling(p: Partition, keep, unassigned):
    labels = {}
    for g in p.groups:
        for v in g.members:
            if v in labels:
                raise InvalidParameter("overlapping groups cannot be scored")
            labels[v] = ("g", g.id)
    for v in p.unassigned:
        if unassigned == SINGLETON:
            labels[v] = ("u", v)
    return {v: lab for v, lab in labels.items() if v in keep}


def _universe(model: Partition, extracted: Partition, unassigned: str):
    if unassigned not in (SINGLETON, DROP):
        raise InvalidParameter(f"unknown unassigned convention {unassigned!r}")
    a, b = model.nodes, extracted.nodes
    if a != b:
        raise UniverseMismatch(f"partitions cover different nodes ({len(a)} vs {len(b)})")
    keep = set(a)
    if unassigned == DROP:
        keep -= model.unassigned | extracted.unassigned
    return keep


def confusion_matrix(model: Partition, extracted: Partition,
                     unassigned: str = SINGLETON) -> ConfusionMatrix:
    """n_ij = |model group i & extracted group j|.

    Unassigned nodes form singleton groups, or are left out with ``drop``.
    """
    keep = _universe(model, extracted, unassigned)
    la = _labelling(model, keep, unassigned)
    lb = _labelling(extracted, keep, unassigned)
    rows = sorted(set(la.values()), key=lambda t: (t[0], node_key(t[1])))
    cols = sorted(set(lb.values()), key=lambda t: (t[0], node_key(t[1])))
    ri = {r: i for i, r in enumerate(rows)}
    ci = {c: j for j, c in enumerate(cols)}
    counts = [[0] * len(cols) for _ in rows]
    for v in keep:
        counts[ri[la[v]]][ci[lb[v]]] += 1
    return ConfusionMatrix(tuple(r[1] for r in rows), tuple(c[1] for c in cols),
                           tuple(tuple(r) for r in counts))


def nmi_from_matrix(cm: ConfusionMatrix) -> float:
    n = cm.n
    if n == 0:
        return 1.0
    ni = cm.row_sums()
    nj = cm.col_sums()
    if len(ni) == len(nj) and all(max(row) == a for row, a in zip(cm.counts, ni)):
        # identical up to relabeling; skip the rounding of the log sums
        return 1.0
    num = 0.0
    for i, row in enumerate(cm.counts):
        for j, nij in enumerate(row):
            if nij:
                num += nij * math.log(nij * n / (ni[i] * nj[j]))
    den = sum(a * math.log(a / n) for a in ni if a) + sum(b * math.log(b / n) for b in nj if b)
    if den == 0:
        # both partitions are one all-covering group
        return 1.0
    value = -2.0 * num / den
    return min(1.0, max(0.0, value))


def nmi(model: Partition, extracted: Partition, unassigned: str = SINGLETON) -> float:
    """Normalized mutual information (natural log)."""
    return nmi_from_matrix(confusion_matrix(model, extracted, unassigned))
