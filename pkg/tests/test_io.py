import pytest

from mlsna.errors import InvalidParameter
from mlsna.graph import Partition, load_msn
from mlsna.io import (atomic_write, read_dsn, read_edge_list, read_partition, write_edge_list,
                      write_partition)


def test_edge_list_round_trip(tmp_path):
    m = load_msn([("a", "b", "1", 0.5), ("b", "c", "2", 1.0), ("c", "a", "1", 2.0)])
    p = tmp_path / "e.tsv"
    write_edge_list(m, p)
    assert read_edge_list(p) == m


def test_edge_list_header_comments_and_short_rows(tmp_path):
    p = tmp_path / "e.tsv"
    p.write_text("# comment\nsource\ttarget\tlayer\tweight\n1\t2\n2\t3\tx\t0.5  # trailing\n\n")
    m = read_edge_list(p)
    assert m.weight("1", "2", "1") == 1.0 and m.weight("2", "3", "x") == 0.5


def test_edge_list_bad_rows(tmp_path):
    p = tmp_path / "e.tsv"
    p.write_text("1\n")
    with pytest.raises(InvalidParameter):
        read_edge_list(p)
    p.write_text("1\t2\t1\t1\n1\t2\t1\tzz\n")
    with pytest.raises(InvalidParameter):
        read_edge_list(p)


def test_event_log(tmp_path):
    p = tmp_path / "ev.tsv"
    p.write_text("source\ttarget\tlayer\tweight\ttime\na\tb\t1\t1\t0\na\tb\t1\t2\t3\n")
    d = read_dsn(p, window=10)
    assert len(d) == 1 and d.frames[0].weight("a", "b", "1") == 3


def test_partition_round_trip(tmp_path):
    p = Partition.from_labels({"1": "a", "2": "a", "3": "b", "4": -1})
    f = tmp_path / "p.csv"
    write_partition(p, f)
    assert f.read_text().splitlines() == ["node,group_id", "1,a", "2,a", "3,b", "4,-1"]
    back = read_partition(f)
    assert back.labels() == p.labels() and back.unassigned == {"4"}


def test_partition_duplicate_node(tmp_path):
    f = tmp_path / "p.csv"
    f.write_text("1,a\n1,b\n")
    with pytest.raises(InvalidParameter):
        read_partition(f)


def test_atomic_write_leaves_nothing_on_failure(tmp_path):
    target = tmp_path / "out.txt"
    target.write_text("old")
    with pytest.raises(RuntimeError):
        with atomic_write(target) as fh:
            fh.write("partial")
            raise RuntimeError("boom")
    assert target.read_text() == "old"
    assert [p.name for p in tmp_path.iterdir()] == ["out.txt"]
