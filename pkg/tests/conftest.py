import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mlsna.graph import load_msn  # noqa: E402

DATA = Path(__file__).parent / "data"

# Per-layer neighbourhoods of the six-node three-layer example, read as an
# undirected presence graph (directions of the example are not recoverable).
FIG23 = {
    "l1": ["x-u", "x-y", "x-z", "y-z", "z-t", "z-u", "u-v", "t-v"],
    "l2": ["x-u", "x-v", "x-y", "x-z", "y-v", "u-v"],
    "l3": ["x-u", "x-v", "x-y", "x-z", "y-v", "y-z", "z-t", "t-v"],
}

# The l1 tuples spelled out in the prose of the example
FIG23_L1_TUPLES = [("x", "y"), ("y", "x"), ("x", "z"), ("z", "x"), ("y", "z"),
                   ("u", "z"), ("u", "v"), ("v", "u")]

# Single-layer edge example: x and y share b, f and g
FIG24 = {"x": ["a", "b", "f", "g", "h", "y"], "y": ["b", "c", "d", "e", "f", "g"]}

KITE_NAMES = ["Andre", "Beverly", "Carol", "Diane", "Ed", "Fernando", "Garth",
              "Heather", "Ike", "Jane"]


def fig23_msn():
    recs = []
    for l, pairs in FIG23.items():
        for p in pairs:
            a, b = p.split("-")
            recs.append((a, b, l, 1.0))
    return load_msn(recs, undirected=True)


def fig24_msn():
    recs = []
    for x, ys in FIG24.items():
        for y in ys:
            if (y, x, "1", 1.0) not in recs:
                recs.append((x, y, "1", 1.0))
    return load_msn(recs, undirected=True)


def kite_msn():
    import networkx as nx

    g = nx.krackhardt_kite_graph()
    recs = [(KITE_NAMES[a], KITE_NAMES[b], "1", 1.0) for a, b in g.edges()]
    return load_msn(recs, undirected=True)


@pytest.fixture
def fig23():
    return fig23_msn()


@pytest.fixture
def fig24():
    return fig24_msn()


@pytest.fixture
def kite():
    return kite_msn()


@pytest.fixture(scope="session")
def karate():
    from mlsna.datasets import karate as load

    return load()


def pytest_terminal_summary(terminalreporter):
    lines = [line for name, mod in list(sys.modules.items())
             if name.endswith("test_acceptance") for line in getattr(mod, "RESULTS", [])]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
