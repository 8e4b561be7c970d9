"""Analysis of multi-layered social networks.

Measures over multi-layered neighbourhoods, CLECC community extraction,
benchmark generators, NMI scoring, group evolution discovery and evolution
sequence export.
"""

__version__ = "0.1.0"

from .graph import Dsn, Group, Msn, Partition, induced_subgraph, layer_view, load_dsn, load_msn  # noqa: F401
from .rng import Rng  # noqa: F401
