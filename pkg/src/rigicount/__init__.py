"""Workbench for realization counts of minimally rigid graphs.

Modules: graphs (integer encodings and subgraph machinery), rigidity
(pebble game and rank tests), constructions (rigidity-preserving steps),
algebra (prime-field Groebner engine), counting (pinned systems and the
count cache), bounds (exact bound formulas), lab (enumeration and
surveys), cli (the command-line front end).
"""

from .counting import EUCLIDEAN, SPHERICAL, CountModel, realization_count
from .graphs import Graph, GraphCode, canonical_code, decode, encode

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "GraphCode",
    "canonical_code",
    "decode",
    "encode",
    "CountModel",
    "EUCLIDEAN",
    "SPHERICAL",
    "realization_count",
    "__version__",
]
