"""Cubic vertex-transitive coset graphs with bounded semiregular order:
construction and desk-scale verification tools.

The package builds a family of cubic graphs on the cosets of an order-2
subgroup of an extraspecial-by-dihedral group, computes their automorphism
groups, and checks that every semiregular symmetry has order at most 6.
"""

__version__ = "0.1.0"

from .extraspecial import GroupContext, VAut, VElem, context
from .graphs import Graph, Partition, cayley_graph, coset_graph, gamma
from .groupg import CosetIndex, GElem, QElem, SemiregReport, max_semiregular_order
from .numth import PpdResult, primitive_prime_divisor
from .permaut import PermGroup, StabilizerAnalysis, graph_automorphisms

__all__ = [
    "GroupContext",
    "VAut",
    "VElem",
    "context",
    "Graph",
    "Partition",
    "cayley_graph",
    "coset_graph",
    "gamma",
    "CosetIndex",
    "GElem",
    "QElem",
    "SemiregReport",
    "max_semiregular_order",
    "PpdResult",
    "primitive_prime_divisor",
    "PermGroup",
    "StabilizerAnalysis",
    "graph_automorphisms",
    "__version__",
]
