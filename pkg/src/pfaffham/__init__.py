"""Hamiltonian cycles in bipartite Pfaffian graphs: another-cycle search,
lollipop walks, decomposition DPs, exhaustive oracles and a hardness generator."""

from .graph import Graph, GraphError, HamCycle, bipartition, parse_graph, validate_cycle

__all__ = ["Graph", "GraphError", "HamCycle", "bipartition", "parse_graph", "validate_cycle"]
