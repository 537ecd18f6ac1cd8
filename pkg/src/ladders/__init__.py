"""Finite lattice toolkit for ladders.

Modules
-------
core_poset
    Finite posets, lattice operations, ladder and breadth predicates.
extension
    Cofinal-copy extensions and the reverse projection construction.
rho_lattice
    Lattices built from rho-functions, their axioms and box checks.
club_ladder
    Stage-by-stage breadth-two construction over the E-order.
diamond_ladder
    Stage-by-stage construction over the D-order with a tree of subsets.
cohen_skeleton
    Ideal families, conditions and the subsets they determine.
io, cli
    JSON and DOT formats and the ``ladders`` command.
"""
from .core_poset import FinitePoset, Report, Witness

__all__ = ["FinitePoset", "Report", "Witness"]
__version__ = "0.1.0"
