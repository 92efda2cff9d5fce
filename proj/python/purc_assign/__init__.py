"""Perturbed-utility route choice traffic assignment."""

from ._core import (
    AssignmentResult,
    Link,
    Network,
    ODEntry,
    ODMatrix,
    ParseError,
    PrimalSolution,
    SolveStatus,
    TravelerType,
    generate_grid,
    gravity_demand,
    make_network,
    parse_network,
    parse_trips,
    primal_objective,
    primal_solve,
    scale_demand,
    solve,
    to_traveler_types,
    write_network,
    write_trips,
)

__all__ = [
    "AssignmentResult",
    "Link",
    "Network",
    "ODEntry",
    "ODMatrix",
    "ParseError",
    "PrimalSolution",
    "SolveStatus",
    "TravelerType",
    "generate_grid",
    "gravity_demand",
    "make_network",
    "parse_network",
    "parse_trips",
    "primal_objective",
    "primal_solve",
    "scale_demand",
    "solve",
    "to_traveler_types",
    "write_network",
    "write_trips",
]

__version__ = "0.1.0"
