"""CVRP heuristic solver: instance handling, solving, and validation."""

from carver._core import (
    FeasibilityReport,
    Instance,
    ParseError,
    RunReport,
    SolverParams,
    check_routes,
    format_sol,
    generate_instance,
    greedy_route_estimate,
    load_instance,
    neighbor_lists,
    parse_instance,
    parse_sol,
    project_coordinates,
    routes_cost,
    solve,
)

__all__ = [
    "FeasibilityReport",
    "Instance",
    "ParseError",
    "RunReport",
    "SolverParams",
    "check_routes",
    "format_sol",
    "generate_instance",
    "greedy_route_estimate",
    "load_instance",
    "neighbor_lists",
    "parse_instance",
    "parse_sol",
    "project_coordinates",
    "routes_cost",
    "solve",
]
