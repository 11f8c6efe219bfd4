"""R* randomized heuristic search on 8-connected grids, with test-map generators and a sweep harness."""

from .grid import C_D, C_HV, Grid, check_path, load_map, neighbors8, octile_dist, path_length, save_map
from .rstar import RStarParams, auto_params, rstar_plan, validate_params
from .search import astar, dijkstra_oracle, weighted_astar

__all__ = [
    "C_D", "C_HV", "Grid", "check_path", "load_map", "neighbors8", "octile_dist", "path_length",
    "save_map", "RStarParams", "auto_params", "rstar_plan", "validate_params", "astar",
    "dijkstra_oracle", "weighted_astar",
]
