"""Interactive ant-colony TSP solver with human steering.

An Ant Colony System whose running colony can be guided by editing a per-edge
guidance matrix scaled by a global impact factor, with exact oracles and a
replayable session protocol so every steering experiment is reproducible.
"""

from .instance import (Instance, Tour, ParseError, distance, parse_tsplib,
                       load_tsplib, load_bundled, list_bundled, tour_length)
from .oracle import (OptimalRecord, exact_optimum, brute_force_optimum,
                     nearest_neighbor_tour, count_crossings)
from .acs import (AcsParams, PheromoneMatrix, SolutionRecord,
                  InfeasibleStepError, construct_solution, two_opt, run)
from .steering import SteeringState, SteeringError, steered_select_next
from .session import (Session, SessionError, create_session, cluster_solve,
                      run_scripted)

__all__ = [
    "Instance", "Tour", "ParseError", "distance", "parse_tsplib",
    "load_tsplib", "load_bundled", "list_bundled", "tour_length",
    "OptimalRecord", "exact_optimum", "brute_force_optimum",
    "nearest_neighbor_tour", "count_crossings",
    "AcsParams", "PheromoneMatrix", "SolutionRecord", "InfeasibleStepError",
    "construct_solution", "two_opt", "run",
    "SteeringState", "SteeringError", "steered_select_next",
    "Session", "SessionError", "create_session", "cluster_solve",
    "run_scripted",
]

__version__ = "0.1.0"
