"""Exact Hamiltonian-cycle search, instance generators and sweep tooling."""

from ._jit import JIT_ENABLED
from .generators import (GenerationError, IccsLayout, InstanceSpec, degree_param_to_m,
                         gen_degreebound, gen_gnm, gen_gnstar, gen_iccs, gen_knight,
                         iccs_mean_degree_bounds)
from .graph import (DeletionJournal, Graph, GraphFormatError, articulation_points, components,
                    delete_edge_journaled, is_connected, parse_edge_list, read_edge_list,
                    write_edge_list)
from .pruning import (Certificate, PruneOutcome, Reason, forced_degree_parity_test,
                      initial_check, prune_fixpoint, small_cutset_scan)
from .solver import (Hardness, Heuristic, Outcome, Phase, SearchConfig, SearchStats,
                     SolveOutcome, brute_force_oracle, classify_hardness, order_neighbors,
                     restart_schedule, solve, verify_cycle)

__version__ = "0.1.0"

__all__ = [
    "JIT_ENABLED", "GenerationError", "IccsLayout", "InstanceSpec", "degree_param_to_m",
    "gen_degreebound", "gen_gnm", "gen_gnstar", "gen_iccs", "gen_knight",
    "iccs_mean_degree_bounds", "DeletionJournal", "Graph", "GraphFormatError",
    "articulation_points", "components", "delete_edge_journaled", "is_connected",
    "parse_edge_list", "read_edge_list", "write_edge_list", "Certificate", "PruneOutcome",
    "Reason", "forced_degree_parity_test", "initial_check", "prune_fixpoint",
    "small_cutset_scan", "Hardness", "Heuristic", "Outcome", "Phase", "SearchConfig",
    "SearchStats", "SolveOutcome", "brute_force_oracle", "classify_hardness",
    "order_neighbors", "restart_schedule", "solve", "verify_cycle",
]
