"""Simulator for a decentralized weighted minimum vertex cover protocol."""

from .baselines import SolverResult, brute_force_mwvc, greedy_mwvc, greedy_pruned_mwvc, redundancy_prune
from .engine import RunReport, Schedule, SimulationState, run, validate_cover
from .experiments import AggregateRow, ExperimentConfig, apw, run_experiment
from .graph import (
    Graph,
    Topology,
    TopologyKind,
    WeightDistribution,
    WeightKind,
    assign_weights,
    generate,
    load_graph,
    save_graph,
)
from .protocol import OptimizeRule

__all__ = [
    "AggregateRow",
    "ExperimentConfig",
    "Graph",
    "OptimizeRule",
    "RunReport",
    "Schedule",
    "SimulationState",
    "SolverResult",
    "Topology",
    "TopologyKind",
    "WeightDistribution",
    "WeightKind",
    "apw",
    "assign_weights",
    "brute_force_mwvc",
    "generate",
    "greedy_mwvc",
    "greedy_pruned_mwvc",
    "load_graph",
    "redundancy_prune",
    "run",
    "run_experiment",
    "save_graph",
    "validate_cover",
]
