"""Information-production games on follower networks.

Players choose a production rate; cost is production minus the attention
received from their own feed and the attention their posts earn from
followers.  The package provides the cost model, centralized equilibrium
solvers, a gossip-based distributed seeking scheme with a compiled hot
path, and topology reconstruction from an observed equilibrium.
"""
from ._backend import COMPILED, backend_name
from .digraph import (
    Digraph,
    EdgeListParseError,
    build_interference,
    is_strongly_connected,
    load_edge_list,
    save_edge_list,
    strongly_connected_components,
)
from .gossip import GossipConfig, Trajectory, TrajectoryRecord, run
from .model import (
    GameInstance,
    GameParams,
    attention_utility,
    feed_mass,
    finite_difference_dependencies,
    info_utility,
    own_gradient,
    production_cost,
    total_cost,
)
from .reconstruct import ReconstructionSpec, load_reconstruction_spec, reconstruct
from .scenario import (
    Scenario,
    ScenarioError,
    build_game,
    bundled_data_path,
    bundled_scenario_path,
    fig2_scenario,
    load_scenario,
    save_scenario,
)
from .solvers import (
    NEReport,
    StepSchedule,
    best_response,
    best_response_iteration,
    br_gap,
    full_info_projected_gradient,
    ne_residual,
)

__version__ = "0.1.0"

__all__ = [
    "COMPILED",
    "Digraph",
    "EdgeListParseError",
    "GameInstance",
    "GameParams",
    "GossipConfig",
    "NEReport",
    "ReconstructionSpec",
    "Scenario",
    "ScenarioError",
    "StepSchedule",
    "Trajectory",
    "TrajectoryRecord",
    "attention_utility",
    "backend_name",
    "best_response",
    "best_response_iteration",
    "br_gap",
    "build_game",
    "build_interference",
    "bundled_data_path",
    "bundled_scenario_path",
    "feed_mass",
    "fig2_scenario",
    "finite_difference_dependencies",
    "full_info_projected_gradient",
    "info_utility",
    "is_strongly_connected",
    "load_edge_list",
    "load_reconstruction_spec",
    "load_scenario",
    "ne_residual",
    "own_gradient",
    "production_cost",
    "reconstruct",
    "run",
    "save_edge_list",
    "save_scenario",
    "strongly_connected_components",
    "total_cost",
    "__version__",
]
