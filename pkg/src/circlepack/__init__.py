"""Circle packing in the smallest square container.

Pipeline: quasi-physical penalty energy, L-BFGS local minimization,
maximal-empty-rectangle (action space) analysis with narrow-space
partitioning, partitioned-circle basin hopping, perturbation, and a
shrink/bisection post-processing of feasible patterns.
"""

__version__ = "0.1.0"

from .instance import Family, Instance, RecordsTable, custom_instance, known_best, load_records, make_instance
from .kernels import BACKEND, minimize_pattern
from .model import (
    EnergyReport,
    PartitionSets,
    Pattern,
    border_depths,
    energy,
    energy_gradient,
    energy_value_and_grad,
    is_feasible,
    pain_degree,
    pain_degrees,
    pair_depth,
    partition_sets,
    worst_overlap,
)
from .optim import MinimizeConfig, MinimizeResult, TerminationReason, minimize
from .actionspace import (
    ActionSpace,
    SpaceLists,
    Square,
    best_matching,
    circle_to_square,
    compute_action_spaces,
    is_narrow,
    rank_spaces,
    split_narrow,
)
from .hop import HopBatch, MoveKind, generate_neighbors, neighbour_space_occupy, place_item_in_space, swap_circles
from .perturb import perturb
from .search import (
    PostProcessResult,
    SolveResult,
    SolverConfig,
    default_l0,
    post_process,
    random_pattern,
    shrink_and_bisect,
    solve,
)
from .solution import SolutionFile, from_pattern, read_solution, serialize, deserialize, write_solution
from .svg import render_svg, write_svg

__all__ = [
    "__version__",
    "BACKEND",
    "Family",
    "Instance",
    "RecordsTable",
    "custom_instance",
    "known_best",
    "load_records",
    "make_instance",
    "Pattern",
    "EnergyReport",
    "PartitionSets",
    "border_depths",
    "pair_depth",
    "energy",
    "energy_gradient",
    "energy_value_and_grad",
    "pain_degree",
    "pain_degrees",
    "is_feasible",
    "worst_overlap",
    "partition_sets",
    "MinimizeConfig",
    "MinimizeResult",
    "TerminationReason",
    "minimize",
    "minimize_pattern",
    "Square",
    "ActionSpace",
    "SpaceLists",
    "circle_to_square",
    "compute_action_spaces",
    "rank_spaces",
    "is_narrow",
    "split_narrow",
    "best_matching",
    "MoveKind",
    "HopBatch",
    "place_item_in_space",
    "neighbour_space_occupy",
    "swap_circles",
    "generate_neighbors",
    "perturb",
    "SolverConfig",
    "SolveResult",
    "random_pattern",
    "solve",
    "post_process",
    "shrink_and_bisect",
    "PostProcessResult",
    "default_l0",
    "SolutionFile",
    "from_pattern",
    "read_solution",
    "write_solution",
    "serialize",
    "deserialize",
    "render_svg",
    "write_svg",
]
