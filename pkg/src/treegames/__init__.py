"""Equilibrium computation for graphical games on trees.

The package provides a grid-based approximate solver with per-edge
admissibility tables, an exact solver over rational arithmetic, equilibrium
enumeration and selection, multi-action and sparse-graph extensions, and
brute-force oracles for cross-checking.
"""

from .game import (
    GraphicalGame,
    LocalMatrix,
    expected_payoff,
    is_eps_nash,
    is_tree,
    make_game,
    max_regret,
    regret,
    validate,
)
from .generators import (
    battle_of_sexes_game,
    coordination_game,
    edge_coordination_game,
    generate_random_connected_game,
    generate_random_cycle_game,
    generate_random_tree_game,
    generate_random_rational_tree_game,
    matching_pennies_game,
    path_coordination_game,
    rationalize_game,
    single_vertex_game,
    star_dominant_leaves_game,
)
from .grid import TauGrid, compute_tau
from .orientation import TreeOrientation, orient, pick_root
from .approx import (
    Certificate,
    EdgeTable,
    RootTable,
    TableSet,
    approximate_tree_nash,
    downstream_pass,
    enumerate_grid_equilibria,
    upstream_pass,
)
from .exact import (
    DeltaForm,
    ExactTables,
    RationalInterval,
    Strip,
    StripTable,
    delta_eval,
    delta_in_w,
    exact_downstream,
    exact_tree_nash,
    exact_upstream,
    leaf_table,
    solve_w_set,
)
from .select import Objective, SelectResult, objective_value, select_equilibrium
from .transform import (
    ClusterGame,
    MultiActionGame,
    MultiMatrix,
    approximate_tree_nash_multi,
    condense_to_tree,
    is_eps_nash_multi,
    make_multi_game,
    merge_vertices,
    multi_regret,
    simplex_grid,
    solve_cluster_tree,
    solve_sparse,
    validate_multi,
)
from .oracle import (
    ScanReport,
    brute_force_equilibria,
    check_product_bounds,
    verify_table_entry,
)
from .gamefile import (
    load_equilibrium,
    load_game,
    save_equilibrium,
    save_game,
)
from .render import render_table, table_cells
from .errors import (
    GameFileError,
    GameValidationError,
    NoEquilibriumError,
    NotATreeError,
    RationalPayoffsRequiredError,
    SizeGuardExceeded,
    TreegamesError,
)

__version__ = "0.1.0"
