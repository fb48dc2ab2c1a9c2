"""Directional sector-broadcast simulator and coverage-area model toolkit."""

from .geometry import Point2D, Sector, bearing, circular_diff, dist, in_sector
from .leafmodel import (
    DegenerateLeafError,
    LeafModel,
    build_leaf,
    chain_vertices,
    next_edge,
    predicted_ratio,
    relative_error,
    triangle_area,
)
from .scenario import (
    ConfigError,
    Placement,
    Scenario,
    ScenarioConfig,
    derive_seed,
    generate,
)
from .engine import (
    SOURCE_ID,
    BroadcastOutcome,
    GridIndex,
    build_index,
    neighbors_in_sector,
    propagate,
)
from .experiments import (
    DEFAULT_D_GRID,
    DEFAULT_N_GRID,
    DEFAULT_THETA_GRID_DEG,
    CellResult,
    SweepSpec,
    linear_fit_r2,
    run_cell,
    run_sweep,
)
from .render import render_svg

__version__ = "0.1.0"

__all__ = [
    "Point2D", "Sector", "bearing", "circular_diff", "dist", "in_sector",
    "DegenerateLeafError", "LeafModel", "build_leaf", "chain_vertices",
    "next_edge", "predicted_ratio", "relative_error", "triangle_area",
    "ConfigError", "Placement", "Scenario", "ScenarioConfig", "derive_seed",
    "generate",
    "SOURCE_ID", "BroadcastOutcome", "GridIndex", "build_index",
    "neighbors_in_sector", "propagate",
    "DEFAULT_D_GRID", "DEFAULT_N_GRID", "DEFAULT_THETA_GRID_DEG",
    "CellResult", "SweepSpec", "linear_fit_r2", "run_cell", "run_sweep",
    "render_svg",
    "__version__",
]
