"""Random r-out regular digraphs: generation, exploration, diameters,
stationary distributions, tower detection, branching-process comparisons,
random DFAs, and a seeded sweep harness."""

from .branching import (
    GwSample,
    ModelConstants,
    coupling_tv,
    gw_sample,
    gw_tail_prob,
    solve_constants,
)
from .dfa import Dfa, random_dfa, run_word, uniform_word_visit_law
from .exploration import (
    BfsResult,
    GrowthProfile,
    ibfs,
    in_growth_profile,
    k0,
    k1,
    obfs,
)
from .flags import FlagParams, FlagReport, find_flags, is_flag
from .graph import Digraph, generate, generate_simple, loop_vertices
from .harness import SweepConfig, TrialRecord, emit, estimate_constants, run_sweep
from .metrics import DiameterReport, diameter, diameter_restricted, sample_distance
from .stationary import (
    EscapeProbability,
    MazeHardness,
    StationaryProfile,
    escape_probability,
    maze_hardness,
    mean_return_time,
    stationary_direct,
    stationary_power,
    transition_row,
    validate_pimax_bound,
    validate_pimin_bound,
)
from .structure import SccDecomposition, is_attractive, period, scc_decompose

__version__ = "0.1.0"

__all__ = [
    "BfsResult",
    "Dfa",
    "DiameterReport",
    "Digraph",
    "EscapeProbability",
    "FlagParams",
    "FlagReport",
    "GrowthProfile",
    "GwSample",
    "MazeHardness",
    "ModelConstants",
    "SccDecomposition",
    "StationaryProfile",
    "SweepConfig",
    "TrialRecord",
    "coupling_tv",
    "diameter",
    "diameter_restricted",
    "emit",
    "escape_probability",
    "estimate_constants",
    "find_flags",
    "generate",
    "generate_simple",
    "gw_sample",
    "gw_tail_prob",
    "ibfs",
    "in_growth_profile",
    "is_attractive",
    "is_flag",
    "k0",
    "k1",
    "loop_vertices",
    "maze_hardness",
    "mean_return_time",
    "obfs",
    "period",
    "random_dfa",
    "run_sweep",
    "run_word",
    "sample_distance",
    "scc_decompose",
    "solve_constants",
    "stationary_direct",
    "stationary_power",
    "transition_row",
    "uniform_word_visit_law",
    "validate_pimax_bound",
    "validate_pimin_bound",
]
