"""Artificial Bee Colony instrumented as a multi-layer temporal interaction network."""
from .bench import ObjectiveSpec, evaluate_rastrigin, evaluate_sphere
from .engine import (
    ColonyState,
    FoodSource,
    IterationRecord,
    PhaseOutcome,
    employed_phase,
    greedy_candidate,
    init_colony,
    iterate,
    onlooker_phase,
    roulette_probabilities,
    run_iteration,
    scout_phase,
)
from .errors import (
    BudgetExhausted,
    ConfigError,
    DataCorruptionError,
    InvalidInputError,
    NumericalError,
)
from .harness import ExperimentConfig, load_config, run_campaign, run_execution
from .inet import (
    EventLog,
    InfluenceEvent,
    Layer,
    LayeredWindowNetwork,
    WindowAccumulator,
    iteration_matrix,
    undirected_view,
    window_network,
)
from .netmetrics import (
    ccdf,
    component_stats,
    destruction_curve,
    interaction_diversity,
    weighted_degree,
)

__version__ = "0.1.0"
