"""Memory-bounded generational genetic programming.

A generational GP engine whose breeding phase never holds more than
popsize + 2 * max(1, nthreads) genome buffers at once, plus a naive
two-population reference engine used as its correctness oracle.
"""

from .breeding_plan import BreedingPlan, SelectionOutcome
from .engine import (
    EvolutionResult,
    Individual,
    PooledEngine,
    RunConfig,
    run_evolution,
    tournament_select,
)
from .expr_pool import BufferPool, PoolExhaustedError
from .metrics import GenerationStats, emit_csv
from .naive import NaiveEngine, run_evolution_naive
from .problems import PROBLEMS, Problem, get_problem

__all__ = [
    "BreedingPlan",
    "BufferPool",
    "EvolutionResult",
    "GenerationStats",
    "Individual",
    "NaiveEngine",
    "PROBLEMS",
    "PoolExhaustedError",
    "PooledEngine",
    "Problem",
    "RunConfig",
    "SelectionOutcome",
    "emit_csv",
    "get_problem",
    "run_evolution",
    "run_evolution_naive",
    "tournament_select",
]
