"""Seeded Artificial Bee Colony with influence-event emission.

One food source per bee; source index doubles as bee identity.  Each iteration
runs the employed, onlooker and scout phases in that order.  Only accepted
(strictly improving) moves emit influence events, and every scout restart
emits a self-loop.
"""
from dataclasses import dataclass, field
from typing import Iterator, List, Optional

import numpy as np

from .bench import ObjectiveSpec
from .errors import BudgetExhausted, ConfigError, InvalidInputError, NumericalError
from .inet import InfluenceEvent, Layer


class ColonyRNG:
    """All random draws of a run go through here.

    Backed by numpy's PCG64 seeded with the run seed.  Tests replace or
    subclass it to force or record the partner and phi draws.
    """

    def __init__(self, seed: int):
        self.seed = seed
        self.generator = np.random.Generator(np.random.PCG64(seed))

    def partner(self, exclude: int, n: int) -> int:
        """Uniform index in ``[0, n)`` other than ``exclude``."""
        j = int(self.generator.integers(n - 1))
        return j + 1 if j >= exclude else j

    def phi(self, d: int) -> np.ndarray:
        return self.generator.uniform(-1.0, 1.0, d)

    def spin(self, cumulative: np.ndarray) -> int:
        """Roulette-wheel pick given the cumulative probability vector."""
        r = self.generator.random() * cumulative[-1]
        k = int(np.searchsorted(cumulative, r, side="right"))
        return min(k, len(cumulative) - 1)

    def position(self, lower: float, upper: float, d: int) -> np.ndarray:
        return self.generator.uniform(lower, upper, d)


@dataclass
class FoodSource:
    index: int
    position: np.ndarray
    fitness_raw: float
    trials: int = 0


@dataclass
class PhaseOutcome:
    events: List[InfluenceEvent] = field(default_factory=list)
    evaluations: int = 0
    improvements: int = 0


@dataclass
class IterationRecord:
    iteration: int
    employed: PhaseOutcome
    onlooker: PhaseOutcome
    scout: PhaseOutcome
    best_fitness: float
    evaluations_used: int

    @property
    def events(self) -> List[InfluenceEvent]:
        return self.employed.events + self.onlooker.events + self.scout.events

    @property
    def scouts(self) -> int:
        return self.scout.evaluations


@dataclass
class ColonyState:
    spec: ObjectiveSpec
    sources: List[FoodSource]
    rng: ColonyRNG
    iteration: int = 0
    evaluations_used: int = 0
    best_fitness_ever: float = float("inf")
    best_position_ever: Optional[np.ndarray] = None
    evaluation_budget: Optional[int] = None
    clamp_bounds: bool = True
    record_onlooker_partner: bool = False
    events: List[InfluenceEvent] = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.sources)

    @property
    def fitness(self) -> np.ndarray:
        return np.array([s.fitness_raw for s in self.sources])

    def evaluate(self, x: np.ndarray) -> float:
        f = self.spec(x)
        if not np.isfinite(f):
            raise NumericalError(
                f"non-finite objective value {f!r} at iteration {self.iteration + 1}"
            )
        self.evaluations_used += 1
        if f < self.best_fitness_ever:
            self.best_fitness_ever = f
            self.best_position_ever = x.copy()
        return f

    def can_run_iteration(self) -> bool:
        # worst case: every source scouts, N + N + N evaluations
        if self.evaluation_budget is None:
            return True
        return self.evaluations_used + 3 * self.n <= self.evaluation_budget


def init_colony(
    spec: ObjectiveSpec,
    n_bees: int,
    seed: int,
    *,
    evaluation_budget: Optional[int] = None,
    clamp_bounds: bool = True,
    record_onlooker_partner: bool = False,
) -> ColonyState:
    if n_bees < 2:
        raise ConfigError(f"n_bees must be >= 2 (a move needs a distinct partner), got {n_bees}")
    if evaluation_budget is not None and evaluation_budget < n_bees:
        raise ConfigError(
            f"evaluation_budget ({evaluation_budget}) cannot cover initialization of {n_bees} bees"
        )
    state = ColonyState(
        spec=spec,
        sources=[],
        rng=ColonyRNG(seed),
        evaluation_budget=evaluation_budget,
        clamp_bounds=clamp_bounds,
        record_onlooker_partner=record_onlooker_partner,
    )
    for i in range(n_bees):
        x = state.rng.position(spec.lower_bound, spec.upper_bound, spec.dimensions)
        state.sources.append(FoodSource(i, x, state.evaluate(x)))
    return state


def greedy_candidate(state: ColonyState, i: int, j: int, phi=None) -> np.ndarray:
    """Move source ``i`` relative to partner ``j`` with a per-dimension phi in [-1, 1].

    ``phi`` may be passed explicitly; otherwise it is drawn from the colony RNG.
    """
    if i == j:
        raise InvalidInputError(f"source and partner must differ, both are {i}")
    xi = state.sources[i].position
    xj = state.sources[j].position
    if phi is None:
        phi = state.rng.phi(len(xi))
    v = xi + np.asarray(phi, dtype=float) * (xi - xj)
    if state.clamp_bounds:
        np.clip(v, state.spec.lower_bound, state.spec.upper_bound, out=v)
    return v


def fitness_transform(f: np.ndarray) -> np.ndarray:
    """Map objective values (lower is better) to positive, higher-is-better quality."""
    f = np.asarray(f, dtype=float)
    return np.where(f >= 0, 1.0 / (1.0 + np.abs(f)), 1.0 + np.abs(f))


def roulette_probabilities(state: ColonyState) -> np.ndarray:
    quality = fitness_transform(state.fitness)
    return quality / quality.sum()


def _try_move(state: ColonyState, s: int, j: int, outcome: PhaseOutcome) -> bool:
    source = state.sources[s]
    v = greedy_candidate(state, s, j)
    f = state.evaluate(v)
    outcome.evaluations += 1
    if f < source.fitness_raw:
        source.position = v
        source.fitness_raw = f
        source.trials = 0
        outcome.improvements += 1
        return True
    source.trials += 1
    return False


def employed_phase(state: ColonyState) -> PhaseOutcome:
    outcome = PhaseOutcome()
    t = state.iteration + 1
    for i in range(state.n):
        j = state.rng.partner(i, state.n)
        if _try_move(state, i, j, outcome):
            outcome.events.append(InfluenceEvent(t, i, j, Layer.EMPLOYED))
    return outcome


def onlooker_phase(state: ColonyState) -> PhaseOutcome:
    """N onlooker slots; slot ``o`` is recruited to source ``s`` by roulette.

    Probabilities are fixed for the whole phase, computed from the sources as
    the employed phase left them.
    """
    outcome = PhaseOutcome()
    t = state.iteration + 1
    cumulative = np.cumsum(roulette_probabilities(state))
    for o in range(state.n):
        s = state.rng.spin(cumulative)
        j = state.rng.partner(s, state.n)
        if _try_move(state, s, j, outcome):
            outcome.events.append(InfluenceEvent(t, o, s, Layer.ONLOOKER))
            if state.record_onlooker_partner:
                outcome.events.append(InfluenceEvent(t, o, j, Layer.ONLOOKER))
    return outcome


def scout_phase(state: ColonyState, limit: int) -> PhaseOutcome:
    """Restart every source whose failure count exceeds ``limit``."""
    outcome = PhaseOutcome()
    t = state.iteration + 1
    spec = state.spec
    for source in state.sources:
        if source.trials > limit:
            x = state.rng.position(spec.lower_bound, spec.upper_bound, spec.dimensions)
            source.position = x
            source.fitness_raw = state.evaluate(x)
            source.trials = 0
            outcome.evaluations += 1
            outcome.events.append(InfluenceEvent(t, source.index, source.index, Layer.SCOUT))
    return outcome


def run_iteration(state: ColonyState, limit: int) -> IterationRecord:
    if not state.can_run_iteration():
        raise BudgetExhausted(
            f"{state.evaluations_used} of {state.evaluation_budget} evaluations used; "
            f"a further iteration may need {3 * state.n}"
        )
    employed = employed_phase(state)
    onlooker = onlooker_phase(state)
    scout = scout_phase(state, limit)
    state.iteration += 1
    record = IterationRecord(
        state.iteration, employed, onlooker, scout, state.best_fitness_ever, state.evaluations_used
    )
    state.events.extend(record.events)
    return record


def iterate(state: ColonyState, limit: int) -> Iterator[IterationRecord]:
    """Yield iteration records until the evaluation budget is exhausted."""
    while state.can_run_iteration():
        yield run_iteration(state, limit)
