"""Seeded experiment campaigns.

A campaign runs ``n_executions`` independent executions with seeds
``base_seed + index``.  Each execution writes, under
``<output_dir>/run_<index>/``:

* ``events.csv``     every influence event
* ``metrics.csv``    one row per iteration
* ``windows.csv``    component statistics per window size, every ``metric_stride`` iterations
* ``degree_ccdf.csv`` weighted-degree CCDF of the final cumulative aggregated network
* ``snapshot_<pct>_<layer>.txt`` / ``.ppm`` cumulative layer matrices at each snapshot fraction

and the campaign writes ``summary.csv`` plus ``config.ini`` (the resolved
configuration) in ``output_dir``.
"""
import configparser
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import export
from .bench import ObjectiveSpec, RASTRIGIN_BOUNDS
from .engine import init_colony, iterate
from .errors import ConfigError
from .export import MatrixFile, MetricsRow, MetricsSeries
from .inet import EventLog, InfluenceEvent, WindowAccumulator, undirected_view, window_network
from .netmetrics import ccdf, component_stats, destruction_curve, diversity_from_areas, weighted_degree

log = logging.getLogger(__name__)

DEFAULT_WINDOWS = (1, 5, 10, 25, 50, 100)
SNAPSHOT_FRACTIONS = (0.25, 0.5, 1.0)


@dataclass
class ExperimentConfig:
    objective: str = "rastrigin"
    dimensions: int = 100
    lower_bound: float = RASTRIGIN_BOUNDS[0]
    upper_bound: float = RASTRIGIN_BOUNDS[1]
    n_bees: int = 50
    evaluation_budget: int = 1_000_000
    limit: int = 100
    n_executions: int = 30
    base_seed: int = 0
    window_set: Tuple[int, ...] = DEFAULT_WINDOWS
    snapshot_fractions: Tuple[float, ...] = SNAPSHOT_FRACTIONS
    metric_stride: int = 10
    output_dir: Optional[str] = "results"
    record_onlooker_partner: bool = False
    clamp_bounds: bool = True
    workers: int = 1

    def __post_init__(self):
        self.window_set = tuple(sorted(set(int(w) for w in self.window_set)))
        self.snapshot_fractions = tuple(float(f) for f in self.snapshot_fractions)
        self.validate()

    def validate(self) -> None:
        self.objective_spec()
        if self.n_bees < 2:
            raise ConfigError(f"n_bees must be >= 2, got {self.n_bees}")
        if self.evaluation_budget < self.n_bees:
            raise ConfigError(
                f"evaluation_budget ({self.evaluation_budget}) must be >= n_bees ({self.n_bees})"
            )
        if self.limit < 1:
            raise ConfigError(f"limit must be positive, got {self.limit}")
        if self.n_executions < 1:
            raise ConfigError(f"n_executions must be >= 1, got {self.n_executions}")
        if not self.window_set or self.window_set[0] < 1:
            raise ConfigError(f"window_set must hold positive integers, got {self.window_set}")
        if any(not 0 < f <= 1 for f in self.snapshot_fractions):
            raise ConfigError(f"snapshot fractions must lie in (0, 1], got {self.snapshot_fractions}")
        if self.metric_stride < 1:
            raise ConfigError(f"metric_stride must be >= 1, got {self.metric_stride}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")

    def objective_spec(self) -> ObjectiveSpec:
        return ObjectiveSpec(self.objective, self.dimensions, self.lower_bound, self.upper_bound)

    def seed(self, index: int) -> int:
        return self.base_seed + index

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = ",".join(export.format_value(x) for x in v)
            elif isinstance(v, bool):
                v = "true" if v else "false"
            elif v is None:
                v = ""
            lines.append(f"{f.name} = {v}")
        return "\n".join(lines) + "\n"


def _parse_list(text: str, kind):
    return tuple(kind(x) for x in text.replace(" ", "").split(",") if x)


def parse_config(text: str, source: str = "<config>") -> ExperimentConfig:
    """Parse ``key = value`` lines (``#`` comments allowed) into a config.

    Unknown keys and malformed values raise ConfigError.
    """
    parser = configparser.ConfigParser(interpolation=None, comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string("[experiment]\n" + text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    if parser.sections() != ["experiment"]:
        raise ConfigError(f"{source}: section headers are not allowed")
    known = {f.name: f for f in fields(ExperimentConfig)}
    values = {}
    for key, raw in parser.items("experiment"):
        if key not in known:
            raise ConfigError(f"{source}: unknown key {key!r}")
        default = getattr(ExperimentConfig, key, None)
        try:
            if key == "window_set":
                values[key] = _parse_list(raw, int)
            elif key == "snapshot_fractions":
                values[key] = _parse_list(raw, float)
            elif key == "output_dir":
                values[key] = raw or None
            elif isinstance(default, bool):
                values[key] = parser.getboolean("experiment", key)
            elif isinstance(default, int):
                values[key] = int(raw)
            elif isinstance(default, float):
                values[key] = float(raw)
            else:
                values[key] = raw
        except ValueError as exc:
            raise ConfigError(f"{source}: bad value for {key!r}: {raw!r}") from exc
    try:
        return ExperimentConfig(**values)
    except ConfigError as exc:
        raise ConfigError(f"{source}: {exc}") from exc


def load_config(path) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    return parse_config(text, source=str(path))


class NetworkTracker:
    """Feeds per-iteration events into one sliding window per window size.

    :meth:`push` returns the component statistics of the smallest window's
    aggregated network, the interaction diversity (only on stride iterations
    once every window is full) and the per-window rows for ``windows.csv``.
    """

    def __init__(self, n: int, windows: Sequence[int], stride: int):
        self.n = n
        self.windows = tuple(sorted(set(windows)))
        self.stride = stride
        self.accumulators = [WindowAccumulator(n, w) for w in self.windows]

    def push(self, t: int, events: Sequence[InfluenceEvent]):
        for acc in self.accumulators:
            acc.push(t, events)
        smallest = self.accumulators[0]
        stats = component_stats(undirected_view(smallest.network())) if smallest.ready else None
        id_value = None
        rows = []
        if t % self.stride == 0:
            areas = []
            for acc in self.accumulators:
                if not acc.ready:
                    continue
                u = undirected_view(acc.network())
                area = destruction_curve(u).area
                areas.append(area)
                rows.append((t, acc.window, *component_stats(u), area))
            if len(areas) == len(self.windows):
                id_value = diversity_from_areas(areas, self.n)
        return stats, id_value, rows


def snapshot_iterations(total: int, fractions: Sequence[float]) -> List[int]:
    if total < 1:
        return []
    return [max(1, int(round(f * total))) for f in fractions]


@dataclass
class ExecutionResult:
    index: int
    seed: int
    metrics: MetricsSeries
    events: List[InfluenceEvent]
    window_rows: list
    snapshots: Dict[float, object] = field(default_factory=dict)
    iterations: int = 0
    evaluations: int = 0
    initial_best_fitness: float = float("nan")
    final_best_fitness: float = float("nan")
    n: int = 0

    def event_log(self) -> EventLog:
        return EventLog(self.events, self.n)

    def final_network(self):
        """Cumulative layer matrices over the whole run (None before any iteration)."""
        if self.iterations < 1:
            return None
        return window_network(self.event_log(), self.iterations, self.iterations)


def run_execution(config: ExperimentConfig, index: int, write: bool = True) -> ExecutionResult:
    seed = config.seed(index)
    state = init_colony(
        config.objective_spec(),
        config.n_bees,
        seed,
        evaluation_budget=config.evaluation_budget,
        clamp_bounds=config.clamp_bounds,
        record_onlooker_partner=config.record_onlooker_partner,
    )
    initial_best = state.best_fitness_ever
    tracker = NetworkTracker(config.n_bees, config.window_set, config.metric_stride)
    series = MetricsSeries()
    window_rows = []
    for rec in iterate(state, config.limit):
        stats, id_value, rows = tracker.push(rec.iteration, rec.events)
        window_rows.extend(rows)
        row = MetricsRow(
            iteration=rec.iteration,
            best_fitness=rec.best_fitness,
            id_value=id_value,
            scouts_this_iteration=rec.scouts,
            events_E=len(rec.employed.events),
            events_O=len(rec.onlooker.events),
            events_S=len(rec.scout.events),
        )
        if stats is not None:
            row.components, row.giant_nodes, row.giant_edges, row.giant_weight = stats
        series.rows.append(row)

    result = ExecutionResult(
        index=index,
        seed=seed,
        metrics=series,
        events=state.events,
        window_rows=window_rows,
        iterations=state.iteration,
        evaluations=state.evaluations_used,
        initial_best_fitness=initial_best,
        final_best_fitness=state.best_fitness_ever,
        n=config.n_bees,
    )
    evlog = result.event_log()
    for frac, at in zip(config.snapshot_fractions, snapshot_iterations(state.iteration, config.snapshot_fractions)):
        result.snapshots[frac] = window_network(evlog, at, at)
    log.info("execution %d (seed %d): %d iterations, best %.6g",
             index, seed, result.iterations, result.final_best_fitness)
    if write and config.output_dir:
        write_execution(result, os.path.join(config.output_dir, f"run_{index:03d}"))
    return result


def write_execution(result: ExecutionResult, directory) -> None:
    export.write_events_csv(result.events, os.path.join(directory, "events.csv"))
    export.write_metrics_csv(result.metrics, os.path.join(directory, "metrics.csv"))
    export.write_rows(os.path.join(directory, "windows.csv"), export.WINDOW_COLUMNS, result.window_rows)
    final = result.final_network()
    if final is not None:
        degrees = weighted_degree(undirected_view(final))
        export.write_rows(os.path.join(directory, "degree_ccdf.csv"), ("degree", "fraction"), ccdf(degrees))
    for frac, net in result.snapshots.items():
        write_layers(net, os.path.join(directory, f"snapshot_{int(round(frac * 100)):03d}"))


def write_layers(net, stem: str, vmax: float | None = None) -> None:
    """Matrix file and heatmap for each layer and the aggregate: ``<stem>_<E|O|S|A>.{txt,ppm}``."""
    for tag in ("E", "O", "S", "A"):
        m = net.layer(tag)
        export.write_matrix(
            MatrixFile(m, tag, net.start_iteration, net.end_iteration, net.window), f"{stem}_{tag}.txt"
        )
        export.write_heatmap_image(m, f"{stem}_{tag}.ppm", vmax=vmax)


@dataclass
class RunSummary:
    execution: int
    seed: int
    status: str
    iterations: int = 0
    evaluations: int = 0
    final_best_fitness: Optional[float] = None
    best_run: bool = False
    error: str = ""


def _summarized_run(args) -> RunSummary:
    config, index = args
    try:
        res = run_execution(config, index)
    except Exception as exc:  # one failed execution must not sink the campaign
        log.error("execution %d failed: %s", index, exc)
        return RunSummary(index, config.seed(index), "failed", error=f"{type(exc).__name__}: {exc}")
    return RunSummary(index, res.seed, "ok", res.iterations, res.evaluations, res.final_best_fitness)


@dataclass
class CampaignSummary:
    runs: List[RunSummary]

    @property
    def best(self) -> Optional[RunSummary]:
        ok = [r for r in self.runs if r.status == "ok"]
        return min(ok, key=lambda r: (r.final_best_fitness, r.execution)) if ok else None

    @property
    def failed(self) -> List[RunSummary]:
        return [r for r in self.runs if r.status != "ok"]


def run_campaign(config: ExperimentConfig) -> CampaignSummary:
    jobs = [(config, i) for i in range(config.n_executions)]
    if config.workers > 1 and config.n_executions > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            runs = list(pool.map(_summarized_run, jobs))
    else:
        runs = [_summarized_run(job) for job in jobs]
    summary = CampaignSummary(runs)
    if summary.best is not None:
        summary.best.best_run = True
    if config.output_dir:
        os.makedirs(config.output_dir, exist_ok=True)
        with open(os.path.join(config.output_dir, "config.ini"), "w", encoding="ascii") as fh:
            fh.write(config.to_text())
        export.write_rows(
            os.path.join(config.output_dir, "summary.csv"),
            export.SUMMARY_COLUMNS,
            ([getattr(r, c) for c in export.SUMMARY_COLUMNS] for r in runs),
        )
    return summary


def analyze_events(evlog: EventLog, windows: Sequence[int], stride: int = 1,
                   last_iteration: Optional[int] = None):
    """Recompute the network metrics of a stored run from its event log.

    Returns ``(id_rows, window_rows, final_network)`` where ``id_rows`` holds
    ``(iteration, id_value)`` on stride iterations once all windows are full.
    ``last_iteration`` defaults to the last iteration that has an event; pass
    the true run length when trailing iterations were silent.
    """
    last = evlog.last_iteration if last_iteration is None else last_iteration
    tracker = NetworkTracker(evlog.n, windows, stride)
    id_rows, window_rows = [], []
    events = list(evlog)
    pos = int(np.searchsorted(evlog.iteration, 1))  # iteration 0 has no interactions
    for t in range(1, last + 1):
        start = pos
        while pos < len(events) and events[pos].iteration == t:
            pos += 1
        _, id_value, rows = tracker.push(t, events[start:pos])
        window_rows.extend(rows)
        if id_value is not None:
            id_rows.append((t, id_value))
    final = window_network(evlog, last, last) if last else None
    return id_rows, window_rows, final
