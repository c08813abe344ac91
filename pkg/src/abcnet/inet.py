"""Interaction networks built from influence events.

Matrices are indexed ``[influenced, influencer]``: row ``i`` column ``j`` counts
how many times bee ``i`` moved using information from bee ``j``.  Column sums
are therefore the influence a bee exerted on the swarm.

A window network at iteration ``t`` with window ``t_w`` sums the per-iteration
matrices of iterations ``t - t_w + 1 .. t`` (``t >= t_w >= 1``).  Each of the
three role layers is kept separately, and the aggregated network is their
elementwise sum.
"""
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple, Sequence, Union

import numpy as np

from .errors import DataCorruptionError, InvalidInputError


class Layer(Enum):
    EMPLOYED = "E"
    ONLOOKER = "O"
    SCOUT = "S"

    @property
    def index(self) -> int:
        return _LAYER_INDEX[self]

    @classmethod
    def parse(cls, value) -> "Layer":
        if isinstance(value, Layer):
            return value
        try:
            return cls(str(value).strip().upper())
        except ValueError:
            raise DataCorruptionError(f"unknown layer tag {value!r}") from None


LAYERS = (Layer.EMPLOYED, Layer.ONLOOKER, Layer.SCOUT)
_LAYER_INDEX = {layer: k for k, layer in enumerate(LAYERS)}


class InfluenceEvent(NamedTuple):
    iteration: int
    influenced: int
    influencer: int
    layer: Layer


def check_event(event: InfluenceEvent, n: int) -> None:
    """Raise DataCorruptionError if ``event`` cannot belong to an ``n``-bee run."""
    if not (0 <= event.influenced < n and 0 <= event.influencer < n):
        raise DataCorruptionError(f"bee index out of [0, {n}) in {event}")
    if event.iteration < 0:
        raise DataCorruptionError(f"negative iteration in {event}")
    if event.layer is Layer.SCOUT and event.influenced != event.influencer:
        raise DataCorruptionError(f"scout event must be a self-loop: {event}")
    if event.layer is Layer.EMPLOYED and event.influenced == event.influencer:
        raise DataCorruptionError(f"employed event cannot be a self-loop: {event}")


class EventLog:
    """Column-oriented, iteration-sorted view of an event sequence.

    Holding the columns as arrays lets window queries slice by iteration with a
    binary search instead of scanning the whole log.
    """

    def __init__(self, events: Iterable[InfluenceEvent] = (), n: int | None = None):
        rows = list(events)
        self.iteration = np.array([e.iteration for e in rows], dtype=np.int64)
        self.influenced = np.array([e.influenced for e in rows], dtype=np.int64)
        self.influencer = np.array([e.influencer for e in rows], dtype=np.int64)
        self.layer = np.array([Layer.parse(e.layer).index for e in rows], dtype=np.int64)
        order = np.argsort(self.iteration, kind="stable")
        if not np.all(order == np.arange(len(order))):
            self.iteration = self.iteration[order]
            self.influenced = self.influenced[order]
            self.influencer = self.influencer[order]
            self.layer = self.layer[order]
        inferred = int(max(self.influenced.max(initial=-1), self.influencer.max(initial=-1))) + 1
        self.n = inferred if n is None else int(n)
        self._validate()

    def _validate(self) -> None:
        bad = (
            (self.influenced < 0) | (self.influenced >= self.n)
            | (self.influencer < 0) | (self.influencer >= self.n)
            | (self.iteration < 0)
        )
        loops = self.influenced == self.influencer
        bad |= (self.layer == Layer.SCOUT.index) & ~loops
        bad |= (self.layer == Layer.EMPLOYED.index) & loops
        if np.any(bad):
            k = int(np.flatnonzero(bad)[0])
            check_event(
                InfluenceEvent(int(self.iteration[k]), int(self.influenced[k]),
                               int(self.influencer[k]), LAYERS[self.layer[k]]),
                self.n,
            )

    @classmethod
    def coerce(cls, events, n: int | None = None) -> "EventLog":
        if isinstance(events, EventLog):
            if n is not None and n < events.n:
                raise DataCorruptionError(f"event log references {events.n} bees, but n={n}")
            if n is not None and n != events.n:
                copy = cls.__new__(cls)
                copy.__dict__.update(events.__dict__)
                copy.n = int(n)
                return copy
            return events
        return cls(events, n)

    def __len__(self) -> int:
        return len(self.iteration)

    def __iter__(self):
        for t, i, j, k in zip(self.iteration, self.influenced, self.influencer, self.layer):
            yield InfluenceEvent(int(t), int(i), int(j), LAYERS[k])

    @property
    def last_iteration(self) -> int:
        return int(self.iteration[-1]) if len(self) else 0

    def span(self, first: int, last: int) -> slice:
        """Slice of rows whose iteration lies in ``[first, last]``."""
        lo = np.searchsorted(self.iteration, first, side="left")
        hi = np.searchsorted(self.iteration, last, side="right")
        return slice(int(lo), int(hi))

    def counts(self) -> dict[Layer, int]:
        return {layer: int(np.sum(self.layer == layer.index)) for layer in LAYERS}


@dataclass
class LayeredWindowNetwork:
    n: int
    window: int
    end_iteration: int
    employed: np.ndarray
    onlooker: np.ndarray
    scout: np.ndarray

    @property
    def start_iteration(self) -> int:
        return self.end_iteration - self.window + 1

    @property
    def aggregated(self) -> np.ndarray:
        return self.employed + self.onlooker + self.scout

    def layer(self, tag) -> np.ndarray:
        """Matrix for a layer tag: ``E``, ``O``, ``S``, or ``A`` (aggregated)."""
        if isinstance(tag, str) and tag.strip().upper() == "A":
            return self.aggregated
        return (self.employed, self.onlooker, self.scout)[Layer.parse(tag).index]


def _tally(log: EventLog, rows: slice, n: int) -> np.ndarray:
    out = np.zeros((3, n, n), dtype=np.int64)
    np.add.at(out, (log.layer[rows], log.influenced[rows], log.influencer[rows]), 1)
    return out


def iteration_matrix(events, t: int, layer, n: int | None = None) -> np.ndarray:
    """Count matrix of one layer's events at iteration ``t``."""
    log = EventLog.coerce(events, n)
    rows = log.span(t, t)
    mat = np.zeros((log.n, log.n), dtype=np.int64)
    mask = log.layer[rows] == Layer.parse(layer).index
    np.add.at(mat, (log.influenced[rows][mask], log.influencer[rows][mask]), 1)
    return mat


def window_network(events, t: int, t_w: int, n: int | None = None) -> LayeredWindowNetwork:
    if not t >= t_w >= 1:
        raise InvalidInputError(f"window requires t >= t_w >= 1, got t={t}, t_w={t_w}")
    log = EventLog.coerce(events, n)
    e, o, s = _tally(log, log.span(t - t_w + 1, t), log.n)
    return LayeredWindowNetwork(log.n, t_w, t, e, o, s)


def undirected_view(net: Union[LayeredWindowNetwork, np.ndarray]) -> np.ndarray:
    """``M + M^T`` with the diagonal kept once."""
    m = net.aggregated if isinstance(net, LayeredWindowNetwork) else np.asarray(net)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {m.shape}")
    u = m + m.T
    np.fill_diagonal(u, np.diagonal(m))
    return u


class WindowAccumulator:
    """Sliding-window layer matrices updated in O(events) per iteration.

    Feed every iteration in order with :meth:`push` (empty iterations too);
    after iteration ``t`` has been pushed, :meth:`network` returns the window
    ending at ``t``.
    """

    def __init__(self, n: int, window: int):
        if window < 1:
            raise InvalidInputError(f"window must be >= 1, got {window}")
        self.n = n
        self.window = window
        self.counts = np.zeros((3, n, n), dtype=np.int64)
        self.last_iteration = 0
        self._buffer: deque = deque()

    def push(self, iteration: int, events: Sequence[InfluenceEvent]) -> None:
        if iteration != self.last_iteration + 1:
            raise InvalidInputError(
                f"iterations must be pushed consecutively: expected {self.last_iteration + 1}, got {iteration}"
            )
        idx = (
            np.array([Layer.parse(e.layer).index for e in events], dtype=np.int64),
            np.array([e.influenced for e in events], dtype=np.int64),
            np.array([e.influencer for e in events], dtype=np.int64),
        )
        np.add.at(self.counts, idx, 1)
        self._buffer.append(idx)
        if len(self._buffer) > self.window:
            np.subtract.at(self.counts, self._buffer.popleft(), 1)
        self.last_iteration = iteration

    @property
    def ready(self) -> bool:
        return self.last_iteration >= self.window

    def network(self) -> LayeredWindowNetwork:
        if not self.ready:
            raise InvalidInputError(
                f"window {self.window} not yet full at iteration {self.last_iteration}"
            )
        e, o, s = self.counts.copy()
        return LayeredWindowNetwork(self.n, self.window, self.last_iteration, e, o, s)
