import numpy as np
import pytest

from abcnet.bench import ObjectiveSpec
from abcnet.engine import ColonyRNG, init_colony
from abcnet.inet import InfluenceEvent, Layer, LAYERS


class RecordingRNG(ColonyRNG):
    """Logs every partner, phi, spin and position draw."""

    def __init__(self, seed):
        super().__init__(seed)
        self.log = []

    def partner(self, exclude, n):
        j = super().partner(exclude, n)
        self.log.append(("partner", j))
        return j

    def phi(self, d):
        p = super().phi(d)
        self.log.append(("phi", p.copy()))
        return p

    def spin(self, cumulative):
        s = super().spin(cumulative)
        self.log.append(("spin", s))
        return s

    def position(self, lower, upper, d):
        x = super().position(lower, upper, d)
        self.log.append(("position", x.copy()))
        return x


@pytest.fixture
def sphere_colony():
    return init_colony(ObjectiveSpec("sphere", 4), 6, seed=7)


def random_events(rng, n, iterations, per_iteration=8):
    """Synthetic log obeying the layer invariants."""
    events = []
    for t in range(1, iterations + 1):
        for _ in range(rng.integers(0, per_iteration + 1)):
            layer = LAYERS[rng.integers(3)]
            i = int(rng.integers(n))
            if layer is Layer.SCOUT:
                j = i
            elif layer is Layer.EMPLOYED:
                j = int((i + 1 + rng.integers(n - 1)) % n)
            else:
                j = int(rng.integers(n))
            events.append(InfluenceEvent(t, i, j, layer))
    return events


def random_symmetric(rng, n, density=0.3, max_weight=5, loops=True):
    w = rng.integers(1, max_weight + 1, size=(n, n)) * (rng.random((n, n)) < density)
    u = np.triu(w, 1)
    u = u + u.T
    if loops:
        np.fill_diagonal(u, rng.integers(0, 3, n) * (rng.random(n) < 0.3))
    return u


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
