"""Network diagnostics over undirected interaction matrices.

Inputs are symmetric non-negative matrices as produced by
:func:`abcnet.inet.undirected_view`.  Self-loops count toward weighted degree
but never toward connectivity.
"""
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import InvalidInputError
from .inet import LayeredWindowNetwork, undirected_view, window_network, EventLog


def _check_symmetric(u) -> np.ndarray:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {u.shape}")
    if not np.array_equal(u, u.T):
        raise InvalidInputError("matrix is not symmetric")
    if np.any(u < 0):
        raise InvalidInputError("matrix has negative weights")
    return u


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.count = n

    def find(self, a: int) -> int:
        parent = self.parent
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.count -= 1
        return True


def _edges(u: np.ndarray):
    """Off-diagonal pairs ``i < j`` with positive weight."""
    iu, ju = np.triu_indices(len(u), k=1)
    w = u[iu, ju]
    keep = w > 0
    return iu[keep], ju[keep], w[keep]


def weighted_degree(u) -> np.ndarray:
    return _check_symmetric(u).sum(axis=1)


def ccdf(values) -> list[tuple[float, float]]:
    """Fraction of ``values`` that are >= each distinct value, ascending."""
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        raise InvalidInputError("ccdf of an empty vector")
    distinct, counts = np.unique(v, return_counts=True)
    below = np.concatenate(([0], np.cumsum(counts)[:-1]))
    return [(float(x), float((v.size - b) / v.size)) for x, b in zip(distinct, below)]


@dataclass
class DestructionCurve:
    """Component count as edges with normalized weight <= threshold are removed.

    ``components_at[k]`` holds on ``[thresholds[k], thresholds[k+1])``; the
    last threshold is 1, where every edge is gone.  ``degenerate`` marks a
    graph with no edges, for which the curve is flat at N and the area is N.
    """

    thresholds: np.ndarray
    components_at: np.ndarray
    area: float
    degenerate: bool = False


def destruction_curve(u) -> DestructionCurve:
    u = _check_symmetric(u)
    n = len(u)
    if n == 0:
        raise InvalidInputError("destruction curve of an empty graph")
    iu, ju, w = _edges(u)
    if w.size == 0:
        return DestructionCurve(np.array([0.0, 1.0]), np.array([n, n]), float(n), degenerate=True)
    w = w / w.max()
    levels = np.unique(w)
    thresholds = np.concatenate(([0.0], levels))
    order = np.argsort(-w, kind="stable")
    uf = UnionFind(n)
    components = np.empty(len(thresholds), dtype=np.int64)
    k = 0
    # sweep thresholds from 1 downward, adding edges strictly above each
    for pos in range(len(thresholds) - 1, -1, -1):
        tau = thresholds[pos]
        while k < len(order) and w[order[k]] > tau:
            e = order[k]
            uf.union(int(iu[e]), int(ju[e]))
            k += 1
        components[pos] = uf.count
    area = float(np.sum(components[:-1] * np.diff(thresholds)))
    return DestructionCurve(thresholds, components, area)


def diversity_from_areas(areas: Sequence[float], n: int) -> float:
    areas = list(areas)
    if not areas:
        raise InvalidInputError("need at least one window")
    return 1.0 - sum(areas) / (n * len(areas))


def diversity_from_networks(networks: Iterable[LayeredWindowNetwork]) -> float:
    networks = list(networks)
    if not networks:
        raise InvalidInputError("need at least one window")
    areas = [destruction_curve(undirected_view(net)).area for net in networks]
    return diversity_from_areas(areas, networks[0].n)


def interaction_diversity(events, t: int, windows: Sequence[int], n: int | None = None) -> float:
    """Interaction diversity at iteration ``t`` over the window set ``windows``."""
    windows = sorted(set(int(w) for w in windows))
    if not windows:
        raise InvalidInputError("window set is empty")
    if t < windows[-1]:
        raise InvalidInputError(f"t={t} is smaller than the largest window {windows[-1]}")
    log = EventLog.coerce(events, n)
    return diversity_from_networks(window_network(log, t, tw) for tw in windows)


class ComponentStats(NamedTuple):
    components: int
    giant_nodes: int
    giant_edges: int
    giant_weight: float


def component_stats(u) -> ComponentStats:
    """Connected components of the positive off-diagonal edges, plus giant-component size.

    The giant component has the most nodes; ties go to the larger total edge
    weight, then to the component holding the lowest node index.  Its edge
    count and weight include self-loops on its nodes.
    """
    u = _check_symmetric(u)
    n = len(u)
    if n == 0:
        raise InvalidInputError("component stats of an empty graph")
    iu, ju, w = _edges(u)
    uf = UnionFind(n)
    for a, b in zip(iu.tolist(), ju.tolist()):
        uf.union(a, b)
    roots = np.array([uf.find(a) for a in range(n)])
    diag = np.diagonal(u)

    best = None
    for root in np.unique(roots):
        members = roots == root
        inside = members[iu] & members[ju]
        weight = w[inside].sum() + diag[members].sum()
        edges = int(inside.sum() + np.count_nonzero(diag[members]))
        key = (int(members.sum()), weight, -int(np.argmax(members)))
        if best is None or key > best[0]:
            best = (key, edges, weight)
    (nodes, _, _), edges, weight = best
    return ComponentStats(uf.count, nodes, edges, float(weight))
