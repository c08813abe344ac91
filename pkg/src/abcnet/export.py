"""File formats.

metrics CSV
    One row per iteration, columns :data:`METRICS_COLUMNS`.  Empty cells mean
    "not computed at this iteration" (``id_value`` before the largest window
    fits, or between metric strides).  Floats use 17 significant digits so
    that parsing returns the identical double.

events CSV
    ``iteration,influenced,influencer,layer`` with layer one of ``E``, ``O``,
    ``S``; one influence event per row, in emission order.

matrix text file
    A header line ``# abcnet-matrix n=<N> layer=<E|O|S|A> start=<t0> end=<t1>
    window=<t_w>`` followed by N rows of N whitespace-separated numbers.

heatmap
    Binary PPM (P6), one pixel per matrix cell, row ``r`` = influenced bee,
    column ``c`` = influencer.  Cell values are divided by the matrix maximum
    (or an explicit ``vmax``, clipped) and mapped through
    :data:`HEATMAP_STOPS` by linear interpolation.
"""
import csv
import math
import os
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import InvalidInputError
from .inet import EventLog, InfluenceEvent, Layer

METRICS_COLUMNS = (
    "iteration",
    "best_fitness",
    "id_value",
    "components",
    "giant_nodes",
    "giant_edges",
    "giant_weight",
    "scouts_this_iteration",
    "events_E",
    "events_O",
    "events_S",
)
EVENT_COLUMNS = ("iteration", "influenced", "influencer", "layer")
WINDOW_COLUMNS = ("iteration", "window", "components", "giant_nodes", "giant_edges", "giant_weight", "area")
SUMMARY_COLUMNS = ("execution", "seed", "status", "iterations", "evaluations", "final_best_fitness", "best_run", "error")

# (position, RGB): dark blue -> blue -> green -> yellow -> dark red
HEATMAP_STOPS = (
    (0.00, (0, 0, 128)),
    (0.25, (0, 64, 255)),
    (0.50, (0, 192, 0)),
    (0.75, (255, 230, 0)),
    (1.00, (128, 0, 0)),
)


@dataclass
class MetricsRow:
    iteration: int
    best_fitness: float
    id_value: Optional[float] = None
    components: Optional[int] = None
    giant_nodes: Optional[int] = None
    giant_edges: Optional[int] = None
    giant_weight: Optional[float] = None
    scouts_this_iteration: int = 0
    events_E: int = 0
    events_O: int = 0
    events_S: int = 0


@dataclass
class MetricsSeries:
    rows: List[MetricsRow] = field(default_factory=list)

    def __len__(self):
        return len(self.rows)

    def column(self, name: str) -> list:
        return [getattr(r, name) for r in self.rows]


_FLOAT_COLUMNS = {"best_fitness", "id_value", "giant_weight"}


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        if math.isnan(v):
            return "nan"
        return format(float(v), ".17g")
    return str(v)


def _open_for_write(path):
    path = os.fspath(path)
    parent = os.path.dirname(path)
    try:
        if parent:
            os.makedirs(parent, exist_ok=True)
        return open(path, "w", newline="", encoding="ascii")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _open_for_read(path):
    try:
        return open(os.fspath(path), newline="", encoding="ascii")
    except OSError as exc:
        raise OSError(f"cannot read {os.fspath(path)}: {exc.strerror or exc}") from exc


def write_rows(path, header, rows) -> None:
    with _open_for_write(path) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])


def write_metrics_csv(series: MetricsSeries, path) -> None:
    write_rows(path, METRICS_COLUMNS, ([getattr(r, c) for c in METRICS_COLUMNS] for r in series.rows))


def _parse(cell: str, column: str):
    if cell == "":
        return None
    return float(cell) if column in _FLOAT_COLUMNS else int(cell)


def read_metrics_csv(path) -> MetricsSeries:
    with _open_for_read(path) as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != METRICS_COLUMNS:
            raise InvalidInputError(f"{path}: unexpected metrics header {reader.fieldnames}")
        rows = [MetricsRow(**{k: _parse(v, k) for k, v in rec.items()}) for rec in reader]
    return MetricsSeries(rows)


def write_events_csv(events, path) -> None:
    write_rows(
        path,
        EVENT_COLUMNS,
        ((e.iteration, e.influenced, e.influencer, Layer.parse(e.layer).value) for e in events),
    )


def read_events_csv(path, n: int | None = None) -> EventLog:
    with _open_for_read(path) as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != EVENT_COLUMNS:
            raise InvalidInputError(f"{path}: expected header {','.join(EVENT_COLUMNS)}, got {header}")
        events = []
        for lineno, rec in enumerate(reader, start=2):
            try:
                t, i, j, layer = rec
                events.append(InfluenceEvent(int(t), int(i), int(j), Layer.parse(layer)))
            except (ValueError, TypeError) as exc:
                raise InvalidInputError(f"{path}:{lineno}: malformed event row {rec}") from exc
    return EventLog(events, n)


@dataclass
class MatrixFile:
    matrix: np.ndarray
    layer: str = "A"
    start: int = 0
    end: int = 0
    window: int = 0

    @property
    def n(self) -> int:
        return len(self.matrix)


def write_matrix(mf: MatrixFile, path) -> None:
    m = np.asarray(mf.matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidInputError(f"matrix must be square, got shape {m.shape}")
    with _open_for_write(path) as fh:
        fh.write(f"# abcnet-matrix n={len(m)} layer={mf.layer} start={mf.start} end={mf.end} window={mf.window}\n")
        for row in m:
            fh.write(" ".join(format_value(v) for v in row.tolist()) + "\n")


def read_matrix(path) -> MatrixFile:
    with _open_for_read(path) as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith("# abcnet-matrix"):
        raise InvalidInputError(f"{path}: missing matrix header")
    meta = dict(tok.split("=", 1) for tok in lines[0].split()[2:])
    n = int(meta["n"])
    body = [ln.split() for ln in lines[1:] if ln.strip()]
    if len(body) != n or any(len(r) != n for r in body):
        raise InvalidInputError(f"{path}: header says n={n} but body is not {n}x{n}")
    cells = [c for r in body for c in r]
    if all(c.lstrip("-").isdigit() for c in cells):
        m = np.array(cells, dtype=np.int64).reshape(n, n)
    else:
        m = np.array([float(c) for c in cells]).reshape(n, n)
    return MatrixFile(m, meta["layer"], int(meta["start"]), int(meta["end"]), int(meta["window"]))


def colormap(fraction) -> np.ndarray:
    """RGB uint8 colors for values in [0, 1] (clipped)."""
    f = np.clip(np.asarray(fraction, dtype=float), 0.0, 1.0)
    pos = np.array([p for p, _ in HEATMAP_STOPS])
    rgb = np.array([c for _, c in HEATMAP_STOPS], dtype=float)
    out = np.stack([np.interp(f, pos, rgb[:, k]) for k in range(3)], axis=-1)
    return np.rint(out).astype(np.uint8)


def write_heatmap_image(m, path, vmax: float | None = None) -> None:
    """Render ``m`` as a P6 pixmap, scaled by ``vmax`` (default: the matrix max)."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.size == 0:
        raise InvalidInputError(f"heatmap needs a non-empty 2-D matrix, got shape {m.shape}")
    if np.any(m < 0) or not np.all(np.isfinite(m)):
        raise InvalidInputError("heatmap values must be finite and non-negative")
    top = float(m.max()) if vmax is None else float(vmax)
    frac = m / top if top > 0 else np.zeros_like(m)
    pixels = colormap(frac)
    rows, cols = m.shape
    path = os.fspath(path)
    try:
        if os.path.dirname(path):
            os.makedirs(os.path.dirname(path), exist_ok=True)
        with open(path, "wb") as fh:
            fh.write(f"P6\n{cols} {rows}\n255\n".encode("ascii"))
            fh.write(pixels.tobytes())
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def read_ppm(path) -> np.ndarray:
    """Pixels of a P6 file written by :func:`write_heatmap_image`, shape (rows, cols, 3)."""
    with open(os.fspath(path), "rb") as fh:
        data = fh.read()
    magic, dims, maxval, raster = data.split(b"\n", 3)
    if magic != b"P6" or maxval != b"255":
        raise InvalidInputError(f"{path}: not an 8-bit P6 pixmap")
    cols, rows = (int(x) for x in dims.split())
    return np.frombuffer(raster, dtype=np.uint8).reshape(rows, cols, 3)
