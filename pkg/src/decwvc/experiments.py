"""Batch experiments over the synthetic testbed and result tables."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Iterable, Sequence

from .engine import RunReport, Schedule, run
from .graph import (
    Graph,
    Topology,
    TopologyKind,
    WeightDistribution,
    WeightKind,
    assign_weights,
    generate,
)
from .protocol import OptimizeRule

logger = logging.getLogger(__name__)

PAPER_ORDERS = tuple(2**k for k in range(6, 15))
PAPER_DEGREES = (5, 10, 15)


def apw(graph: Graph, cover: Iterable[int]) -> float:
    """Fraction of the total vertex weight that lies in ``cover``."""
    total = graph.total_weight()
    if total <= 0:
        return 0.0
    return math.fsum(graph.weight(v) for v in set(cover)) / total


@dataclass(frozen=True)
class Cell:
    topology: TopologyKind
    order: int
    degree: int
    distribution: WeightKind

    def key(self) -> str:
        return f"{self.topology.value}|{self.order}|{self.degree}|{self.distribution.value}"


def derive_seed(cell: Cell, repetition: int, base_seed: int, purpose: str) -> int:
    """Seed that depends only on the cell, the repetition and the base seed."""
    text = f"{cell.key()}|{repetition}|{base_seed}|{purpose}"
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big") >> 1


@dataclass(frozen=True)
class ExperimentConfig:
    topologies: tuple[TopologyKind, ...] = tuple(TopologyKind)
    orders: tuple[int, ...] = PAPER_ORDERS
    degrees: tuple[int, ...] = PAPER_DEGREES
    distributions: tuple[WeightKind, ...] = tuple(WeightKind)
    repetitions: int = 10
    base_seed: int = 0
    rule: OptimizeRule = OptimizeRule.SAFE_LOCAL_MIN
    schedule: Schedule = Schedule.SEQUENTIAL

    def __post_init__(self) -> None:
        if self.repetitions < 1:
            raise ValueError(f"repetitions must be >= 1, got {self.repetitions}")
        for name in ("topologies", "orders", "degrees", "distributions"):
            if not getattr(self, name):
                raise ValueError(f"{name} must not be empty")
        if any(n < 2 for n in self.orders):
            raise ValueError(f"orders must be >= 2, got {self.orders}")
        if any(d < 1 for d in self.degrees):
            raise ValueError(f"degrees must be >= 1, got {self.degrees}")

    def cells(self) -> list[Cell]:
        return [
            Cell(t, n, d, w)
            for t in self.topologies
            for n in self.orders
            for d in self.degrees
            for w in self.distributions
        ]

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        """Parse ``key = value`` lines; lists are comma separated, ``#`` starts a comment.

        Keys: topologies, orders, degrees, distributions, repetitions,
        base_seed, rule, schedule.  Orders accept ``2^k`` notation.
        """
        values: dict[str, str] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            sep = "=" if "=" in line else ":"
            if sep not in line:
                raise ValueError(f"config line {lineno}: expected 'key = value', got {raw!r}")
            key, value = (part.strip() for part in line.split(sep, 1))
            key = key.lower().replace("-", "_")
            if key not in _CONFIG_PARSERS:
                raise ValueError(f"config line {lineno}: unknown key {key!r}")
            values[key] = value
        return cls(**{k: _CONFIG_PARSERS[k](v) for k, v in values.items()})

    @classmethod
    def from_file(cls, path: str | Path) -> "ExperimentConfig":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))


def _split(value: str) -> list[str]:
    return [p.strip() for p in value.split(",") if p.strip()]


def _int_token(token: str) -> int:
    if "^" in token:
        base, exp = token.split("^", 1)
        return int(base) ** int(exp)
    return int(token)


_CONFIG_PARSERS = {
    "topologies": lambda v: tuple(TopologyKind(p.lower()) for p in _split(v)),
    "orders": lambda v: tuple(_int_token(p) for p in _split(v)),
    "degrees": lambda v: tuple(int(p) for p in _split(v)),
    "distributions": lambda v: tuple(WeightKind(p.lower()) for p in _split(v)),
    "repetitions": int,
    "base_seed": int,
    "rule": lambda v: OptimizeRule(v.lower()),
    "schedule": lambda v: Schedule(v.lower()),
}


@dataclass
class AggregateRow:
    topology: str
    order: int
    degree: int
    distribution: str
    rule: str
    schedule: str
    repetitions: int
    mean_apw: float
    mean_rounds: float
    mean_mpn: float
    mean_cover_size: float
    mean_cover_weight: float
    mean_realized_degree: float
    validity_rate: float
    failed: bool = False
    error: str = ""
    mean_elapsed: float = field(default=0.0, compare=False)

    def to_dict(self, timing: bool = False) -> dict:
        d = asdict(self)
        if not timing:
            del d["mean_elapsed"]
        return d


ROW_FIELDS = [f.name for f in fields(AggregateRow)]


def build_instance(cell: Cell, repetition: int, base_seed: int) -> Graph:
    topology = Topology(cell.topology, cell.order, cell.degree)
    graph = generate(topology, derive_seed(cell, repetition, base_seed, "graph"))
    dist = WeightDistribution(cell.distribution)
    return assign_weights(graph, dist, derive_seed(cell, repetition, base_seed, "weights"))


def aggregate(cell: Cell, reports: Sequence[RunReport], graphs: Sequence[Graph], config) -> AggregateRow:
    mean = statistics.fmean
    return AggregateRow(
        topology=cell.topology.value,
        order=cell.order,
        degree=cell.degree,
        distribution=cell.distribution.value,
        rule=OptimizeRule(config.rule).value,
        schedule=Schedule(config.schedule).value,
        repetitions=len(reports),
        mean_apw=mean(r.apw for r in reports),
        mean_rounds=mean(r.rounds for r in reports),
        mean_mpn=mean(r.mpn for r in reports),
        mean_cover_size=mean(r.cover_size for r in reports),
        mean_cover_weight=mean(r.cover_weight for r in reports),
        mean_realized_degree=mean(g.average_degree() for g in graphs),
        validity_rate=mean(1.0 if r.valid else 0.0 for r in reports),
        mean_elapsed=mean(r.elapsed for r in reports),
    )


def run_cell(cell: Cell, config: ExperimentConfig) -> AggregateRow:
    """Run all repetitions of one cell; a failure marks the row instead of raising."""
    try:
        graphs, reports = [], []
        for k in range(config.repetitions):
            g = build_instance(cell, k, config.base_seed)
            graphs.append(g)
            reports.append(run(g, config.rule, config.schedule))
        return aggregate(cell, reports, graphs, config)
    except Exception as exc:  # noqa: BLE001 - one bad cell must not abort the batch
        logger.warning("cell %s failed: %s", cell.key(), exc)
        nan = math.nan
        return AggregateRow(
            topology=cell.topology.value,
            order=cell.order,
            degree=cell.degree,
            distribution=cell.distribution.value,
            rule=OptimizeRule(config.rule).value,
            schedule=Schedule(config.schedule).value,
            repetitions=0,
            mean_apw=nan,
            mean_rounds=nan,
            mean_mpn=nan,
            mean_cover_size=nan,
            mean_cover_weight=nan,
            mean_realized_degree=nan,
            validity_rate=nan,
            failed=True,
            error=f"{type(exc).__name__}: {exc}",
            mean_elapsed=nan,
        )


def _run_cell_args(args: tuple[Cell, ExperimentConfig]) -> AggregateRow:
    return run_cell(*args)


def run_experiment(config: ExperimentConfig, workers: int = 1) -> list[AggregateRow]:
    """One row per cell of the config matrix, in matrix order."""
    cells = config.cells()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_cell_args, [(c, config) for c in cells]))
    rows = []
    for i, cell in enumerate(cells, start=1):
        logger.info("cell %d/%d %s", i, len(cells), cell.key())
        rows.append(run_cell(cell, config))
    return rows


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _columns(timing: bool) -> list[str]:
    return ROW_FIELDS if timing else [f for f in ROW_FIELDS if f != "mean_elapsed"]


def rows_to_csv(rows: Sequence[AggregateRow], timing: bool = False) -> str:
    if not rows:
        raise ValueError("no rows to emit")
    columns = _columns(timing)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        d = row.to_dict(timing=True)
        writer.writerow([_format_value(d[c]) for c in columns])
    return buf.getvalue()


def rows_to_json(rows: Sequence[AggregateRow], timing: bool = False) -> str:
    if not rows:
        raise ValueError("no rows to emit")
    payload = [row.to_dict(timing=timing) for row in rows]
    # NaN from failed cells becomes null to keep the output valid JSON
    for d in payload:
        for k, v in d.items():
            if isinstance(v, float) and math.isnan(v):
                d[k] = None
    return json.dumps(payload, indent=2) + "\n"


def _write(path: str | Path, text: str) -> None:
    path = Path(path)
    try:
        path.write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def emit_csv(rows: Sequence[AggregateRow], path: str | Path, timing: bool = False) -> None:
    """Write rows as CSV with a fixed header.  Timing is excluded unless asked for."""
    _write(path, rows_to_csv(rows, timing))


def emit_json(rows: Sequence[AggregateRow], path: str | Path, timing: bool = False) -> None:
    _write(path, rows_to_json(rows, timing))


def group_mean(
    rows: Iterable[AggregateRow], by: Sequence[str], value: str
) -> dict[tuple, float]:
    """Unweighted mean of ``value`` over successful rows, grouped by the ``by`` fields."""
    groups: dict[tuple, list[float]] = {}
    for row in rows:
        if row.failed:
            continue
        key = tuple(getattr(row, f) for f in by)
        groups.setdefault(key, []).append(getattr(row, value))
    return {k: statistics.fmean(v) for k, v in groups.items()}
