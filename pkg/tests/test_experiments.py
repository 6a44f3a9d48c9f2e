import json
import math
import random

import pytest

from decwvc.engine import run
from decwvc.experiments import (
    ROW_FIELDS,
    Cell,
    ExperimentConfig,
    apw,
    build_instance,
    derive_seed,
    emit_csv,
    emit_json,
    group_mean,
    run_cell,
    run_experiment,
)
from decwvc.graph import Graph, TopologyKind, WeightKind
from decwvc.protocol import OptimizeRule

RANDOM_64 = ExperimentConfig(
    topologies=(TopologyKind.RANDOM,),
    orders=(64,),
    degrees=(5,),
    distributions=(WeightKind.UNIFORM,),
    repetitions=10,
    base_seed=1,
)


def test_apw_examples():
    k2 = Graph.from_edges(2, [(1, 2)], [10, 30])
    assert apw(k2, {1, 2}) == 1.0
    assert apw(k2, {1}) == 0.25
    assert apw(Graph.from_edges(3, []), set()) == 0.0


def test_single_cell_apw_range():
    (row,) = run_experiment(RANDOM_64)
    assert not row.failed and row.repetitions == 10
    assert 0.45 <= row.mean_apw <= 0.75
    assert row.validity_rate == 1.0


def test_one_repetition_equals_run_report():
    config = ExperimentConfig(
        topologies=(TopologyKind.SCALE_FREE,), orders=(128,), degrees=(10,),
        distributions=(WeightKind.POWER_LAW,), repetitions=1, base_seed=3,
    )
    (row,) = run_experiment(config)
    cell = config.cells()[0]
    report = run(build_instance(cell, 0, 3))
    assert row.mean_apw == report.apw
    assert row.mean_rounds == report.rounds
    assert row.mean_mpn == report.mpn
    assert row.mean_cover_size == report.cover_size
    assert row.validity_rate == 1.0


def test_full_matrix_cell_count():
    config = ExperimentConfig()
    assert len(config.cells()) == 3 * 9 * 3 * 2 == 162
    assert len(set(config.cells())) == 162


def test_cells_independent_of_enumeration_order():
    config = ExperimentConfig(orders=(64,), degrees=(5, 10), repetitions=2, base_seed=5)
    cells = config.cells()
    forward = {c: run_cell(c, config) for c in cells}
    shuffled = cells[:]
    random.Random(0).shuffle(shuffled)
    backward = {c: run_cell(c, config) for c in shuffled}
    assert forward == backward


def test_seed_derivation():
    cell = Cell(TopologyKind.RANDOM, 64, 5, WeightKind.UNIFORM)
    assert derive_seed(cell, 0, 1, "graph") == derive_seed(cell, 0, 1, "graph")
    seeds = {derive_seed(cell, k, 1, p) for k in range(5) for p in ("graph", "weights")}
    assert len(seeds) == 10
    assert derive_seed(cell, 0, 1, "graph") != derive_seed(cell, 0, 2, "graph")
    assert 0 <= derive_seed(cell, 0, 1, "graph") < 2**63


def test_failed_cell_does_not_abort_batch():
    config = ExperimentConfig(
        topologies=(TopologyKind.RANDOM,), orders=(8, 64), degrees=(10,),
        distributions=(WeightKind.UNIFORM,), repetitions=2,
    )
    bad, good = run_experiment(config)
    assert bad.failed and "ValueError" in bad.error and math.isnan(bad.mean_apw)
    assert not good.failed and good.validity_rate == 1.0


def test_literal_rule_can_be_selected():
    config = ExperimentConfig(
        topologies=(TopologyKind.SMALL_WORLD,), orders=(128,), degrees=(15,),
        distributions=(WeightKind.UNIFORM,), repetitions=3, rule=OptimizeRule.PAPER_LITERAL,
    )
    (row,) = run_experiment(config)
    assert row.rule == "paper"
    assert 0.0 <= row.validity_rate <= 1.0


def test_workers_match_sequential():
    config = ExperimentConfig(orders=(64,), degrees=(5,), repetitions=2, base_seed=9)
    assert run_experiment(config, workers=2) == run_experiment(config)


def test_emit_csv_one_row(tmp_path):
    rows = run_experiment(RANDOM_64)
    path = tmp_path / "out.csv"
    emit_csv(rows, path)
    lines = path.read_text().splitlines()
    assert len(lines) == 2
    assert lines[0].split(",") == [f for f in ROW_FIELDS if f != "mean_elapsed"]


def test_emit_csv_timing_column(tmp_path):
    rows = run_experiment(RANDOM_64)
    emit_csv(rows, tmp_path / "t.csv", timing=True)
    assert "mean_elapsed" in (tmp_path / "t.csv").read_text().splitlines()[0]


def test_emit_zero_rows(tmp_path):
    with pytest.raises(ValueError):
        emit_csv([], tmp_path / "x.csv")
    with pytest.raises(ValueError):
        emit_json([], tmp_path / "x.json")


def test_emit_identical_bytes(tmp_path):
    rows = run_experiment(RANDOM_64)
    emit_csv(rows, tmp_path / "a.csv")
    emit_csv(rows, tmp_path / "b.csv")
    emit_json(rows, tmp_path / "a.json")
    emit_json(rows, tmp_path / "b.json")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_emit_json_schema(tmp_path):
    rows = run_experiment(RANDOM_64)
    emit_json(rows, tmp_path / "a.json")
    data = json.loads((tmp_path / "a.json").read_text())
    assert isinstance(data, list) and len(data) == 1
    assert list(data[0]) == [f for f in ROW_FIELDS if f != "mean_elapsed"]


def test_emit_reports_path_on_failure(tmp_path):
    rows = run_experiment(RANDOM_64)
    target = tmp_path / "missing" / "out.csv"
    with pytest.raises(OSError, match="missing"):
        emit_csv(rows, target)


def test_config_from_text():
    text = """
    # desk-scale check
    topologies = random, smallworld
    orders = 2^6, 128
    degrees: 5,15
    distributions = power
    repetitions = 3
    base_seed = 42
    rule = paper
    schedule = synchronous
    """
    config = ExperimentConfig.from_text(text)
    assert config.topologies == (TopologyKind.RANDOM, TopologyKind.SMALL_WORLD)
    assert config.orders == (64, 128)
    assert config.degrees == (5, 15)
    assert config.distributions == (WeightKind.POWER_LAW,)
    assert config.repetitions == 3 and config.base_seed == 42
    assert config.rule is OptimizeRule.PAPER_LITERAL
    assert config.schedule.value == "synchronous"


@pytest.mark.parametrize(
    "text",
    ["repetitions = 0", "colour = red", "orders = ", "topologies = torus", "just text"],
)
def test_config_rejects(text):
    with pytest.raises(ValueError):
        ExperimentConfig.from_text(text)


def test_group_mean_skips_failed():
    config = ExperimentConfig(
        topologies=(TopologyKind.RANDOM,), orders=(8, 64), degrees=(10,),
        distributions=(WeightKind.UNIFORM,), repetitions=1,
    )
    rows = run_experiment(config)
    means = group_mean(rows, ["topology"], "mean_apw")
    assert means == {("random",): rows[1].mean_apw}
