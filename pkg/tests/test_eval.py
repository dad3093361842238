import csv
import dataclasses
import json

import numpy as np
import pytest

import placerank
from placerank import eval as evaluation, generators, resources


def _result(ids):
    return resources.rank_entries(((i, 1.0 - 0.01 * k, 0.0) for k, i in enumerate(ids)), mode='similarity')


def test_threshold_is_strict():
    positions = {0: (29.99, 0.0), 1: (30.0, 0.0)}

    assert evaluation.recall_at_n([_result([0])], [(0.0, 0.0)], positions, 1) == 1.0
    assert evaluation.recall_at_n([_result([1])], [(0.0, 0.0)], positions, 1) == 0.0


def test_recall_worked_example():
    positions = {0: (0.0, 0.0), 1: (100.0, 0.0), 2: (200.0, 0.0)}
    results = [_result([0, 1]), _result([1, 0]), _result([2, 1]), _result([1, 2])]
    ground_truth = [(0.0, 0.0), (0.0, 0.0), (200.0, 0.0), (0.0, 500.0)]

    assert evaluation.recall_at_n(results, ground_truth, positions, 2) == 0.75
    assert evaluation.recall_at_n(results, ground_truth, positions, 1) == 0.5
    ranks = evaluation.first_correct_ranks(results, ground_truth, positions)
    assert list(ranks[:3]) == [1, 2, 1]
    assert np.isinf(ranks[3])


def test_recall_is_monotone_in_n():
    rng = np.random.default_rng(0)
    positions = {i: tuple(p) for i, p in enumerate(rng.uniform(0, 500, (100, 2)))}
    results = [_result(list(rng.permutation(100)[:40])) for _ in range(30)]
    ground_truth = [tuple(p) for p in rng.uniform(0, 500, (30, 2))]

    curve = evaluation.recall_curve(results, ground_truth, positions, 40)
    assert curve == sorted(curve)
    assert all(0.0 <= value <= 1.0 for value in curve)


def test_recall_edge_cases():
    assert evaluation.recall_at_n([], [], {}, 1) == 0.0
    with pytest.raises(placerank.PlacerankError) as exc:
        evaluation.recall_at_n([_result([0])], [], {0: (0.0, 0.0)}, 1)
    assert exc.value.code == 'LengthMismatch'


def test_report_shape():
    positions = {0: (0.0, 0.0)}
    report = evaluation.build_recall_report([_result([0])], [(1.0, 1.0)], positions, 'single')

    assert report.to_dict() == {
        'method': 'single',
        'num_queries': 1,
        'threshold_m': 30.0,
        'recall_at': {'1': 1.0, '5': 1.0, '10': 1.0, '30': 1.0},
    }


def test_timing_report():
    timing = evaluation.TimingReport.from_samples([1000, 3000], [2000, 4000])
    assert timing.mean_retrieval_us == 2.0
    assert timing.mean_refine_us == 3.0
    assert timing.num_queries == 2

    empty = evaluation.TimingReport.from_samples([], [])
    assert empty.mean_refine_us == 0.0 and empty.num_queries == 0


@pytest.mark.parametrize('method', ['single', 'stpe', 'pf'])
def test_experiment_is_deterministic(small_scenario, method):
    noise = resources.NoiseSpec.from_config({'eps_yaw_deg': 1.0, 'eps_xy': 1.0, 'seed': 2})
    first = evaluation.run_experiment(small_scenario, method=method, noise=noise, deterministic=True)
    second = evaluation.run_experiment(small_scenario, method=method, noise=noise, deterministic=True)

    assert first.stream == second.stream
    assert first.recall == second.recall
    assert first.timing.mean_refine_us == 0.0
    assert len(first.stream) == len(small_scenario.queries)

    line = first.stream[0]
    assert line['method'] == method
    assert line['elapsed_us'] == {'retrieval': 0, 'stpe': 0}
    assert len(line['top']) <= 30
    assert 'gt_distance_m' in line


def test_experiment_unpacks_and_times(small_scenario):
    recall, timing = evaluation.run_experiment(small_scenario, method='stpe')

    assert recall.num_queries == len(small_scenario.queries)
    assert timing.num_queries == len(small_scenario.queries)
    assert timing.mean_retrieval_us > 0


def test_unknown_method(small_scenario):
    with pytest.raises(placerank.PlacerankError) as exc:
        evaluation.run_experiment(small_scenario, method='oracle')
    assert exc.value.code == 'MethodNotDefined'


def test_repeat_seeds_are_distinct():
    seeds = {evaluation.repeat_seed(0, r) for r in range(10)}
    assert len(seeds) == 10
    assert evaluation.repeat_seed(5, 2) == evaluation.repeat_seed(5, 2)


def test_sweep_spec_parsing():
    spec = evaluation.SweepSpec.from_config({'axis': 'lambda', 'values': '0.1:1.0:0.1', 'repeats': 2})
    assert spec.values == pytest.approx(tuple(0.1 * k for k in range(1, 11)))
    assert len(spec.grid()) == 10
    assert spec.axis_label == 'lambda'

    crossed = evaluation.SweepSpec.from_config({
        'axis': 'L', 'values': [10, 20, 30, 40, 50], 'cross': {'axis': 'K', 'values': '{5,10,15,20,30}'},
    })
    assert len(crossed.grid()) == 25
    assert crossed.axis_label == 'L/K'

    for config in (
            {'axis': 'lambda', 'values': []},
            {'axis': 'speed', 'values': [1]},
            {'axis': 'L', 'values': [1], 'cross': {'axis': 'L', 'values': [2]}},
            {'axis': 'L', 'values': [1], 'repeats': 0},
            {'axis': 'L', 'values': [1], 'base_config': {'k_particles': 0}},
    ):
        with pytest.raises(placerank.ValidationError):
            evaluation.SweepSpec.from_config(config)


def test_lambda_sweep_rows(small_scenario, tmp_path):
    spec = evaluation.SweepSpec.from_config({
        'axis': 'lambda', 'values': '0.1:1.0:0.1', 'repeats': 1, 'name': 'lambda-rate',
    })
    table = evaluation.sweep(spec, small_scenario, deterministic=True)

    assert len(table.points) == 10
    assert len(table.means) == 10
    assert [p.value for p in table.means][:3] == ['0.1', '0.2', '0.3']
    assert table.means[-1].value == '1'

    name = evaluation.report_basename(spec.name, spec.axis_label, deterministic=True)
    assert name == 'lambda-rate-lambda-deterministic'
    paths = evaluation.write_sweep_reports(table, tmp_path, name)

    with paths['csv'].open(newline='') as handle:
        rows = list(csv.DictReader(handle))
    assert len(rows) == 10
    assert list(rows[0]) == evaluation.CSV_COLUMNS
    assert all(row['repeat'] == 'mean' for row in rows)

    report = json.loads(paths['json'].read_text())
    assert report['axis'] == 'lambda'
    assert len(report['points']) == 10

    plots = evaluation.write_plot_data(table, tmp_path, name)
    assert [p.name for p in plots] == [f'{name}-recall@{n}.xy' for n in evaluation.REPORTED_NS]
    assert len(plots[0].read_text().splitlines()) == 11


def test_two_axis_sweep(small_scenario):
    spec = evaluation.SweepSpec.from_config({
        'axis': 'L', 'values': [10, 20, 30, 40, 50],
        'cross': {'axis': 'K', 'values': [5, 10, 15, 20, 30]},
        'repeats': 1,
    })
    cropped = generators.GeneratedScenario(database=small_scenario.database, queries=small_scenario.queries[:10])
    table = evaluation.sweep(spec, cropped, deterministic=True)

    assert len(table.means) == 25
    assert table.means[0].value == '10/5'
    assert table.means[-1].value == '50/30'
    assert evaluation.report_basename('grid', spec.axis_label, True) == 'grid-L+K-deterministic'


def test_sweep_repeats_vary_noise(small_scenario):
    spec = evaluation.SweepSpec.from_config({
        'axis': 'eps_xy', 'values': [4.0], 'repeats': 3, 'method': 'single',
    })
    table = evaluation.sweep(spec, small_scenario, deterministic=True)

    assert [p.repeat for p in table.points] == [0, 1, 2]
    assert table.means[0].repeat == 'mean'
    assert table.means[0].recall.recall_at[1] == pytest.approx(
        np.mean([p.recall.recall_at[1] for p in table.points])
    )


def test_database_area_crop(small_scenario):
    cropped = small_scenario.cropped(0.04)
    assert 0 < len(cropped.database) < len(small_scenario.database)
    assert cropped.queries is small_scenario.queries


def test_missing_ground_truth(small_scenario):
    bare = generators.GeneratedScenario(
        database=small_scenario.database,
        queries=[dataclasses.replace(f, gt=None) for f in small_scenario.queries[:5]],
    )
    result = evaluation.run_experiment(bare, method='single')
    assert result.recall is None
    assert len(result.stream) == 5

    spec = evaluation.SweepSpec.from_config({'axis': 'lambda', 'values': [1.0], 'repeats': 1})
    with pytest.raises(placerank.PlacerankError) as exc:
        evaluation.sweep(spec, bare)
    assert exc.value.code == 'MissingGroundTruth'
