__all__ = ['SweepSpec', 'SweepPoint', 'SweepTable', 'repeat_seed', 'sweep']

import copy
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

import numpy as np

import placerank
from placerank import resources, types
from placerank.eval.experiment import TimingReport, run_experiment
from placerank.eval.recall import RecallReport


logger = logging.getLogger(__name__)

DEFAULT_REPEATS = 3
INTEGER_AXES = {'L', 'K', 'pf_k_init'}


@dataclass(frozen=True)
class SweepSpec:
    axis: 'types.SweepAxis'
    values: Tuple[float, ...]
    repeats: int = DEFAULT_REPEATS
    method: 'types.MethodType' = 'stpe'
    cross: Tuple['types.SweepAxis', Tuple[float, ...]] | None = None
    base_config: Dict[str, Any] = field(default_factory=dict)
    pf_config: Dict[str, Any] = field(default_factory=dict)
    noise: Dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    name: str = 'sweep'

    @classmethod
    def from_config(cls, config: 'types.SweepSpecConfig') -> 'SweepSpec':
        """
        Builds a SweepSpec from its JSON form (values may be expressions like "0.1:1.0:0.1").

        :arg config: Sweep spec dict.
        :return: SweepSpec instance.
        """
        resources.validate_sweep_spec_config(config)

        cross = None
        if 'cross' in config:
            cross = (config['cross']['axis'], tuple(resources.parse_values(config['cross']['values'])))

        return cls(
            axis=config['axis'],
            values=tuple(resources.parse_values(config['values'])),
            repeats=config.get('repeats', DEFAULT_REPEATS),
            method=config.get('method', 'stpe'),
            cross=cross,
            base_config=dict(config.get('base_config', {})),
            pf_config=dict(config.get('pf_config', {})),
            noise=dict(config.get('noise', {})),
            seed=config.get('seed', 0),
            name=config.get('name', 'sweep'),
        )

    @property
    def axis_label(self) -> str:
        return f'{self.axis}/{self.cross[0]}' if self.cross else self.axis

    def grid(self) -> List[Tuple[float, ...]]:
        """Every axis value, or every (value, cross value) pair in row-major order."""
        if self.cross is None:
            return [(value,) for value in self.values]
        return [(value, other) for value in self.values for other in self.cross[1]]


@dataclass(frozen=True)
class SweepPoint:
    axis: str
    value: str
    repeat: int | str
    method: 'types.MethodType'
    recall: RecallReport
    timing: TimingReport

    def to_dict(self) -> Dict[str, Any]:
        return {
            'axis': self.axis,
            'value': self.value,
            'repeat': self.repeat,
            'method': self.method,
            'recall': self.recall.to_dict(),
            'timing': self.timing.to_dict(),
        }


@dataclass(frozen=True)
class SweepTable:
    spec: SweepSpec
    points: List[SweepPoint]
    means: List[SweepPoint]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.spec.name,
            'method': self.spec.method,
            'axis': self.spec.axis_label,
            'repeats': self.spec.repeats,
            'points': [p.to_dict() for p in self.points],
            'means': [p.to_dict() for p in self.means],
        }


def repeat_seed(seed: int, repeat: int) -> int:
    """Distinct, reproducible seed of one repeat."""
    return int(np.random.SeedSequence([int(seed), int(repeat)]).generate_state(1)[0])


def _format_value(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(float(value))


def _apply_axis(axis: str, value: float, configs: Dict[str, Dict[str, Any]]) -> None:
    """Writes one axis value into the stpe/pf/noise configs (or the crop area)."""
    value = int(value) if axis in INTEGER_AXES else float(value)
    target = {
        'L': ('stpe', 'l_window'),
        'K': ('stpe', 'k_particles'),
        'lambda': ('stpe', 'lambda_rate'),
        'eps_yaw': ('noise', 'eps_yaw_deg'),
        'eps_xy': ('noise', 'eps_xy'),
        'pf_k_init': ('pf', 'k_init'),
        'db_area_km2': ('crop', 'area_km2'),
    }[axis]
    configs[target[0]][target[1]] = value


_worker_scenario: 'placerank.generators.GeneratedScenario | None' = None
_worker_index: 'resources.DescriptorIndex | None' = None


def _init_worker(scenario: 'placerank.generators.GeneratedScenario') -> None:
    global _worker_scenario, _worker_index
    _worker_scenario, _worker_index = scenario, None


def _evaluate(task: Tuple[SweepSpec, Tuple[float, ...], int, bool]) -> Tuple[RecallReport, TimingReport]:
    """Runs one (grid point, repeat) of a sweep against the worker's scenario."""
    global _worker_index
    spec, point, repeat, deterministic = task
    seed = repeat_seed(spec.seed, repeat)

    configs = {
        'stpe': copy.deepcopy(spec.base_config),
        'pf': resources.merge_dicts(copy.deepcopy(spec.pf_config), {'seed': seed}),
        'noise': resources.merge_dicts(copy.deepcopy(spec.noise), {'seed': seed}),
        'crop': {},
    }
    _apply_axis(spec.axis, point[0], configs)
    if spec.cross is not None:
        _apply_axis(spec.cross[0], point[1], configs)

    scenario = _worker_scenario
    if 'area_km2' in configs['crop']:
        scenario = scenario.cropped(configs['crop']['area_km2'])
        index = resources.build_index(scenario.database)
    else:
        if _worker_index is None:
            _worker_index = resources.build_index(scenario.database)
        index = _worker_index

    client = placerank.Placerank(index, stpe_config=configs['stpe'], pf_config=configs['pf'])
    recall, timing = run_experiment(
        scenario,
        method=spec.method,
        noise=resources.NoiseSpec.from_config(configs['noise']),
        deterministic=deterministic,
        client=client,
    )
    return recall, timing


def _mean_point(points: List[SweepPoint]) -> SweepPoint:
    first = points[0]
    recall = RecallReport(
        recall_at={n: float(np.mean([p.recall.recall_at[n] for p in points])) for n in first.recall.recall_at},
        num_queries=first.recall.num_queries,
        threshold_m=first.recall.threshold_m,
        method=first.method,
    )
    timing = TimingReport(
        num_queries=first.timing.num_queries,
        mean_retrieval_us=float(np.mean([p.timing.mean_retrieval_us for p in points])),
        p95_retrieval_us=float(np.mean([p.timing.p95_retrieval_us for p in points])),
        mean_refine_us=float(np.mean([p.timing.mean_refine_us for p in points])),
        p95_refine_us=float(np.mean([p.timing.p95_refine_us for p in points])),
    )
    return SweepPoint(first.axis, first.value, 'mean', first.method, recall, timing)


def sweep(
        spec: SweepSpec,
        scenario: 'placerank.generators.GeneratedScenario',
        jobs: int = 1,
        deterministic: bool = False,
) -> SweepTable:
    """
    Runs every grid point of a sweep `repeats` times and averages the repeats.

    Repeats differ only in the seeds of the noise draws and of the particle
    filter. Points may run in worker processes; assembly keeps grid order.

    :arg spec: SweepSpec instance.
    :arg scenario: GeneratedScenario instance.
    :param jobs: Worker processes (1 runs inline).
    :param deterministic: Report zero timings.
    :return: SweepTable with one point per (grid value, repeat) and one mean per grid value.
    """
    # Sweeps compare recall, so every query needs ground truth
    scenario.ground_truth

    grid = spec.grid()
    tasks = [(spec, point, repeat, deterministic) for point in grid for repeat in range(spec.repeats)]

    logger.info('Sweep %s over %s: %d grid points x %d repeats', spec.name, spec.axis_label, len(grid), spec.repeats)

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(scenario,)) as executor:
            outcomes = list(executor.map(_evaluate, tasks))
    else:
        _init_worker(scenario)
        outcomes = [_evaluate(task) for task in tasks]

    points, means = [], []
    for g, point in enumerate(grid):
        value = '/'.join(_format_value(v) for v in point)
        group = [
            SweepPoint(spec.axis_label, value, repeat, spec.method, *outcomes[g * spec.repeats + repeat])
            for repeat in range(spec.repeats)
        ]
        points.extend(group)
        means.append(_mean_point(group))

    return SweepTable(spec=spec, points=points, means=means)
