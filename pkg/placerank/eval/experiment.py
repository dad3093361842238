__all__ = ['TimingReport', 'ExperimentResult', 'run_experiment']

import logging
import time
from dataclasses import dataclass
from typing import Any, Dict, List, Sequence

import numpy as np

import placerank
from placerank import resources, types
from placerank.eval.recall import RecallReport, build_recall_report


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TimingReport:
    num_queries: int
    mean_retrieval_us: float
    p95_retrieval_us: float
    mean_refine_us: float
    p95_refine_us: float

    @classmethod
    def from_samples(cls, retrieval_ns: Sequence[int], refine_ns: Sequence[int]) -> 'TimingReport':
        """
        Summarises per-query timings.

        :arg retrieval_ns: Retrieval time of each query in nanoseconds.
        :arg refine_ns: Refinement time of each query in nanoseconds.
        :return: TimingReport in microseconds.
        """
        retrieval = np.asarray(retrieval_ns, dtype=np.float64) / 1000.0
        refine = np.asarray(refine_ns, dtype=np.float64) / 1000.0

        def summary(values: np.ndarray) -> tuple:
            if not values.size:
                return 0.0, 0.0
            return float(values.mean()), float(np.percentile(values, 95))

        mean_retrieval, p95_retrieval = summary(retrieval)
        mean_refine, p95_refine = summary(refine)
        return cls(len(refine), mean_retrieval, p95_retrieval, mean_refine, p95_refine)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'num_queries': self.num_queries,
            'retrieval_us': {'mean': self.mean_retrieval_us, 'p95': self.p95_retrieval_us},
            'refine_us': {'mean': self.mean_refine_us, 'p95': self.p95_refine_us},
        }


@dataclass(frozen=True, eq=False)
class ExperimentResult:
    recall: RecallReport | None
    timing: TimingReport
    results: List['resources.RankedResult']
    stream: List[Dict[str, Any]]

    def __iter__(self):
        # (recall, timing) unpacking
        return iter((self.recall, self.timing))


def run_experiment(
        scenario: 'placerank.generators.GeneratedScenario',
        method: 'types.MethodType' = 'stpe',
        cfg: Dict[str, Any] | None = None,
        noise: 'resources.NoiseSpec | None' = None,
        pf_cfg: Dict[str, Any] | None = None,
        deterministic: bool = False,
        client: 'placerank.Placerank | None' = None,
) -> ExperimentResult:
    """
    Runs one method over a scenario's full query sequence.

    Retrieval and refinement are timed separately per query; index
    construction and noise injection are not timed.

    :arg scenario: GeneratedScenario instance.
    :param method: `single`, `stpe` or `pf`.
    :param cfg: Partial STPE config.
    :param noise: Odometry noise injected into the relative motions.
    :param pf_cfg: Partial particle-filter config.
    :param deterministic: Report zero timings so repeated runs are byte-identical.
    :param client: Prebuilt Placerank instance (skips index construction).
    :return: ExperimentResult (unpacks as `recall, timing`; recall is None when a frame lacks ground truth).
    """
    if client is None:
        client = placerank.Placerank.from_records(scenario.database, stpe_config=cfg, pf_config=pf_cfg)

    frames = list(scenario.queries)
    if noise is not None:
        motions = resources.inject_noise([f.rel for f in frames], noise)
        frames = [frame.with_rel(rel) for frame, rel in zip(frames, motions)]

    index = client.index
    positions = {int(i): (float(u), float(v)) for i, (u, v) in zip(index.ids, index.positions)}
    report_n = client.stpe_config.get('report_n', 30)

    refiner = client.refiner(method)
    results, stream, retrieval_ns, refine_ns = [], [], [], []

    for frame in frames:
        started = time.perf_counter_ns()
        hits = refiner.retrieve(frame)
        retrieved = time.perf_counter_ns()
        result = refiner.push(frame, hits=hits)
        finished = time.perf_counter_ns()

        retrieval_ns.append(retrieved - started)
        refine_ns.append(finished - retrieved)
        results.append(result)

        elapsed = {'retrieval': 0, 'stpe': 0}
        if not deterministic:
            elapsed = {'retrieval': (retrieved - started) // 1000, 'stpe': (finished - retrieved) // 1000}

        stream.append(resources.encode_result_line(
            index=frame.index,
            method=method,
            result=result,
            n_report=report_n,
            gt=frame.gt,
            top_position=positions[result.entries[0].submap_id] if result.entries else None,
            elapsed_us=elapsed,
        ))

    if deterministic:
        retrieval_ns, refine_ns = [0] * len(frames), [0] * len(frames)

    recall = None
    if all(frame.gt is not None for frame in frames):
        recall = build_recall_report(results, [frame.gt for frame in frames], positions, method)
    else:
        logger.warning('Query frames carry no ground truth, recall is not computed')

    timing = TimingReport.from_samples(retrieval_ns, refine_ns)

    logger.info(
        'Experiment %s: %d queries, recall@1=%s, mean refine %.1f us',
        method, len(frames), f'{recall.recall_at.get(1, 0.0):.4f}' if recall is not None else 'n/a', timing.mean_refine_us
    )
    return ExperimentResult(recall=recall, timing=timing, results=results, stream=stream)
