__all__ = [
    'DEFAULT_THRESHOLD_M', 'REPORTED_NS', 'RecallReport', 'first_correct_ranks', 'recall_at_n', 'recall_curve',
    'build_recall_report',
]

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Sequence, Tuple

import numpy as np

import placerank
from placerank import resources, types


DEFAULT_THRESHOLD_M = 30.0
REPORTED_NS = (1, 5, 10, 30)


@dataclass(frozen=True)
class RecallReport:
    recall_at: Dict[int, float]
    num_queries: int
    threshold_m: float
    method: 'types.MethodType'

    def to_dict(self) -> Dict[str, Any]:
        return {
            'method': self.method,
            'num_queries': self.num_queries,
            'threshold_m': self.threshold_m,
            'recall_at': {str(n): value for n, value in sorted(self.recall_at.items())},
        }


def first_correct_ranks(
        results: Sequence['resources.RankedResult'],
        ground_truth: Sequence[Tuple[float, float]],
        positions: Mapping[int, Tuple[float, float]],
        threshold_m: float = DEFAULT_THRESHOLD_M,
) -> np.ndarray:
    """
    1-based rank of the first entry within the threshold of each query's ground truth.

    :arg results: One RankedResult per query.
    :arg ground_truth: True query positions.
    :arg positions: Submap centers by id.
    :param threshold_m: Strict distance threshold.
    :return: Ranks (infinity where no entry is correct).
    """
    if len(results) != len(ground_truth):
        raise placerank.PlacerankError(
            code='LengthMismatch',
            message=f'{len(results)} results but {len(ground_truth)} ground-truth positions.'
        )

    ranks = np.full(len(results), np.inf)

    for i, (result, (gx, gy)) in enumerate(zip(results, ground_truth)):
        for rank, entry in enumerate(result.entries, start=1):
            x, y = positions[entry.submap_id]
            if math.hypot(x - gx, y - gy) < threshold_m:
                ranks[i] = rank
                break

    return ranks


def recall_at_n(
        results: Sequence['resources.RankedResult'],
        ground_truth: Sequence[Tuple[float, float]],
        positions: Mapping[int, Tuple[float, float]],
        n: int,
        threshold_m: float = DEFAULT_THRESHOLD_M,
) -> float:
    """
    Fraction of queries whose top-n holds a submap closer than the threshold.

    :arg results: One RankedResult per query.
    :arg ground_truth: True query positions.
    :arg positions: Submap centers by id.
    :arg n: Number of top entries considered.
    :param threshold_m: Strict distance threshold.
    :return: Recall in [0, 1] (0 for no queries).
    """
    ranks = first_correct_ranks(results, ground_truth, positions, threshold_m)
    return float(np.mean(ranks <= n)) if ranks.size else 0.0


def recall_curve(
        results: Sequence['resources.RankedResult'],
        ground_truth: Sequence[Tuple[float, float]],
        positions: Mapping[int, Tuple[float, float]],
        max_n: int,
        threshold_m: float = DEFAULT_THRESHOLD_M,
) -> List[float]:
    """
    Recall@1 through Recall@max_n.

    :return: List where element n - 1 is Recall@n.
    """
    ranks = first_correct_ranks(results, ground_truth, positions, threshold_m)
    if not ranks.size:
        return [0.0] * max_n
    return [float(np.mean(ranks <= n)) for n in range(1, max_n + 1)]


def build_recall_report(
        results: Sequence['resources.RankedResult'],
        ground_truth: Sequence[Tuple[float, float]],
        positions: Mapping[int, Tuple[float, float]],
        method: 'types.MethodType',
        ns: Sequence[int] = REPORTED_NS,
        threshold_m: float = DEFAULT_THRESHOLD_M,
) -> RecallReport:
    """
    Recall at each of the reported N.

    :arg results: One RankedResult per query.
    :arg ground_truth: True query positions.
    :arg positions: Submap centers by id.
    :arg method: Method tag.
    :param ns: N values to report.
    :param threshold_m: Strict distance threshold.
    :return: RecallReport instance.
    """
    ranks = first_correct_ranks(results, ground_truth, positions, threshold_m)
    return RecallReport(
        recall_at={n: float(np.mean(ranks <= n)) if ranks.size else 0.0 for n in ns},
        num_queries=len(results),
        threshold_m=threshold_m,
        method=method,
    )
