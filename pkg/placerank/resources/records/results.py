__all__ = ['RankedEntry', 'RankedResult', 'rank_entries', 'encode_result_line']

import math
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Tuple

from placerank import types


@dataclass(frozen=True)
class RankedEntry:
    submap_id: int
    similarity: float
    probability: float
    final_rank: int


@dataclass(frozen=True)
class RankedResult:
    entries: Tuple[RankedEntry, ...]
    mode: 'types.RankingMode'

    @property
    def ids(self) -> List[int]:
        return [entry.submap_id for entry in self.entries]

    def top(self, n: int) -> Tuple[RankedEntry, ...]:
        return self.entries[:n]


def rank_entries(
        scored: Iterable[Tuple[int, float, float]],
        mode: 'types.RankingMode',
        limit: int | None = None,
) -> RankedResult:
    """
    Orders candidates by probability desc, then similarity desc, then id asc.

    :arg scored: (submap_id, similarity, probability) triples.
    :arg mode: Ranking mode to record.
    :param limit: Keep only the best `limit` entries.
    :return: RankedResult with 1-based final ranks.
    """
    ordered = sorted(scored, key=lambda item: (-item[2], -item[1], item[0]))
    if limit is not None:
        ordered = ordered[:limit]

    return RankedResult(
        entries=tuple(
            RankedEntry(submap_id=int(i), similarity=float(s), probability=float(p), final_rank=rank)
            for rank, (i, s, p) in enumerate(ordered, start=1)
        ),
        mode=mode,
    )


def encode_result_line(
        index: int,
        method: 'types.MethodType',
        result: RankedResult,
        n_report: int,
        gt: Tuple[float, float] | None = None,
        top_position: Tuple[float, float] | None = None,
        elapsed_us: Dict[str, int] | None = None,
) -> Dict[str, Any]:
    """
    Builds one line of the result stream.

    :arg index: Query frame index.
    :arg method: Method tag.
    :arg result: Ranked result.
    :arg n_report: Number of entries to report.
    :param gt: Ground-truth position of the query.
    :param top_position: Center of the top-1 submap.
    :param elapsed_us: Per-stage timings in microseconds.
    :return: JSON-ready dict.
    """
    output: Dict[str, Any] = {
        'index': int(index),
        'method': method,
        'top': [
            {'id': e.submap_id, 'sim': e.similarity, 'prob': e.probability}
            for e in result.top(n_report)
        ],
    }

    if gt is not None and top_position is not None:
        output['gt_distance_m'] = math.hypot(top_position[0] - gt[0], top_position[1] - gt[1])

    output['elapsed_us'] = elapsed_us or {'retrieval': 0, 'stpe': 0}
    return output
