__all__ = ['SingleRefiner', 'rank_by_similarity']

from typing import List

from placerank import resources
from placerank.api import Refiner


def rank_by_similarity(hits: List['resources.RetrievalHit']) -> 'resources.RankedResult':
    """
    Ranking of a single query's hits by similarity alone.

    :arg hits: Retrieval hits.
    :return: RankedResult in similarity order.
    """
    return resources.rank_entries(((h.submap_id, h.similarity, 0.0) for h in hits), mode='similarity')


class SingleRefiner(Refiner):
    method = 'single'

    def reset(self) -> None:
        pass

    def push(
            self,
            frame: 'resources.QueryFrame',
            hits: List['resources.RetrievalHit'] | None = None,
    ) -> 'resources.RankedResult':
        """
        Returns the query's own retrieval, unrefined.

        :arg frame: QueryFrame instance.
        :param hits: Precomputed hits (retrieved here when omitted).
        :return: RankedResult.
        """
        return rank_by_similarity(hits if hits is not None else self.retrieve(frame))
