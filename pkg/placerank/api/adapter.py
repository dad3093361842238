__all__ = ['Refiner']

from typing import List

import placerank
from placerank import resources, types


class Refiner:
    method: 'types.MethodType' = None

    def __init__(self, client: 'placerank.Placerank') -> None:
        """
        Base for per-trajectory refinement pipelines over a shared index.

        A refiner owns the mutable state of one trajectory; the index it
        reads from is immutable and may be shared between refiners.

        :arg client: Placerank instance.
        """
        self.client = client
        self.index = client.index

    @property
    def retrieve_c(self) -> int:
        """Number of hits retrieved per query."""
        return self.client.stpe_config['c_retrieve']

    def retrieve(self, frame: 'resources.QueryFrame') -> List['resources.RetrievalHit']:
        """
        Top-C retrieval for a query frame.

        :arg frame: QueryFrame instance.
        :return: Ranked hits.
        """
        return self.index.query_top_c(frame.descriptor, self.retrieve_c)

    def reset(self) -> None:
        """Drops all trajectory state."""
        raise NotImplementedError('Reset has not been implemented for this refiner.')

    def push(
            self,
            frame: 'resources.QueryFrame',
            hits: List['resources.RetrievalHit'] | None = None,
    ) -> 'resources.RankedResult':
        """Consumes the next frame and returns its refined ranking."""
        raise NotImplementedError('Refinement has not been implemented for this refiner.')
