__all__ = ['QueryFrame']

from dataclasses import dataclass, field, replace
from typing import Tuple

import numpy as np

from placerank import resources


@dataclass(frozen=True, eq=False)
class QueryFrame:
    index: int
    descriptor: np.ndarray
    rel: 'resources.RelativeMotion'
    heading: 'resources.HeadingSample'
    path_len_from_prev: float = field(default=-1.0)
    gt: Tuple[float, float] | None = None

    def __post_init__(self) -> None:
        # Path length defaults to the length of the relative motion
        if self.path_len_from_prev < 0:
            object.__setattr__(self, 'path_len_from_prev', self.rel.distance)

    def with_rel(self, rel: 'resources.RelativeMotion') -> 'QueryFrame':
        """Copy of the frame with a different relative motion (path length re-derived)."""
        return replace(self, rel=rel, path_len_from_prev=-1.0)
