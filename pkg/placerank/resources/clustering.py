__all__ = ['Point2', 'ClusterSet', 'dbscan', 'DEFAULT_RADIUS_M']

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from sklearn.cluster import DBSCAN

import placerank


DEFAULT_RADIUS_M = 30.0


@dataclass(frozen=True)
class Point2:
    x: float
    y: float
    payload_id: int


@dataclass(frozen=True)
class ClusterSet:
    clusters: Tuple[Tuple[Point2, ...], ...]

    def __len__(self) -> int:
        return len(self.clusters)

    @property
    def sizes(self) -> List[int]:
        return [len(cluster) for cluster in self.clusters]

    @property
    def total(self) -> int:
        return sum(self.sizes)


def dbscan(points: Sequence[Point2], radius_m: float = DEFAULT_RADIUS_M) -> ClusterSet:
    """
    Partitions candidate positions into spatial clusters.

    With a minimum neighbourhood of one point every candidate is a core point,
    so the clusters are the connected components of the "within radius_m"
    relation and no candidate is left as noise.

    :arg points: Candidate positions.
    :param radius_m: Neighbourhood radius in meters.
    :return: ClusterSet ordered by smallest payload id.
    """
    if not radius_m > 0:
        raise placerank.PlacerankError(code='InvalidArgument', message='radius_m must be greater than 0.')

    if not points:
        return ClusterSet(clusters=())

    coordinates = np.array([(p.x, p.y) for p in points], dtype=np.float64)
    labels = DBSCAN(eps=radius_m, min_samples=1, metric='euclidean').fit(coordinates).labels_

    groups = {}
    for point, label in zip(points, labels):
        groups.setdefault(int(label), []).append(point)

    clusters = [tuple(sorted(group, key=lambda p: (p.payload_id, p.x, p.y))) for group in groups.values()]
    clusters.sort(key=lambda cluster: (cluster[0].payload_id, cluster[0].x, cluster[0].y))

    return ClusterSet(clusters=tuple(clusters))
