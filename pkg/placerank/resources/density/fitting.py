__all__ = ['fit_components', 'DEFAULT_SIGMA_FLOOR_M']

import numpy as np

import placerank
from placerank import resources


DEFAULT_SIGMA_FLOOR_M = 5.0


def fit_components(
        clusters: 'resources.ClusterSet',
        sigma_floor_m: float = DEFAULT_SIGMA_FLOOR_M,
) -> 'resources.MixtureDensity':
    """
    Fits one axis-aligned Gaussian per cluster.

    Amplitude is the cluster's share of all candidates, the mean is the
    cluster centroid and each spread is the population standard deviation
    along its axis, floored at `sigma_floor_m`.

    :arg clusters: Partitioned candidates.
    :param sigma_floor_m: Minimum standard deviation in meters.
    :return: Mixture with amplitudes summing to 1.
    """
    if len(clusters) == 0:
        raise placerank.PlacerankError(code='EmptyClusterSet', message='Cannot fit components to an empty ClusterSet.')

    if not sigma_floor_m > 0:
        raise placerank.PlacerankError(code='InvalidArgument', message='sigma_floor_m must be greater than 0.')

    total = clusters.total
    rows = []

    for cluster in clusters.clusters:
        xy = np.array([(p.x, p.y) for p in cluster], dtype=np.float64)
        mean = xy.mean(axis=0)
        std = np.sqrt(np.mean((xy - mean) ** 2, axis=0))
        rows.append((
            len(cluster) / total,
            mean[0],
            mean[1],
            max(std[0], sigma_floor_m),
            max(std[1], sigma_floor_m),
        ))

    return resources.MixtureDensity(*np.array(rows, dtype=np.float64).T.copy())
