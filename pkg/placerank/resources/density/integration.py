__all__ = ['rect_probability', 'rect_probability_pairs', 'interval_integral']

import math

import numpy as np
from scipy.special import erfc

import placerank
from placerank import resources


SQRT_HALF_PI = math.sqrt(math.pi / 2.0)

# Largest (component x distinct edge) table built per axis, relative to the pair count
EDGE_TABLE_RATIO = 4


def _tail_difference(below: np.ndarray, above: np.ndarray, g_lo: np.ndarray, g_hi: np.ndarray) -> np.ndarray:
    """
    erf(b) - erf(a) from g = erfc(|z|) at both ends, without cancellation in either tail.

    :arg below: Mask of intervals lying entirely below the mean (b < 0).
    :arg above: Mask of intervals lying entirely above the mean (a > 0).
    :arg g_lo: erfc(|a|).
    :arg g_hi: erfc(|b|).
    """
    return np.where(above, g_lo - g_hi, np.where(below, g_hi - g_lo, 2.0 - g_lo - g_hi))


def _erf_difference(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """erf(b) - erf(a) for a <= b, one erfc per end."""
    a, b = np.broadcast_arrays(np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64))
    return _tail_difference(b < 0, a > 0, erfc(np.abs(a)), erfc(np.abs(b)))


def interval_integral(lo: np.ndarray, hi: np.ndarray, mu: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    """
    Integral of exp(-(x - mu)^2 / (2 sigma^2)) over [lo, hi].

    :arg lo: Lower bound(s).
    :arg hi: Upper bound(s).
    :arg mu: Mean(s).
    :arg sigma: Standard deviation(s).
    :return: Integral value(s).
    """
    scale = sigma * math.sqrt(2.0)
    return sigma * SQRT_HALF_PI * _erf_difference((lo - mu) / scale, (hi - mu) / scale)


def _check_radius(r: float) -> None:
    if not r > 0:
        raise placerank.PlacerankError(code='InvalidArgument', message=f'r must be greater than 0, got {r}.')


def rect_probability(
        d: 'resources.MixtureDensity',
        u: float | np.ndarray,
        v: float | np.ndarray,
        r: float,
) -> float | np.ndarray:
    """
    Average of the mixture score over the square [u-r, u+r] x [v-r, v+r].

    The integrand is separable per component, so the square integral is the
    product of two one-dimensional Gaussian integrals in closed form.

    :arg d: Mixture.
    :arg u: Submap center east coordinate(s).
    :arg v: Submap center north coordinate(s).
    :arg r: Half side of the square in meters.
    :return: Non-negative value(s), shaped like u.
    """
    _check_radius(r)

    u_arr = np.asarray(u, dtype=np.float64)[..., None]
    v_arr = np.asarray(v, dtype=np.float64)[..., None]

    ix = interval_integral(u_arr - r, u_arr + r, d.mu_x, d.sigma_x)
    iy = interval_integral(v_arr - r, v_arr + r, d.mu_y, d.sigma_y)
    values = np.sum(d.amplitude * ix * iy, axis=-1) / (4.0 * r * r)

    return float(values) if values.ndim == 0 else values


def _axis_pair_integrals(
        centers: np.ndarray,
        rows: np.ndarray,
        components: np.ndarray,
        mu: np.ndarray,
        sigma: np.ndarray,
        r: float,
) -> np.ndarray:
    """
    One-dimensional integrals of the listed (row, component) pairs along one axis.

    Submaps on a regular lattice share square edges, so when the distinct
    edges are few the erfc values are tabulated once per (component, edge).
    """
    scale = sigma * math.sqrt(2.0)
    lo_edge, hi_edge = centers[rows] - r, centers[rows] + r
    m = mu[components]

    edges, inverse = np.unique(np.concatenate([centers - r, centers + r]), return_inverse=True)
    n = centers.shape[0]

    if mu.shape[0] * edges.shape[0] <= EDGE_TABLE_RATIO * rows.shape[0]:
        table = erfc(np.abs(edges[None, :] - mu[:, None]) / scale[:, None])
        g_lo = table[components, inverse[:n][rows]]
        g_hi = table[components, inverse[n:][rows]]
    else:
        s = scale[components]
        g_lo = erfc(np.abs(lo_edge - m) / s)
        g_hi = erfc(np.abs(hi_edge - m) / s)

    return sigma[components] * SQRT_HALF_PI * _tail_difference(hi_edge < m, lo_edge > m, g_lo, g_hi)


def rect_probability_pairs(
        d: 'resources.MixtureDensity',
        u: np.ndarray,
        v: np.ndarray,
        r: float,
        rows: np.ndarray,
        components: np.ndarray,
) -> np.ndarray:
    """
    rect_probability restricted to the listed (row, component) pairs.

    Pairs left out contribute nothing, so a spatial pruning that pairs every
    submap with the components near it scores in time linear in the pairs.

    :arg d: Mixture.
    :arg u: (n,) submap center east coordinates.
    :arg v: (n,) submap center north coordinates.
    :arg r: Half side of the square in meters.
    :arg rows: (P,) submap row of every pair.
    :arg components: (P,) component of every pair.
    :return: (n,) values.
    """
    _check_radius(r)

    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    rows = np.asarray(rows, dtype=np.int64)
    components = np.asarray(components, dtype=np.int64)

    if rows.shape != components.shape:
        raise placerank.PlacerankError(code='InvalidArgument', message='Pair rows and components must align.')

    if rows.size == 0:
        return np.zeros(u.shape[0])

    ix = _axis_pair_integrals(u, rows, components, d.mu_x, d.sigma_x, r)
    iy = _axis_pair_integrals(v, rows, components, d.mu_y, d.sigma_y, r)
    weights = d.amplitude[components] * ix * iy

    return np.bincount(rows, weights=weights, minlength=u.shape[0]) / (4.0 * r * r)
