__all__ = ['GaussianComponent', 'MixtureDensity', 'eval_density', 'translate', 'mix', 'merge_components']

from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

import placerank


@dataclass(frozen=True)
class GaussianComponent:
    amplitude: float
    mu_x: float
    mu_y: float
    sigma_x: float
    sigma_y: float


class MixtureDensity:
    def __init__(
            self,
            amplitude: np.ndarray,
            mu_x: np.ndarray,
            mu_y: np.ndarray,
            sigma_x: np.ndarray,
            sigma_y: np.ndarray,
    ) -> None:
        """
        Weighted axis-aligned Gaussian components over the plane, stored column-wise.

        Components carry no 1/(2 pi sx sy) normalisation: the mixture is a
        position score, not a probability density.

        :arg amplitude: (M,) component weights.
        :arg mu_x: (M,) east means.
        :arg mu_y: (M,) north means.
        :arg sigma_x: (M,) east standard deviations.
        :arg sigma_y: (M,) north standard deviations.
        """
        self.amplitude = np.asarray(amplitude, dtype=np.float64)
        self.mu_x = np.asarray(mu_x, dtype=np.float64)
        self.mu_y = np.asarray(mu_y, dtype=np.float64)
        self.sigma_x = np.asarray(sigma_x, dtype=np.float64)
        self.sigma_y = np.asarray(sigma_y, dtype=np.float64)

        shapes = {a.shape for a in self.columns}
        if len(shapes) != 1 or self.amplitude.ndim != 1:
            raise placerank.PlacerankError(code='InvalidArgument', message='Mixture columns must be 1-D and equal length.')

        if np.any(self.sigma_x <= 0) or np.any(self.sigma_y <= 0) or np.any(self.amplitude <= 0):
            raise placerank.PlacerankError(
                code='InvalidArgument',
                message='Mixture components need positive amplitudes and standard deviations.'
            )

        for array in self.columns:
            array.flags.writeable = False

    @property
    def columns(self) -> Tuple[np.ndarray, ...]:
        return self.amplitude, self.mu_x, self.mu_y, self.sigma_x, self.sigma_y

    @classmethod
    def from_components(cls, components: Sequence[GaussianComponent]) -> 'MixtureDensity':
        """
        Builds a mixture from component records.

        :arg components: Gaussian components.
        :return: MixtureDensity instance.
        """
        if not components:
            return cls(*(np.empty(0) for _ in range(5)))

        columns = np.array(
            [(c.amplitude, c.mu_x, c.mu_y, c.sigma_x, c.sigma_y) for c in components],
            dtype=np.float64
        )
        return cls(*columns.T.copy())

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'MixtureDensity':
        """Decodes the JSON debugging form {components: [{A, mux, muy, sx, sy}]}."""
        return cls.from_components([
            GaussianComponent(c['A'], c['mux'], c['muy'], c['sx'], c['sy']) for c in data.get('components', [])
        ])

    @property
    def components(self) -> List[GaussianComponent]:
        return [GaussianComponent(*map(float, row)) for row in zip(*self.columns)]

    @property
    def total_amplitude(self) -> float:
        return float(np.sum(self.amplitude))

    def __len__(self) -> int:
        return int(self.amplitude.shape[0])

    def to_dict(self) -> Dict[str, Any]:
        """JSON debugging form of the mixture."""
        return {
            'components': [
                {'A': c.amplitude, 'mux': c.mu_x, 'muy': c.mu_y, 'sx': c.sigma_x, 'sy': c.sigma_y}
                for c in self.components
            ]
        }


def eval_density(d: MixtureDensity, x: float | np.ndarray, y: float | np.ndarray) -> float | np.ndarray:
    """
    Evaluates the mixture score at one or many points.

    :arg d: Mixture.
    :arg x: East coordinate(s).
    :arg y: North coordinate(s).
    :return: Non-negative score, scalar or array shaped like x.
    """
    x_arr = np.asarray(x, dtype=np.float64)
    y_arr = np.asarray(y, dtype=np.float64)

    zx = (x_arr[..., None] - d.mu_x) / d.sigma_x
    zy = (y_arr[..., None] - d.mu_y) / d.sigma_y
    values = np.sum(d.amplitude * np.exp(-0.5 * zx * zx - 0.5 * zy * zy), axis=-1)

    return float(values) if values.ndim == 0 else values


def translate(d: MixtureDensity, delta: Tuple[float, float]) -> MixtureDensity:
    """
    Shifts every component mean by delta; amplitudes and spreads are unchanged.

    :arg d: Mixture.
    :arg delta: (dx, dy) in meters.
    :return: New mixture.
    """
    dx, dy = delta
    return MixtureDensity(d.amplitude, d.mu_x + dx, d.mu_y + dy, d.sigma_x, d.sigma_y)


def mix(densities: Sequence[MixtureDensity]) -> MixtureDensity:
    """
    Equal-weight average of L mixtures: components concatenated, amplitudes scaled by 1/L.

    :arg densities: Mixtures to average.
    :return: Combined mixture.
    """
    if not densities:
        raise placerank.PlacerankError(code='EmptyMixtureList', message='Cannot mix an empty list of densities.')

    weight = 1.0 / len(densities)
    return MixtureDensity(
        np.concatenate([d.amplitude for d in densities]) * weight,
        np.concatenate([d.mu_x for d in densities]),
        np.concatenate([d.mu_y for d in densities]),
        np.concatenate([d.sigma_x for d in densities]),
        np.concatenate([d.sigma_y for d in densities]),
    )


def merge_components(
        d: MixtureDensity,
        cell_m: float,
        sigma_floor_m: float,
        labels: np.ndarray | None = None,
) -> MixtureDensity:
    """
    Moment-matched merge of the components whose means share a square cell.

    Amplitudes add up; the merged mean and spread preserve the first and
    second moments of the merged components. Components with different
    labels are never merged.

    :arg d: Mixture.
    :arg cell_m: Cell side in meters.
    :arg sigma_floor_m: Lower bound on merged standard deviations.
    :param labels: (M,) integer group of every component.
    :return: New mixture, components ordered by (label, cell).
    """
    if not cell_m > 0 or not sigma_floor_m > 0:
        raise placerank.PlacerankError(
            code='InvalidArgument',
            message=f'Cell side and sigma floor must be greater than 0, got {cell_m} and {sigma_floor_m}.'
        )

    if len(d) == 0:
        return d

    labels = np.zeros(len(d), dtype=np.int64) if labels is None else np.asarray(labels, dtype=np.int64)
    if labels.shape != d.amplitude.shape:
        raise placerank.PlacerankError(code='InvalidArgument', message='One label per component is required.')

    keys = np.column_stack([labels, np.floor(d.mu_x / cell_m), np.floor(d.mu_y / cell_m)]).astype(np.int64)
    _, group = np.unique(keys, axis=0, return_inverse=True)
    group = group.reshape(-1)

    weight = np.bincount(group, weights=d.amplitude)
    mu_x = np.bincount(group, weights=d.amplitude * d.mu_x) / weight
    mu_y = np.bincount(group, weights=d.amplitude * d.mu_y) / weight
    var_x = np.bincount(group, weights=d.amplitude * (d.sigma_x ** 2 + d.mu_x ** 2)) / weight - mu_x ** 2
    var_y = np.bincount(group, weights=d.amplitude * (d.sigma_y ** 2 + d.mu_y ** 2)) / weight - mu_y ** 2

    floor = sigma_floor_m ** 2
    return MixtureDensity(weight, mu_x, mu_y, np.sqrt(np.maximum(var_x, floor)), np.sqrt(np.maximum(var_y, floor)))
