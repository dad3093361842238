__all__ = ['NoiseSpec', 'inject_noise']

import math
from dataclasses import dataclass
from typing import List

import numpy as np

from placerank import resources, types


@dataclass(frozen=True)
class NoiseSpec:
    eps_yaw: float = 0.0
    eps_xy: float = 0.0
    seed: int = 0

    @classmethod
    def from_config(cls, config: 'types.NoiseConfig | None') -> 'NoiseSpec':
        """
        Builds a NoiseSpec from its JSON form (yaw in degrees).

        :arg config: Noise config dict or None.
        :return: NoiseSpec instance.
        """
        config = config or {}
        resources.validate_noise_config(config)
        return cls(
            eps_yaw=math.radians(config.get('eps_yaw_deg', 0.0)),
            eps_xy=float(config.get('eps_xy', 0.0)),
            seed=int(config.get('seed', 0)),
        )

    @property
    def eps_axis(self) -> float:
        """Per-axis half-width: the total translational magnitude split evenly over x and y."""
        return self.eps_xy / math.sqrt(2.0)


def inject_noise(motions: List['resources.RelativeMotion'], spec: NoiseSpec) -> List['resources.RelativeMotion']:
    """
    Perturbs relative motions with independent uniform yaw and translation noise.

    :arg motions: Relative motions.
    :arg spec: Noise levels and seed.
    :return: Perturbed motions (same length).
    """
    if spec.eps_yaw == 0.0 and spec.eps_xy == 0.0:
        return list(motions)

    rng = np.random.default_rng(spec.seed)
    n = len(motions)

    # One row per motion so a prefix of the sequence gets the same noise as the full run
    draws = rng.uniform(-1.0, 1.0, (n, 3))
    yaw = draws[:, 0] * spec.eps_yaw
    ex = draws[:, 1] * spec.eps_axis
    ey = draws[:, 2] * spec.eps_axis

    return [
        resources.RelativeMotion(
            dx=m.dx + float(ex[i]),
            dy=m.dy + float(ey[i]),
            dtheta=resources.wrap_angle(m.dtheta + float(yaw[i])),
        )
        for i, m in enumerate(motions)
    ]
