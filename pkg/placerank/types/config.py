__all__ = ['StpeConfig', 'PfConfig', 'NoiseConfig', 'WorldSpecConfig', 'SweepAxisConfig', 'SweepSpecConfig']

import sys
from typing import TypedDict, List, Tuple

if sys.version_info >= (3, 11):
    from typing import NotRequired
else:
    from typing_extensions import NotRequired

from placerank import types


class StpeConfig(TypedDict):
    k_particles: int
    c_retrieve: int
    l_window: int
    lambda_rate: float
    radius_m: float
    window_m: float
    sigma_floor_m: float
    scoring_mode: 'types.ScoringMode'
    prune_sigma_mult: float
    heading_interval_m: NotRequired[float]
    heading_correction: NotRequired[bool]
    report_n: NotRequired[int]
    probability_floor: NotRequired[float]
    stride_merge: NotRequired[bool]


class PfConfig(TypedDict):
    k_init: int
    retain_radius_m: float
    k_topk: int
    jitter_m: NotRequired[float]
    seed: NotRequired[int]


class NoiseConfig(TypedDict):
    eps_yaw_deg: NotRequired[float]
    eps_xy: NotRequired[float]
    seed: NotRequired[int]


class WorldSpecConfig(TypedDict):
    extent_m: Tuple[float, float] | List[float]
    road_grid_pitch_m: NotRequired[float]
    submap_side_m: NotRequired[float]
    submap_interval_m: NotRequired[float]
    ambiguity_level: NotRequired[float]
    descriptor_dim: NotRequired[int]
    descriptor_noise_sigma: NotRequired[float]
    seed: NotRequired[int]
    cell_size_m: NotRequired[float]
    road_width_m: NotRequired[float]
    sidewalk_width_m: NotRequired[float]
    magnetometer_noise_deg: NotRequired[float]
    query_spacing_m: NotRequired[float]
    trajectory_length_m: NotRequired[float]


class SweepAxisConfig(TypedDict):
    axis: 'types.SweepAxis'
    values: List[float] | str


class SweepSpecConfig(TypedDict):
    axis: 'types.SweepAxis'
    values: List[float] | str
    repeats: NotRequired[int]
    method: NotRequired['types.MethodType']
    cross: NotRequired[SweepAxisConfig]
    base_config: NotRequired[StpeConfig]
    pf_config: NotRequired[PfConfig]
    noise: NotRequired[NoiseConfig]
    seed: NotRequired[int]
    name: NotRequired[str]
