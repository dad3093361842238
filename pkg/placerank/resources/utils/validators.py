__all__ = [
    'validate_stpe_config', 'validate_pf_config', 'validate_noise_config', 'validate_world_spec_config',
    'validate_sweep_spec_config',
]

from typing import Dict, Any, get_args

import placerank
from placerank import resources, types


STPE_KEYS = {
    'k_particles', 'c_retrieve', 'l_window', 'lambda_rate', 'radius_m', 'window_m', 'sigma_floor_m',
    'scoring_mode', 'prune_sigma_mult', 'heading_interval_m', 'heading_correction', 'report_n',
    'probability_floor', 'stride_merge',
}
PF_KEYS = {'k_init', 'retain_radius_m', 'k_topk', 'jitter_m', 'seed'}
NOISE_KEYS = {'eps_yaw_deg', 'eps_xy', 'seed'}
WORLD_KEYS = {
    'extent_m', 'road_grid_pitch_m', 'submap_side_m', 'submap_interval_m', 'ambiguity_level', 'descriptor_dim',
    'descriptor_noise_sigma', 'seed', 'cell_size_m', 'road_width_m', 'sidewalk_width_m', 'magnetometer_noise_deg',
    'query_spacing_m', 'trajectory_length_m',
}
SWEEP_KEYS = {'axis', 'values', 'repeats', 'method', 'cross', 'base_config', 'pf_config', 'noise', 'seed', 'name'}


def _check_keys(config: Any, accepted: set, validator: 'resources.Validator') -> bool:
    """Type check a config dict and flag unexpected keys."""
    if not isinstance(config, dict):
        validator.add('config', 'Config must be a dict.')
        return False

    unexpected = sorted(set(config.keys()) - accepted)
    if unexpected:
        validator.add(
            'config',
            f'Config contains unexpected keys: {", ".join(unexpected)}. Accepted keys are: {", ".join(sorted(accepted))}'
        )
    return True


def validate_stpe_config(config: Dict[str, Any], validator: 'resources.Validator | None' = None) -> None:
    """
    Validate an STPE config.

    :arg config: Complete config dict.
    :param validator: Parent validator (errors are raised by the caller when provided).
    """
    own = validator is None
    validator = resources.Validator(path='stpe') if own else validator

    if _check_keys(config, STPE_KEYS, validator):
        validator.require_number('k_particles', config.get('k_particles'), minimum=1, integer=True)
        validator.require_number('c_retrieve', config.get('c_retrieve'), minimum=1, integer=True)
        validator.require_number('l_window', config.get('l_window'), minimum=1, integer=True)
        validator.require_number('lambda_rate', config.get('lambda_rate'), minimum=0, maximum=1, exclusive_minimum=True)
        validator.require_number('radius_m', config.get('radius_m'), minimum=0, exclusive_minimum=True)
        validator.require_number('window_m', config.get('window_m'), minimum=0, exclusive_minimum=True)
        validator.require_number('sigma_floor_m', config.get('sigma_floor_m'), minimum=0, exclusive_minimum=True)
        validator.require_number('prune_sigma_mult', config.get('prune_sigma_mult'), minimum=0)
        validator.require_number(
            'heading_interval_m', config.get('heading_interval_m', 20.0), minimum=0, exclusive_minimum=True
        )
        validator.require_number('report_n', config.get('report_n', 30), minimum=1, integer=True)
        validator.require_number('probability_floor', config.get('probability_floor', 0.0), minimum=0)

        if config.get('scoring_mode') not in get_args(types.ScoringMode):
            validator.add('scoring_mode', f'Value must be one of: {", ".join(get_args(types.ScoringMode))}')

        if not isinstance(config.get('heading_correction', True), bool):
            validator.add('heading_correction', 'Value must be a boolean.')

        if not isinstance(config.get('stride_merge', True), bool):
            validator.add('stride_merge', 'Value must be a boolean.')

        k, c = config.get('k_particles'), config.get('c_retrieve')
        if isinstance(k, int) and isinstance(c, int) and k >= c:
            validator.add('k_particles', f'Value must be less than c_retrieve ({c}).')

    if own:
        validator.raise_for_validation_errors()


def validate_pf_config(config: Dict[str, Any], validator: 'resources.Validator | None' = None) -> None:
    """
    Validate a particle-filter config.

    :arg config: Complete config dict.
    :param validator: Parent validator.
    """
    own = validator is None
    validator = resources.Validator(path='pf') if own else validator

    if _check_keys(config, PF_KEYS, validator):
        validator.require_number('k_init', config.get('k_init'), minimum=1, integer=True)
        validator.require_number('retain_radius_m', config.get('retain_radius_m'), minimum=0, exclusive_minimum=True)
        validator.require_number('k_topk', config.get('k_topk'), minimum=1, integer=True)
        validator.require_number('jitter_m', config.get('jitter_m', 5.0), minimum=0)
        validator.require_number('seed', config.get('seed', 0), minimum=0, integer=True)

    if own:
        validator.raise_for_validation_errors()


def validate_noise_config(config: Dict[str, Any], validator: 'resources.Validator | None' = None) -> None:
    """
    Validate a motion-noise config.

    :arg config: Noise config dict.
    :param validator: Parent validator.
    """
    own = validator is None
    validator = resources.Validator(path='noise') if own else validator

    if _check_keys(config, NOISE_KEYS, validator):
        validator.require_number('eps_yaw_deg', config.get('eps_yaw_deg', 0.0), minimum=0)
        validator.require_number('eps_xy', config.get('eps_xy', 0.0), minimum=0)
        validator.require_number('seed', config.get('seed', 0), minimum=0, integer=True)

    if own:
        validator.raise_for_validation_errors()


def validate_world_spec_config(config: Dict[str, Any], validator: 'resources.Validator | None' = None) -> None:
    """
    Validate a world spec as read from JSON.

    :arg config: World spec dict.
    :param validator: Parent validator.
    """
    own = validator is None
    validator = resources.Validator(path='world') if own else validator

    if _check_keys(config, WORLD_KEYS, validator):
        extent = config.get('extent_m')
        if not isinstance(extent, (list, tuple)) or len(extent) != 2:
            validator.add('extent_m', 'Value must be a pair of positive numbers [width, height].')
        else:
            validator.require_number('extent_m[0]', extent[0], minimum=0, exclusive_minimum=True)
            validator.require_number('extent_m[1]', extent[1], minimum=0, exclusive_minimum=True)

        positive = [
            'road_grid_pitch_m', 'submap_side_m', 'submap_interval_m', 'cell_size_m', 'road_width_m',
            'query_spacing_m', 'trajectory_length_m',
        ]
        for name in positive:
            if name in config:
                validator.require_number(name, config[name], minimum=0, exclusive_minimum=True)

        for name in ['descriptor_noise_sigma', 'magnetometer_noise_deg', 'sidewalk_width_m']:
            if name in config:
                validator.require_number(name, config[name], minimum=0)

        if 'ambiguity_level' in config:
            validator.require_number('ambiguity_level', config['ambiguity_level'], minimum=0, maximum=1)
        if 'descriptor_dim' in config:
            validator.require_number('descriptor_dim', config['descriptor_dim'], minimum=1, integer=True)
        if 'seed' in config:
            validator.require_number('seed', config['seed'], minimum=0, integer=True)

        side = config.get('submap_side_m', 60.0)
        interval = config.get('submap_interval_m', 20.0)
        if isinstance(side, (int, float)) and isinstance(interval, (int, float)) and interval > side:
            validator.add('submap_interval_m', f'Value must not exceed submap_side_m ({side}).')

    if own:
        validator.raise_for_validation_errors()


def validate_sweep_spec_config(config: Dict[str, Any], validator: 'resources.Validator | None' = None) -> None:
    """
    Validate a sweep spec as read from JSON.

    :arg config: Sweep spec dict.
    :param validator: Parent validator.
    """
    own = validator is None
    validator = resources.Validator(path='sweep') if own else validator
    axes = get_args(types.SweepAxis)

    if _check_keys(config, SWEEP_KEYS, validator):
        def check_axis(spec: Dict[str, Any], child: 'resources.Validator') -> None:
            if spec.get('axis') not in axes:
                child.add('axis', f'Value must be one of: {", ".join(axes)}')

            try:
                values = resources.parse_values(spec.get('values', []))
            except placerank.PlacerankError as exc:
                child.add('values', exc.message)
                return

            if not values:
                child.add('values', 'Values must not be empty.')

        check_axis(config, validator)

        if 'cross' in config:
            if not isinstance(config['cross'], dict):
                validator.add('cross', 'Value must be a dict with axis and values.')
            else:
                check_axis(config['cross'], validator.spawn_new('cross'))
                if config['cross'].get('axis') == config.get('axis'):
                    validator.add('cross.axis', 'Cross axis must differ from the main axis.')

        if 'repeats' in config:
            validator.require_number('repeats', config['repeats'], minimum=1, integer=True)
        if 'seed' in config:
            validator.require_number('seed', config['seed'], minimum=0, integer=True)
        if config.get('method', 'stpe') not in get_args(types.MethodType):
            validator.add('method', f'Value must be one of: {", ".join(get_args(types.MethodType))}')

        if 'base_config' in config:
            validate_stpe_config(
                resources.merge_dicts(resources.DEFAULT_STPE_CONFIG, config['base_config']),
                validator.spawn_new('base_config')
            )
        if 'pf_config' in config:
            validate_pf_config(
                resources.merge_dicts(resources.DEFAULT_PF_CONFIG, config['pf_config']),
                validator.spawn_new('pf_config')
            )
        if 'noise' in config:
            validate_noise_config(config['noise'], validator.spawn_new('noise'))

    if own:
        validator.raise_for_validation_errors()
