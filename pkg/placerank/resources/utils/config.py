__all__ = ['DEFAULT_STPE_CONFIG', 'DEFAULT_PF_CONFIG', 'resolve_stpe_config', 'resolve_pf_config', 'apply_overrides']

import copy
from typing import Any, Dict, List

from placerank import resources, types


DEFAULT_STPE_CONFIG: 'types.StpeConfig' = {
    'k_particles': 30,
    'c_retrieve': 100,
    'l_window': 50,
    'lambda_rate': 0.3,
    'radius_m': 30.0,
    'window_m': 250.0,
    'sigma_floor_m': 5.0,
    'scoring_mode': 'database_wide',
    'prune_sigma_mult': 4.0,
    'heading_interval_m': 20.0,
    'heading_correction': True,
    'report_n': 30,
    'probability_floor': 1e-20,
    'stride_merge': True,
}

DEFAULT_PF_CONFIG: 'types.PfConfig' = {
    'k_init': 120,
    'retain_radius_m': 30.0,
    'k_topk': 120,
    'jitter_m': 5.0,
    'seed': 0,
}


def resolve_stpe_config(overrides: Dict[str, Any] | None = None) -> 'types.StpeConfig':
    """
    Merges overrides on top of the STPE defaults and validates the result.

    :param overrides: Partial config.
    :return: Complete, validated config.
    """
    config = resources.merge_dicts(copy.deepcopy(DEFAULT_STPE_CONFIG), overrides)
    resources.validate_stpe_config(config)
    return config


def resolve_pf_config(overrides: Dict[str, Any] | None = None) -> 'types.PfConfig':
    """
    Merges overrides on top of the particle-filter defaults and validates the result.

    :param overrides: Partial config.
    :return: Complete, validated config.
    """
    config = resources.merge_dicts(copy.deepcopy(DEFAULT_PF_CONFIG), overrides)
    resources.validate_pf_config(config)
    return config


def apply_overrides(config: Dict[str, Any], assignments: List[str] | None) -> Dict[str, Any]:
    """
    Applies `key=value` overrides (dotted keys address nested dicts).

    :arg config: Config dict to start from.
    :param assignments: Override expressions, e.g. `['k_particles=20', 'pf.k_init=60']`.
    :return: New config dict.
    """
    output = copy.deepcopy(config)

    for expression in assignments or []:
        key, value = resources.parse_assignment(expression)
        *parents, leaf = key.split('.')

        nested = {leaf: value}
        for parent in reversed(parents):
            nested = {parent: nested}

        output = resources.merge_dicts(output, nested)

    return output
