__all__ = ['ValidationErrorItem', 'ScoringMode', 'MethodType', 'RankingMode', 'SweepAxis']

from typing import Literal, TypedDict

ScoringMode = Literal['database_wide', 'candidate_set']
RankingMode = Literal['database_wide', 'candidate_set', 'similarity', 'particle_count']
MethodType = Literal['single', 'stpe', 'pf']
SweepAxis = Literal['L', 'K', 'lambda', 'eps_yaw', 'eps_xy', 'pf_k_init', 'db_area_km2']


class ValidationErrorItem(TypedDict):
    name: str
    message: str
