"""Approximation scheme via layered schedules and a configuration IP."""
from .flow import integralize_small_placement
from .ip import LayeredSolution, SizeBudgetError, count_configurations, solve_layer_ip
from .params import AUGMENTED, FIXED, EptasParams, choose_delta, normalize_epsilon
from .pipeline import EptasLimits, EptasResult, eptas_solve, reinsert_small
from .simplify import LayeredModel, LTask, remove_medium, remove_small_light, round_and_layer

__all__ = [
    "AUGMENTED", "FIXED", "EptasLimits", "EptasParams", "EptasResult", "LTask", "LayeredModel",
    "LayeredSolution", "SizeBudgetError", "choose_delta", "count_configurations", "eptas_solve",
    "integralize_small_placement", "normalize_epsilon", "reinsert_small", "remove_medium",
    "remove_small_light", "round_and_layer", "solve_layer_ip",
]
