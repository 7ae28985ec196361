"""Correlation functions, Bell expressions and their maximization."""

from .correlations import bell_quantity, correlation, correlation_gradient, correlation_tensor
from .expressions import CHSH, ZB3, ZB4, BellExpression, expression_for
from .families import StateFamily, maximize_bell_over_state_family, parametrized_state
from .optimize import OptimizationReport, OptimizerConfig, maximize_bell
from .oracle import eigenstate_correlation_oracle

__all__ = [
    "BellExpression",
    "CHSH",
    "OptimizationReport",
    "OptimizerConfig",
    "StateFamily",
    "ZB3",
    "ZB4",
    "bell_quantity",
    "correlation",
    "correlation_gradient",
    "correlation_tensor",
    "eigenstate_correlation_oracle",
    "expression_for",
    "maximize_bell",
    "maximize_bell_over_state_family",
    "parametrized_state",
]
