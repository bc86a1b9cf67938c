"""Stochastic sequential covers and online-prediction experiments."""

__version__ = "0.1.0"

from . import complexity, covers, domain, game, losses, oracles, predictors  # noqa: F401
