"""Stochastic third-grade fluid on the periodic torus: spectral solver,
sensitivity solvers and Monte-Carlo optimal control."""

from ._tgf import *  # noqa: F401,F403
from ._tgf import __doc__  # noqa: F401
