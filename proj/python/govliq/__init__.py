"""Governance / noise-trading stock liquidity model.

Thin wrapper around the compiled extension: firm valuation under agency
costs, the open-auction equilibrium price, analytic liquidity indices and
their Monte Carlo verification.
"""

from ._govliq import *  # noqa: F401,F403
from ._govliq import __version__  # noqa: F401
