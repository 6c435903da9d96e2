"""
AF MIMO Capacity Toolkit
------------------------

Ergodic capacity, bounds and high-SNR characterization of amplify-and-forward
MIMO dual-hop channels, with a Monte Carlo oracle for every analytic result.
"""

import logging

logger = logging.getLogger(__name__)

__version__ = "0.1.0"
