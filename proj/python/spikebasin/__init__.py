"""Off-the-grid sparse spike estimation.

Parameter-space objective with analytic gradient/Hessian, kernel calculus on
generalized dipoles, empirical RIP estimation, Hessian eigenvalue bounds and
explicit basin-of-attraction certificates, plus fixed-step gradient descent.
"""

from spikebasin._core import *  # noqa: F401,F403
from spikebasin._core import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
