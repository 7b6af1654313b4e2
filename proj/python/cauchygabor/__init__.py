"""Irregular Gabor systems of Cauchy kernels.

The compiled extension ``cauchygabor._core`` carries the implementation;
this package re-exports its public surface.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
