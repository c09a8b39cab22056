"""Density-matrix simulator for ensemble-averaged Bell tests.

The heavy lifting lives in the compiled ``_bellsim`` extension; this package
re-exports its surface unchanged.
"""

from ._bellsim import *  # noqa: F401,F403
from ._bellsim import __doc__, __version__  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
