"""Gnutella overlay simulation and analysis (bindings to the C++ core)."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
