"""Backward and ancient heat solutions on finite graphs.

Thin re-export of the compiled core: domains and Laplacians, the coefficient
ladder and its growth analysis, truncated series evaluation, the spectral
oracle, and the flat counterexample on the line.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
