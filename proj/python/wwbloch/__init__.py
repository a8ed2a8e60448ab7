"""Bloch band structure of the water-wave Dirichlet-Neumann operator."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc

__doc__ = _core_doc
