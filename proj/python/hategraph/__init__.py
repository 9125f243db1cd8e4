"""Hateful-user detection pipeline bindings.

Graph construction and normalization, belief diffusion, document and node
embeddings, graph neural classifiers, benchmark utilities, and temporal
analytics, backed by the C++ core.
"""

from hategraph._core import *  # noqa: F401,F403
from hategraph._core import __doc__ as _core_doc

__all__ = [name for name in dir() if not name.startswith("_")]
