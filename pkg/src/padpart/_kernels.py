"""Backend selection for the hot kernels.

Prefers the compiled extension; falls back to the pure-Python module when
the extension is missing or PADPART_PURE_PYTHON is set to a non-empty value.
"""

import os

from . import _fallback

if os.environ.get("PADPART_PURE_PYTHON"):
    dijkstra_masked = _fallback.dijkstra_masked
    label_components = _fallback.label_components
    BACKEND = "python"
else:
    try:
        from ._speedups import dijkstra_masked, label_components

        BACKEND = "cython"
    except ImportError:
        dijkstra_masked = _fallback.dijkstra_masked
        label_components = _fallback.label_components
        BACKEND = "python"
