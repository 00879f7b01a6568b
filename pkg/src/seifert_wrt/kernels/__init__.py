"""Hot kernels with a compiled GMP back end and a pure-Python fallback.

The compiled extension is used when it was built; set ``SEIFERT_WRT_PURE=1``
to force the fallback.  ``BACKEND`` reports which one is active.
"""

import os

from . import _fallback

try:
    if os.environ.get("SEIFERT_WRT_PURE"):
        raise ImportError("pure-Python kernels requested")
    from . import _gmp as compiled
except ImportError:
    compiled = None

if compiled is not None:
    gauss_moments = compiled.gauss_moments
    BACKEND = "gmp"
else:
    gauss_moments = _fallback.gauss_moments
    BACKEND = "python"

__all__ = ["gauss_moments", "BACKEND", "compiled"]
