"""Select the predicate backend at import time.

Set ``DELREF_PURE_PYTHON=1`` to force the pure-Python kernels.
"""

import os
import warnings

if os.environ.get("DELREF_PURE_PYTHON", "") not in ("", "0"):
    from ._pykernels import circumcenter, diametral, incircle, orient2d
    BACKEND = "python"
else:
    try:
        from ._ckernels import circumcenter, diametral, incircle, orient2d
        BACKEND = "cython"
    except ImportError:
        warnings.warn("compiled kernels unavailable; using pure-Python predicates")
        from ._pykernels import circumcenter, diametral, incircle, orient2d
        BACKEND = "python"

__all__ = ["BACKEND", "circumcenter", "diametral", "incircle", "orient2d"]
