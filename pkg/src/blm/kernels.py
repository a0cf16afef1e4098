"""Hot kernels, compiled when the extension is built, NumPy otherwise.

Set ``BLM_PURE_PYTHON=1`` to force the NumPy fallback. ``BACKEND`` names the
implementation in use.
"""

import os

from . import _pykernels as python

compiled = None
if os.environ.get("BLM_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as compiled
    except ImportError:  # extension not built
        compiled = None

_impl = compiled if compiled is not None else python
BACKEND = "cython" if compiled is not None else "python"

expoly_eval = _impl.expoly_eval
expoly_isf = _impl.expoly_isf
tp2_scan = _impl.tp2_scan

__all__ = ["BACKEND", "compiled", "python", "expoly_eval", "expoly_isf", "tp2_scan"]
