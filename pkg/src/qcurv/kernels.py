"""Backend selection for the hot kernels.

The compiled extension is preferred; set ``QCURV_PURE=1`` to force the
numpy fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"
trig_eval = _kernels_py.trig_eval
bary_diffmat = _kernels_py.bary_diffmat

if os.environ.get("QCURV_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        pass
    else:
        BACKEND = "cython"
        trig_eval = _compiled.trig_eval
        bary_diffmat = _compiled.bary_diffmat

__all__ = ["BACKEND", "trig_eval", "bary_diffmat"]
