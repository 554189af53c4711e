"""Hot numerical kernels with a compiled (Cython) and a pure Python backend.

The compiled extension is used when it imports; set ``FRACHELM_PURE_PYTHON=1``
to force the fallback. ``BACKEND`` names the active one.

Kernels
-------
series_double
    Compensated Mittag-Leffler power series in double precision.
series_dd
    The same series with double-double terms and accumulator.
l1_convolve
    Discrete convolution behind the L1 Caputo scheme.
modal_sum
    Fixed-order compensated sum of profile x eigenfunction products.
"""

from __future__ import annotations

import os

from . import _fallback

if os.environ.get("FRACHELM_PURE_PYTHON", "") not in ("", "0"):
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl

        BACKEND = "compiled"
    except ImportError:  # pragma: no cover - depends on the build
        _impl = _fallback
        BACKEND = "python"

series_double = _impl.series_double
series_dd = _impl.series_dd
l1_convolve = _impl.l1_convolve
modal_sum = _impl.modal_sum

__all__ = ["BACKEND", "series_double", "series_dd", "l1_convolve", "modal_sum"]
