"""Pixel kernel backend, chosen once at import.

The compiled ``_speedups`` extension is used when it was built; otherwise the
numpy implementations in ``_pure`` take over.  Setting ``BRAILLETEXT_PURE=1``
forces the fallback.
"""

import os

from . import _pure

BACKENDS = {"pure": _pure}

try:
    from . import _speedups
except ImportError:  # extension not built
    _speedups = None
else:
    BACKENDS["cython"] = _speedups

if _speedups is not None and os.environ.get("BRAILLETEXT_PURE", "") in ("", "0"):
    BACKEND = "cython"
else:
    BACKEND = "pure"

_impl = BACKENDS[BACKEND]
median_filter = _impl.median_filter
dilate = _impl.dilate
erode = _impl.erode
label8 = _impl.label8
