"""Pick the compiled counting kernels when available, else the numpy ones.

Set ``JUMPACT_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _core_py

BACKEND = "python"
kernel_values = _core_py.kernel_values
smoothed_counts = _core_py.smoothed_counts
threshold_counts = _core_py.threshold_counts

if not os.environ.get("JUMPACT_PURE_PYTHON"):
    try:
        from . import _core
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        kernel_values = _core.kernel_values
        smoothed_counts = _core.smoothed_counts
        threshold_counts = _core.threshold_counts
