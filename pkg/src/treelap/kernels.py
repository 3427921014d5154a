"""Kernel backend selection.

The hot inner loops (shooting recurrence, backward-Euler tree elimination,
fixed-point sweeps) exist twice: a Cython extension ``treelap._kernels`` and
a NumPy fallback ``treelap._kernels_py``.  The compiled module is preferred
when importable; set ``TREELAP_PURE_PYTHON=1`` to force the fallback (used by
the equivalence tests and the benchmark).

``impl`` is the selected module; ``BACKEND`` names it ("cython"/"python").
"""

import os

from . import _kernels_py

if os.environ.get("TREELAP_PURE_PYTHON", "").strip() not in ("", "0"):
    impl = _kernels_py
else:
    try:
        from . import _kernels as impl  # type: ignore[no-redef]
    except ImportError:
        impl = _kernels_py

BACKEND: str = impl.BACKEND_NAME
