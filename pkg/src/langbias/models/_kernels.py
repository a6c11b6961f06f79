"""Backend selection for the SVM training kernel.

The compiled extension is used when it imports; ``LANGBIAS_PURE_PYTHON=1``
forces the pure-Python implementation.
"""

import os

from . import _dual_cd_py

KERNELS = {"python": _dual_cd_py.dual_cd_epoch}

try:
    from . import _dual_cd
except ImportError:  # extension not built
    pass
else:
    KERNELS["cython"] = _dual_cd.dual_cd_epoch

if os.environ.get("LANGBIAS_PURE_PYTHON", "") not in ("", "0"):
    BACKEND = "python"
else:
    BACKEND = "cython" if "cython" in KERNELS else "python"


def get_kernel(name: str | None = None):
    name = name or BACKEND
    try:
        return name, KERNELS[name]
    except KeyError:
        raise ValueError(f"SVM kernel backend {name!r} unavailable; have {sorted(KERNELS)}") from None
