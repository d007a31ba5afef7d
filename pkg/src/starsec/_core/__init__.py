"""Kernel backend selection.

The compiled extension is preferred when present; set STARSEC_PURE_PYTHON=1
to force the fallback (used by the equivalence tests and the kernel
benchmark).
"""

import os

if os.environ.get("STARSEC_PURE_PYTHON"):
    from . import pure as _impl
    BACKEND = "pure"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "compiled"
    except ImportError:
        from . import pure as _impl
        BACKEND = "pure"

solve_pair_disk_qp = _impl.solve_pair_disk_qp
solve_pair_disk_qp_complex = _impl.solve_pair_disk_qp_complex

__all__ = ["BACKEND", "solve_pair_disk_qp", "solve_pair_disk_qp_complex"]
