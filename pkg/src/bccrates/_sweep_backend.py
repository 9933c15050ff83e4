"""Backend selection for the frontier sweep kernel.

The compiled extension is preferred when importable; setting the environment
variable ``BCCRATES_PURE`` to a non-empty value (other than ``0``) forces the
NumPy fallback.  Both backends are exposed for tests and benchmarks.
"""

from __future__ import annotations

import os

import numpy as np

from . import _sweep_py

try:
    from . import _sweep as _compiled
except ImportError:
    _compiled = None

_FORCED_PURE = os.environ.get("BCCRATES_PURE", "") not in ("", "0")
ACTIVE_BACKEND = "python" if (_compiled is None or _FORCED_PURE) else "compiled"


def sweep_binary(w_y: np.ndarray, w_z: np.ndarray, p_grid: np.ndarray,
                 a_grid: np.ndarray, b_grid: np.ndarray, rd_step: float,
                 n_rd: int, *, backend: str | None = None):
    """Run the binary 3-parameter sweep on the selected backend."""
    tables = _sweep_py.prepare_tables(w_y, w_z, a_grid, b_grid)
    which = ACTIVE_BACKEND if backend is None else backend
    if which == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled sweep backend is not available")
        return _compiled.sweep_binary(tables, a_grid, b_grid, p_grid, rd_step, n_rd)
    if which == "python":
        return _sweep_py.sweep_binary(tables, a_grid, b_grid, p_grid, rd_step, n_rd)
    raise ValueError(f"unknown backend {which!r}")


def has_compiled_backend() -> bool:
    return _compiled is not None
