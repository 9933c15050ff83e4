"""Benchmark: compiled frontier-sweep kernel vs the NumPy fallback.

Run from the repository root after an editable install:

    python3 benchmarks/bench_sweep.py

Both backends are exercised on the same grids; results are checked for
agreement before timings are reported.
"""

import time

import numpy as np

from bccrates import GridSpec, secrecy_frontier
from bccrates._sweep_backend import has_compiled_backend
from bccrates.channels import bec, bsc


def time_backend(w_y, w_z, grid, backend):
    start = time.perf_counter()
    front = secrecy_frontier(w_y, w_z, grid, backend=backend)
    return time.perf_counter() - start, front


def main():
    pairs = [
        ("BSC(0.1)/BSC(0.2)", bsc(0.1), bsc(0.2)),
        ("BSC(0.11)/BEC(0.45)", bsc(0.11), bec(0.45)),
    ]
    steps = [0.02, 0.01, 0.005, 0.002]
    print(f"{'pair':22s} {'step':>6s} {'cells':>12s} {'python':>9s} "
          f"{'compiled':>9s} {'speedup':>8s}")
    for name, w_y, w_z in pairs:
        for step in steps:
            grid = GridSpec(prob_step=step)
            cells = len(grid.prob_grid()) ** 3
            t_py, f_py = time_backend(w_y, w_z, grid, "python")
            if has_compiled_backend():
                t_c, f_c = time_backend(w_y, w_z, grid, "compiled")
                np.testing.assert_allclose(f_c.r_s, f_py.r_s, rtol=0, atol=1e-12)
                print(f"{name:22s} {step:6.3f} {cells:12d} {t_py:8.2f}s "
                      f"{t_c:8.2f}s {t_py / t_c:7.1f}x")
            else:
                print(f"{name:22s} {step:6.3f} {cells:12d} {t_py:8.2f}s "
                      f"{'n/a':>9s} {'n/a':>8s}")


if __name__ == "__main__":
    main()
