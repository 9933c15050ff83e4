"""Secrecy-rate frontiers over a dummy-randomness budget.

For a channel pair (receiver, eavesdropper) the achievable set of
(randomness budget, confidential rate) pairs is swept on a probability grid
over the auxiliary layers, reduced to a per-budget maximum, and convexified
by two-point time sharing.  Binary-input pairs use the three-parameter
search (cloud prior and the two conditional-input diagonal entries); larger
input alphabets fall back to a guarded full grid over the cloud prior and
the conditional rows.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import _sweep_backend, _sweep_py
from .probability import Dmc, GuardExceeded

FEASIBILITY_TOL = 1e-9


@dataclass(frozen=True)
class GridSpec:
    """Search resolution for frontier sweeps and supporting lines.

    ``prob_step`` is the step for every searched probability parameter;
    ``rd_step``/``rd_max`` control the budget axis (defaults: ``prob_step``
    and a channel-derived cap).  ``mu_*`` parameterize the supporting-line
    slopes kept for dual cross-checks.
    """

    prob_step: float = 0.005
    mu_max: float = 20.0
    mu_step: float = 0.05
    rd_step: float | None = None
    rd_max: float | None = None
    cell_guard: int = 2**22

    def __post_init__(self) -> None:
        if not 0.0 < self.prob_step <= 0.5:
            raise ValueError(f"prob_step must lie in (0, 0.5], got {self.prob_step!r}")
        if self.mu_max < 0.0 or self.mu_step <= 0.0:
            raise ValueError("mu grid must have nonnegative span and positive step")
        if self.rd_step is not None and self.rd_step <= 0.0:
            raise ValueError("rd_step must be positive")
        if self.rd_max is not None and self.rd_max < 0.0:
            raise ValueError("rd_max must be nonnegative")

    def prob_grid(self) -> np.ndarray:
        n = max(1, round(1.0 / self.prob_step))
        return np.linspace(0.0, 1.0, n + 1)

    def mu_values(self) -> np.ndarray:
        count = int(math.floor(self.mu_max / self.mu_step + 1e-9)) + 1
        return np.arange(count) * self.mu_step

    def rd_axis(self, cost_cap: float) -> np.ndarray:
        step = self.prob_step if self.rd_step is None else self.rd_step
        cap = cost_cap if self.rd_max is None else self.rd_max
        count = int(math.ceil(cap / step - 1e-9)) + 1
        return np.arange(count) * step


@dataclass(frozen=True)
class Frontier:
    """Piecewise-linear frontier: max confidential rate per randomness budget.

    ``points`` are (r_d, r_s) pairs in nats with strictly increasing r_d and
    nondecreasing r_s; after the hull step the curve is also concave.
    """

    points: tuple[tuple[float, float], ...]
    provenance: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.points:
            raise ValueError("frontier needs at least one point")
        xs = self.r_d
        if np.any(np.diff(xs) <= 0.0):
            raise ValueError("r_d values must be strictly increasing")

    @property
    def r_d(self) -> np.ndarray:
        return np.array([p[0] for p in self.points])

    @property
    def r_s(self) -> np.ndarray:
        return np.array([p[1] for p in self.points])

    def evaluate(self, r_d) -> np.ndarray | float:
        """Interpolated frontier value, clamped to the end values outside the span."""
        out = np.interp(np.asarray(r_d, dtype=float), self.r_d, self.r_s)
        return float(out) if np.ndim(r_d) == 0 else out

    def write_csv(self, path) -> None:
        """CSV with header ``r_d_nats,r_s_nats`` plus a ``.meta.json`` sidecar."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("r_d_nats,r_s_nats\n")
            for x, y in self.points:
                fh.write(f"{x!r},{y!r}\n")
        with open(f"{path}.meta.json", "w", encoding="utf-8") as fh:
            json.dump(self.provenance, fh, indent=2, sort_keys=True, default=str)
            fh.write("\n")


def _hull_vertices(xs: np.ndarray, ys: np.ndarray) -> list[tuple[float, float]]:
    order = np.argsort(xs, kind="stable")
    stair: list[tuple[float, float]] = []
    best = -math.inf
    for i in order:
        x, y = float(xs[i]), float(ys[i])
        best = max(best, y)
        if stair and stair[-1][0] == x:
            stair[-1] = (x, best)
        else:
            stair.append((x, best))
    hull: list[tuple[float, float]] = []
    for x, y in stair:
        while len(hull) >= 2:
            x0, y0 = hull[-2]
            x1, y1 = hull[-1]
            if (x1 - x0) * (y - y0) - (x - x0) * (y1 - y0) >= 0.0:
                hull.pop()
            else:
                break
        hull.append((x, y))
    return hull


def upper_concave_hull(points) -> Frontier:
    """Concave nondecreasing upper envelope of a point cloud; idempotent.

    Only the envelope vertices are retained (collinear interior points drop
    out), matching what two-point time sharing can achieve.
    """
    pts = [(float(x), float(y)) for x, y in points]
    if not pts:
        raise ValueError("need at least one point")
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    return Frontier(points=tuple(_hull_vertices(xs, ys)),
                    provenance={"kind": "upper_concave_hull", "input_points": len(pts)})


def _simplex_grid(dim: int, k: int) -> np.ndarray:
    """All probability vectors of length ``dim`` with entries in multiples of 1/k."""
    combos = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            combos.append(prefix + [remaining])
            return
        for c in range(remaining, -1, -1):
            rec(prefix + [c], remaining - c, slots - 1)

    rec([], k, dim)
    return np.asarray(combos, dtype=float) / k


def _xlogx(p: np.ndarray) -> np.ndarray:
    safe = np.where(p > 0.0, p, 1.0)
    return p * np.log(safe)


def _general_sweep(w_y: np.ndarray, w_z: np.ndarray, grid: GridSpec, rd_step: float,
                   n_rd: int, v_equals_x: bool):
    """Full-grid sweep over the cloud prior and conditional rows (|V| = |X|)."""
    mx = w_y.shape[0]
    k = max(1, round(1.0 / grid.prob_step))
    pv_grid = _simplex_grid(mx, k)
    if v_equals_x:
        n_cells = len(pv_grid)
    else:
        rows = _simplex_grid(mx, k)
        n_cells = len(pv_grid) * len(rows) ** mx
    if n_cells > grid.cell_guard:
        raise GuardExceeded(
            f"general-alphabet sweep needs {n_cells} cells, above guard {grid.cell_guard}; "
            "coarsen prob_step"
        )

    hz_rows = -_xlogx(w_z).sum(axis=1)
    ds = np.full(n_rd, -np.inf)
    sim = np.full(n_rd, -np.inf)

    def eval_chunk(pv: np.ndarray, pxv: np.ndarray) -> None:
        # pv: (C, mv); pxv: (C, mv, mx)
        pyv = pxv @ w_y
        pzv = pxv @ w_z
        py = np.einsum("cv,cvy->cy", pv, pyv)
        pz = np.einsum("cv,cvz->cz", pv, pzv)
        hy = -_xlogx(py).sum(axis=1)
        hz = -_xlogx(pz).sum(axis=1)
        ivy = hy + np.einsum("cv,cvy->c", pv, _xlogx(pyv))
        ivz = hz + np.einsum("cv,cvz->c", pv, _xlogx(pzv))
        px = np.einsum("cv,cvx->cx", pv, pxv)
        ixz = hz - px @ hz_rows
        hxv = -np.einsum("cv,cvx->c", pv, _xlogx(pxv))
        rs = ivy - ivz
        _sweep_py.fold_max(ds, ixz, rs, rd_step)
        _sweep_py.fold_max(sim, ivz + hxv, rs, rd_step)

    if v_equals_x:
        eye = np.broadcast_to(np.eye(mx), (len(pv_grid), mx, mx))
        eval_chunk(pv_grid, np.ascontiguousarray(eye))
        return ds, sim

    chunk = max(1, 2**16 // (mx * mx))
    buf_pv, buf_rows = [], []
    for pv in pv_grid:
        for combo in itertools.product(range(len(rows)), repeat=mx):
            buf_pv.append(pv)
            buf_rows.append(rows[list(combo)])
            if len(buf_pv) >= chunk:
                eval_chunk(np.asarray(buf_pv), np.asarray(buf_rows))
                buf_pv, buf_rows = [], []
    if buf_pv:
        eval_chunk(np.asarray(buf_pv), np.asarray(buf_rows))
    return ds, sim


def _cost_cap(w_y: Dmc, w_z: Dmc) -> float:
    mx, mz = w_y.input_size, w_z.output_size
    return min(math.log(mx), math.log(mz)) + math.log(mx)


def _sweep_frontier(w_y: Dmc, w_z: Dmc, grid: GridSpec, mode: str, v_equals_x: bool,
                    hull: bool, backend: str | None = None) -> Frontier:
    if w_y.input_size != w_z.input_size:
        raise ValueError("the two channels must share the input alphabet")
    rd_grid = grid.rd_axis(_cost_cap(w_y, w_z))
    rd_step = float(rd_grid[1] - rd_grid[0]) if rd_grid.size > 1 else 1.0
    p_grid = grid.prob_grid()
    if w_y.input_size == 2:
        a_grid = np.array([1.0]) if v_equals_x else p_grid
        ds, sim = _sweep_backend.sweep_binary(
            w_y.matrix, w_z.matrix, p_grid, a_grid, a_grid, rd_step, rd_grid.size,
            backend=backend,
        )
        used_backend = backend or _sweep_backend.ACTIVE_BACKEND
    else:
        ds, sim = _general_sweep(w_y.matrix, w_z.matrix, grid, rd_step, rd_grid.size,
                                 v_equals_x)
        used_backend = "python-general"
    raw = ds if mode == "ds" else sim
    curve = np.maximum.accumulate(raw)
    if hull:
        vertices = _hull_vertices(rd_grid, curve)
        vx = np.array([v[0] for v in vertices])
        vy = np.array([v[1] for v in vertices])
        curve = np.interp(rd_grid, vx, vy)
    provenance = {
        "mode": mode,
        "v_equals_x": v_equals_x,
        "hull": hull,
        "prob_step": float(p_grid[1] - p_grid[0]) if p_grid.size > 1 else 1.0,
        "rd_step": rd_step,
        "rd_max": float(rd_grid[-1]),
        "mu_max": grid.mu_max,
        "mu_step": grid.mu_step,
        "bin_fuzz_steps": _sweep_py.BIN_FUZZ,
        "feasibility_tol": FEASIBILITY_TOL,
        "backend": used_backend,
        "input_size": w_y.input_size,
        "seed": None,
    }
    points = tuple((float(x), float(y)) for x, y in zip(rd_grid, curve))
    return Frontier(points=points, provenance=provenance)


def secrecy_frontier(w_y: Dmc, w_z: Dmc, grid: GridSpec | None = None, *,
                     v_equals_x: bool = False, hull: bool = True,
                     backend: str | None = None) -> Frontier:
    """Max confidential rate per budget, charging the channel-input cost.

    The budget constraint per cell is the eavesdropper information of the
    channel input; ``v_equals_x=True`` restricts the search to chains with no
    prefix layer.  ``hull=False`` skips time sharing and returns the raw
    (running-maximum) sweep curve.
    """
    return _sweep_frontier(w_y, w_z, grid or GridSpec(), "ds", v_equals_x, hull, backend)


def secrecy_frontier_sim(w_y: Dmc, w_z: Dmc, grid: GridSpec | None = None, *,
                         v_equals_x: bool = False, hull: bool = True,
                         backend: str | None = None) -> Frontier:
    """Inner-bound frontier when the prefix channel is synthesized from randomness.

    Same sweep as :func:`secrecy_frontier`, but each cell's budget must cover
    the cloud-layer information plus the conditional input entropy, the price
    of simulating the prefix channel instead of coding through it.
    """
    return _sweep_frontier(w_y, w_z, grid or GridSpec(), "sim", v_equals_x, hull, backend)


def secrecy_capacity(w_y: Dmc, w_z: Dmc, grid: GridSpec | None = None) -> float:
    """Best achievable confidential rate with an unconstrained budget (>= 0)."""
    frontier = _sweep_frontier(w_y, w_z, grid or GridSpec(), "ds", False, False)
    return max(0.0, float(frontier.r_s[-1]))


def supporting_line_value(w_y: Dmc, w_z: Dmc, mu: float, r_d: float,
                          grid: GridSpec | None = None) -> float:
    """Max over cells of rs - mu * (cost - r_d): one supporting-line evaluation.

    Minimizing this over a slope grid upper-bounds the convexified frontier
    at ``r_d``; used as an independent cross-check of the primal sweep.
    """
    if mu < 0.0:
        raise ValueError("supporting-line slope must be nonnegative")
    grid = grid or GridSpec()
    if w_y.input_size != 2:
        raise ValueError("supporting-line evaluation is provided for binary inputs")
    p = grid.prob_grid()
    if (p.size) ** 3 > grid.cell_guard:
        raise GuardExceeded("supporting-line cell grid exceeds guard; coarsen prob_step")
    cells = _sweep_py.binary_cells(w_y.matrix, w_z.matrix, p, p, p)
    return float(np.max(cells["rs"] - mu * (cells["rd_ds"] - r_d)))
