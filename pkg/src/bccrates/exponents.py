"""Exponent functions and finite-blocklength bounds.

The core objects are the cumulant-like exponents whose slope at zero equals a
(conditional) mutual information.  They control the exponential decay of the
random-coding resolvability and leakage bounds, and the threshold-decoder
error bounds for the three-layer broadcast code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Callable

import numpy as np

from .chain import BccChain, informations
from .probability import Dmc, GuardExceeded, Pmf

TAIL_ENUMERATION_GUARD = 2**22
SLOPE_STEP = 1e-4


def _check_theta(theta: float, name: str = "theta") -> None:
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {theta!r}")


def _exponent_raw(theta: float, channel: np.ndarray, cond_input: np.ndarray,
                  prior: np.ndarray) -> float:
    """Unchecked evaluation of the layered exponent; valid for small |theta| too."""
    out_given_v = cond_input @ channel  # rows: output law given each layer symbol
    inner = cond_input @ np.power(channel, 1.0 + theta)
    support = inner > 0.0
    if np.any(support & (out_given_v == 0.0)):
        v, z = np.argwhere(support & (out_given_v == 0.0))[0]
        raise ValueError(
            f"support violation: conditional output mass is zero at (v={v}, z={z}) "
            "while the tilted numerator is positive"
        )
    tilt = np.zeros_like(inner)
    tilt[support] = inner[support] * np.power(out_given_v[support], -theta)
    return float(np.log(np.dot(prior, tilt.sum(axis=1))))


def resolvability_exponent(theta: float, channel: Dmc, input_dist: Pmf) -> float:
    """log sum_z (sum_x P(x) W(z|x)^{1+theta}) P_Z(z)^{-theta}, in nats.

    Nonnegative, convex and nondecreasing on [0, 1]; its slope at zero is
    I(X;Z).  ``theta=0`` returns exactly 0.
    """
    _check_theta(theta)
    if input_dist.size != channel.input_size:
        raise ValueError("input distribution does not match channel input size")
    if theta == 0.0:
        return 0.0
    return _exponent_raw(theta, channel.matrix, input_dist.probs[np.newaxis, :], np.ones(1))


def superposition_exponent(theta: float, channel: Dmc, conditional_input: Dmc,
                           prior: Pmf) -> float:
    """Layered variant averaging over the cloud-center variable; slope I(X;Z|V).

    Reduces to :func:`resolvability_exponent` for a single-symbol prior and
    vanishes identically when the conditional layer is deterministic
    (satellite equals cloud center).
    """
    _check_theta(theta)
    if prior.size != conditional_input.input_size:
        raise ValueError("prior does not match conditional layer input size")
    if conditional_input.output_size != channel.input_size:
        raise ValueError("conditional layer does not match channel input size")
    if theta == 0.0:
        return 0.0
    return _exponent_raw(theta, channel.matrix, conditional_input.matrix, prior.probs)


def resolvability_exponent_slope(channel: Dmc, input_dist: Pmf,
                                 step: float = SLOPE_STEP) -> float:
    """Central finite difference of the exponent at zero; equals I(X;Z) to O(step^2)."""
    layer = input_dist.probs[np.newaxis, :]
    one = np.ones(1)
    return (_exponent_raw(step, channel.matrix, layer, one)
            - _exponent_raw(-step, channel.matrix, layer, one)) / (2.0 * step)


def superposition_exponent_slope(channel: Dmc, conditional_input: Dmc, prior: Pmf,
                                 step: float = SLOPE_STEP) -> float:
    """Central finite difference at zero for the layered exponent; equals I(X;Z|V)."""
    return (_exponent_raw(step, channel.matrix, conditional_input.matrix, prior.probs)
            - _exponent_raw(-step, channel.matrix, conditional_input.matrix, prior.probs)
            ) / (2.0 * step)


@dataclass(frozen=True)
class BoundReport:
    """Two-term exponential bound evaluated at a fixed parameter point."""

    term1: float
    term2: float
    n: int
    sizes: tuple[int, ...]
    theta: float
    theta_prime: float | None = None

    def __post_init__(self) -> None:
        if self.term1 < 0.0 or self.term2 < 0.0:
            raise ValueError("bound terms must be nonnegative")

    @property
    def total(self) -> float:
        return self.term1 + self.term2

    def as_lines(self) -> list[str]:
        rows = [
            ("n", self.n),
            ("sizes", ",".join(str(s) for s in self.sizes)),
            ("theta", self.theta),
            ("theta_prime", self.theta_prime),
            ("term1", self.term1),
            ("term2", self.term2),
            ("total", self.total),
        ]
        return [f"{k}={v!r}" for k, v in rows]


def _bound_term(n: int, size: int, theta: float, exponent: float) -> float:
    # e^{n*exponent} / (theta * size^theta), assembled in log space
    return math.exp(n * exponent - theta * math.log(size) - math.log(theta))


def resolvability_bound(n: int, codebook_size: int, theta: float, channel: Dmc,
                        input_dist: Pmf) -> BoundReport:
    """Mean divergence bound for a single-layer random codebook of the given size."""
    if n < 1 or codebook_size < 1:
        raise ValueError("blocklength and codebook size must be at least 1")
    if not 0.0 < theta <= 1.0:
        raise ValueError(f"theta must lie in (0, 1], got {theta!r}")
    value = resolvability_exponent(theta, channel, input_dist)
    return BoundReport(
        term1=_bound_term(n, codebook_size, theta, value),
        term2=0.0,
        n=n,
        sizes=(codebook_size,),
        theta=theta,
    )


def superposition_resolvability_bound(n: int, m1: int, m2: int, theta: float,
                                      theta_prime: float, channel: Dmc,
                                      conditional_input: Dmc, prior: Pmf) -> BoundReport:
    """Mean divergence bound for the two-layer (cloud/satellite) codebook.

    The first term charges the satellite layer (m1 words per cloud), the
    second the cloud layer (m2 centers) through the cascaded channel.
    """
    if n < 1 or m1 < 1 or m2 < 1:
        raise ValueError("blocklength and layer sizes must be at least 1")
    for name, value in (("theta", theta), ("theta_prime", theta_prime)):
        if not 0.0 < value <= 1.0:
            raise ValueError(f"{name} must lie in (0, 1], got {value!r}")
    e1 = superposition_exponent(theta, channel, conditional_input, prior)
    cascade = conditional_input.compose(channel)
    e2 = resolvability_exponent(theta_prime, cascade, prior)
    return BoundReport(
        term1=_bound_term(n, m1, theta, e1),
        term2=_bound_term(n, m2, theta_prime, e2),
        n=n,
        sizes=(m1, m2),
        theta=theta,
        theta_prime=theta_prime,
    )


def leakage_bound(n: int, dummy_size: int, private_size: int, theta: float,
                  theta_prime: float, chain: BccChain) -> BoundReport:
    """Bound on the mean confidential-message leakage of the three-layer code.

    ``dummy_size`` and ``private_size`` are total (block) alphabet sizes of
    the dummy randomness and the private message.
    """
    if n < 1 or dummy_size < 1 or private_size < 1:
        raise ValueError("blocklength and sizes must be at least 1")
    for name, value in (("theta", theta), ("theta_prime", theta_prime)):
        if not 0.0 < value <= 1.0:
            raise ValueError(f"{name} must lie in (0, 1], got {value!r}")
    e1 = superposition_exponent(theta, chain.w_z, chain.p_x_given_v, chain.p_v)
    e2 = superposition_exponent(theta_prime, chain.p_z_given_v, chain.p_v_given_u, chain.p_u)
    return BoundReport(
        term1=_bound_term(n, dummy_size, theta, e1),
        term2=_bound_term(n, private_size, theta_prime, e2),
        n=n,
        sizes=(dummy_size, private_size),
        theta=theta,
        theta_prime=theta_prime,
    )


def theta_grid_default() -> np.ndarray:
    """Default search grid {0.01, 0.02, ..., 1.0}."""
    return np.round(np.arange(1, 101) * 0.01, 10)


@dataclass(frozen=True)
class ThetaSearch:
    """Grid argmin of a bound, with an optional exponential-decay certificate."""

    theta: float
    bound: float
    margin: float | None = None
    certified: bool | None = None


def optimize_theta(bound_fn: Callable[[float], float], theta_grid=None,
                   margin_fn: Callable[[float], float] | None = None) -> ThetaSearch:
    """Minimize ``bound_fn`` over a theta grid (first index wins ties).

    ``margin_fn(theta)`` should return ``exponent(theta)/theta - rate``; the
    winner is certified when that margin is nonpositive, meaning the bound
    decays exponentially in the blocklength at the winning theta.
    """
    grid = theta_grid_default() if theta_grid is None else np.asarray(theta_grid, dtype=float)
    if grid.size == 0:
        raise ValueError("theta grid must be non-empty")
    values = [bound_fn(float(t)) for t in grid]
    best = int(np.argmin(values))
    theta = float(grid[best])
    margin = None if margin_fn is None else float(margin_fn(theta))
    certified = None if margin is None else bool(margin <= 1e-12)
    return ThetaSearch(theta=theta, bound=float(values[best]), margin=margin,
                       certified=certified)


def minimize_superposition_bound(n: int, m1: int, m2: int, channel: Dmc,
                                 conditional_input: Dmc, prior: Pmf,
                                 theta_grid=None) -> BoundReport:
    """Bound with each term minimized over its own theta (terms are separable)."""
    grid = theta_grid_default() if theta_grid is None else np.asarray(theta_grid, dtype=float)
    cascade = conditional_input.compose(channel)
    t1 = optimize_theta(
        lambda t: _bound_term(n, m1, t, superposition_exponent(t, channel, conditional_input, prior)),
        grid,
    )
    t2 = optimize_theta(
        lambda t: _bound_term(n, m2, t, resolvability_exponent(t, cascade, prior)),
        grid,
    )
    return BoundReport(term1=t1.bound, term2=t2.bound, n=n, sizes=(m1, m2),
                       theta=t1.theta, theta_prime=t2.theta)


def minimize_leakage_bound(n: int, dummy_size: int, private_size: int, chain: BccChain,
                           theta_grid=None) -> BoundReport:
    grid = theta_grid_default() if theta_grid is None else np.asarray(theta_grid, dtype=float)
    t1 = optimize_theta(
        lambda t: _bound_term(
            n, dummy_size, t,
            superposition_exponent(t, chain.w_z, chain.p_x_given_v, chain.p_v)),
        grid,
    )
    t2 = optimize_theta(
        lambda t: _bound_term(
            n, private_size, t,
            superposition_exponent(t, chain.p_z_given_v, chain.p_v_given_u, chain.p_u)),
        grid,
    )
    return BoundReport(term1=t1.bound, term2=t2.bound, n=n,
                       sizes=(dummy_size, private_size),
                       theta=t1.theta, theta_prime=t2.theta)


def decoding_thresholds(chain: BccChain, n: int, delta: float = 0.05) -> tuple[float, float, float]:
    """Block thresholds n*(I - delta) for the three decoder tests.

    Ordered as (common-at-eavesdropper, layer-at-receiver, base-at-receiver).
    """
    info = informations(chain)
    return (
        n * (info.i_uz - delta),
        n * (info.i_vy_given_u - delta),
        n * (info.i_vy - delta),
    )


def _support_atoms(weight: np.ndarray, numer: np.ndarray, denom: np.ndarray):
    """Per-letter (probability, log-ratio) atoms on the support of ``weight``."""
    mask = weight > 0.0
    probs = weight[mask]
    dens = np.log(numer[mask]) - np.log(denom[mask])
    return probs, dens


def _wilson_interval(successes: int, trials: int, z: float = 1.959963984540054):
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return center - half, center + half


def iid_sum_tail(probs: np.ndarray, values: np.ndarray, n: int, threshold: float, *,
                 alphabet_size: int | None = None, allow_mc: bool = False,
                 mc_trials: int = 200_000, seed: int = 0):
    """P(sum of n i.i.d. atoms < threshold), exactly when the guard permits.

    Returns ``(tail, method, ci)`` where ``ci`` is a 95% Wilson interval for
    the Monte Carlo path and ``None`` for the exact path.
    """
    base = len(probs) if alphabet_size is None else alphabet_size
    if base**n <= TAIL_ENUMERATION_GUARD:
        prob_n = reduce(np.kron, [np.asarray(probs)] * n)
        sum_n = reduce(lambda acc, v: (acc[:, None] + v[None, :]).ravel(),
                       [np.asarray(values)] * n)
        return float(prob_n[sum_n < threshold].sum()), "exact", None
    if not allow_mc:
        raise GuardExceeded(
            f"tail enumeration {base}^{n} exceeds guard {TAIL_ENUMERATION_GUARD}; "
            "enable the Monte Carlo fallback"
        )
    rng = np.random.default_rng(np.random.SeedSequence((seed, n, len(probs))))
    hits = 0
    chunk = max(1, 2**20 // n)
    done = 0
    vals = np.asarray(values)
    while done < mc_trials:
        block = min(chunk, mc_trials - done)
        draws = rng.choice(len(probs), size=(block, n), p=np.asarray(probs))
        sums = vals[draws].sum(axis=1)
        hits += int(np.count_nonzero(sums < threshold))
        done += block
    return hits / mc_trials, "monte_carlo", _wilson_interval(hits, mc_trials)


@dataclass(frozen=True)
class DecoderBoundReport:
    """Union-bound decomposition of the receiver and eavesdropper error bounds."""

    tail_common: float      # mass outside the common-layer test at the eavesdropper
    tail_layer: float       # mass outside the satellite-vs-cloud test at the receiver
    tail_base: float        # mass outside the satellite-vs-prior test at the receiver
    miss_layer: float       # |L||S| e^{-alpha1}
    miss_base: float        # |K||L||S| e^{-alpha2}
    miss_common: float      # |K| e^{-alpha0}
    thresholds: tuple[float, float, float]
    sizes: tuple[int, int, int]
    n: int
    method: str
    ci: dict | None = None

    @property
    def bob_bound(self) -> float:
        return self.tail_layer + self.tail_base + self.miss_layer + self.miss_base

    @property
    def eve_bound(self) -> float:
        return self.tail_common + self.miss_common

    @property
    def bob_bound_clamped(self) -> float:
        return min(1.0, self.bob_bound)

    @property
    def eve_bound_clamped(self) -> float:
        return min(1.0, self.eve_bound)

    def as_lines(self) -> list[str]:
        rows = [
            ("n", self.n),
            ("sizes", ",".join(str(s) for s in self.sizes)),
            ("thresholds", ",".join(repr(t) for t in self.thresholds)),
            ("tail_common", self.tail_common),
            ("tail_layer", self.tail_layer),
            ("tail_base", self.tail_base),
            ("miss_common", self.miss_common),
            ("miss_layer", self.miss_layer),
            ("miss_base", self.miss_base),
            ("bob_bound", self.bob_bound),
            ("eve_bound", self.eve_bound),
            ("bob_bound_clamped", self.bob_bound_clamped),
            ("eve_bound_clamped", self.eve_bound_clamped),
            ("method", self.method),
        ]
        return [f"{k}={v!r}" for k, v in rows]


def decoder_error_bounds(n: int, chain: BccChain, sizes: tuple[int, int, int],
                         alphas: tuple[float, float, float], *, allow_mc: bool = False,
                         mc_trials: int = 200_000, seed: int = 0) -> DecoderBoundReport:
    """Random-coding error bounds for the three-layer threshold decoders.

    ``sizes`` are the (common, private, confidential) message counts and
    ``alphas`` the block thresholds of the three likelihood-ratio tests.
    Tail probabilities are over n i.i.d. letters of the chain's joint law,
    enumerated exactly up to the guard and by seeded Monte Carlo past it.
    """
    if n < 1:
        raise ValueError("blocklength must be at least 1")
    size_k, size_l, size_s = sizes
    if min(sizes) < 1:
        raise ValueError("message counts must be at least 1")
    alpha0, alpha1, alpha2 = (float(a) for a in alphas)
    mu, mv, mx, my, mz = chain.sizes

    pu = chain.p_u.probs
    pvu = chain.p_v_given_u.matrix
    pyv = chain.p_y_given_v.matrix
    pyu = chain.p_y_given_u.matrix
    pzu = chain.p_z_given_u.matrix
    py = chain.p_y.probs
    pz = chain.p_z.probs

    # (u, v, y) atoms for the two receiver tests
    p_uvy = pu[:, None, None] * pvu[:, :, None] * pyv[None, :, :]
    dens_layer = np.broadcast_to(pyv[None, :, :], p_uvy.shape), \
        np.broadcast_to(pyu[:, None, :], p_uvy.shape)
    probs1, vals1 = _support_atoms(p_uvy.ravel(),
                                   dens_layer[0].ravel(), dens_layer[1].ravel())
    # (v, y) atoms
    p_vy = chain.p_v.probs[:, None] * pyv
    probs2, vals2 = _support_atoms(p_vy.ravel(), pyv.ravel(),
                                   np.broadcast_to(py[None, :], pyv.shape).ravel())
    # (u, z) atoms
    p_uz = pu[:, None] * pzu
    probs0, vals0 = _support_atoms(p_uz.ravel(), pzu.ravel(),
                                   np.broadcast_to(pz[None, :], pzu.shape).ravel())

    tails = {}
    methods = set()
    cis = {}
    specs = {
        "tail_layer": (probs1, vals1, alpha1, mu * mv * my),
        "tail_base": (probs2, vals2, alpha2, mv * my),
        "tail_common": (probs0, vals0, alpha0, mu * mz),
    }
    for name, (probs, vals, alpha, base) in specs.items():
        tail, method, ci = iid_sum_tail(probs, vals, n, alpha, alphabet_size=base,
                                        allow_mc=allow_mc, mc_trials=mc_trials, seed=seed)
        tails[name] = tail
        methods.add(method)
        if ci is not None:
            cis[name] = ci

    return DecoderBoundReport(
        tail_common=tails["tail_common"],
        tail_layer=tails["tail_layer"],
        tail_base=tails["tail_base"],
        miss_layer=size_l * size_s * math.exp(-alpha1),
        miss_base=size_k * size_l * size_s * math.exp(-alpha2),
        miss_common=size_k * math.exp(-alpha0),
        thresholds=(alpha0, alpha1, alpha2),
        sizes=(size_k, size_l, size_s),
        n=n,
        method="exact" if methods == {"exact"} else "monte_carlo",
        ci=cis or None,
    )
