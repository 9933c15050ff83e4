"""Acceptance suite: every criterion at its stated tolerance.

Each test prints one ``[acceptance] criterion N PASS/FAIL`` line (run with
``pytest -s`` to see them on success).  All rates are in nats.
"""

import math
import time

import numpy as np

from bccrates import (
    BccChain,
    GridSpec,
    Pmf,
    check_inner_bound,
    generate_bcc_codebook,
    informations,
    is_more_capable,
    mc_resolvability,
    minimize_leakage_bound,
    minimize_superposition_bound,
    exact_leakage,
    mutual_information,
    product_extend,
    resolvability_exponent,
    resolvability_exponent_slope,
    secrecy_capacity,
    secrecy_frontier,
    secrecy_frontier_sim,
    simulate_bcc,
    split_rates,
    superposition_exponent,
    superposition_exponent_slope,
    trial_seed,
)
from bccrates.channels import bec, bsc

from helpers import random_chain, random_more_capable_pair
from test_regions import sample_member_quad

LN2 = math.log(2.0)


def h(p):
    return -p * math.log(p) - (1 - p) * math.log(1 - p) if 0 < p < 1 else 0.0


def report(num: int, ok: bool, detail: str) -> None:
    print(f"[acceptance] criterion {num} {'PASS' if ok else 'FAIL'} - {detail}")


def test_criterion_1_bsc_pair_frontier():
    """Degraded symmetric pair at grid step 0.002: plateau value and onset
    from the closed forms, positive rate below the onset, under 60 s."""
    grid = GridSpec(prob_step=0.002)
    target_rs = h(0.2) - h(0.1)            # 0.175319...
    onset = LN2 - h(0.2)                   # 0.192745...
    start = time.perf_counter()
    front = secrecy_frontier(bsc(0.1), bsc(0.2), grid)
    raw = secrecy_frontier(bsc(0.1), bsc(0.2), grid, hull=False)
    elapsed = time.perf_counter() - start

    max_rs = float(front.r_s.max())
    plateau = front.r_s[front.r_d >= onset]
    plateau_ok = bool(np.all(np.abs(plateau - target_rs) <= 2e-3))
    below = raw.r_d < onset
    positive_below = float(raw.r_s[below].max())

    ok = (abs(max_rs - target_rs) <= 2e-3 and plateau_ok
          and positive_below > 0.0 and elapsed < 60.0)
    report(1, ok, f"max r_s {max_rs:.6f} (target {target_rs:.6f}), plateau ok "
                  f"{plateau_ok}, best raw r_s below onset {positive_below:.4f}, "
                  f"{elapsed:.1f} s")
    assert abs(max_rs - target_rs) <= 2e-3
    assert plateau_ok
    assert positive_below > 0.0
    assert elapsed < 60.0


def test_criterion_2_bsc_bec_orderings():
    """Capability orderings for BSC(0.11)/BEC(0.45) on a 0.001 input grid,
    positive secrecy capacity, and the validity window, under 60 s."""
    start = time.perf_counter()
    y_over_z = is_more_capable(bsc(0.11), bec(0.45), 0.001)
    z_over_y = is_more_capable(bec(0.45), bsc(0.11), 0.001)
    capacity = secrecy_capacity(bsc(0.11), bec(0.45), GridSpec(prob_step=0.005))
    elapsed = time.perf_counter() - start
    eps, delta = 0.11, 0.45
    window = 4 * eps * (1 - eps) * LN2 < delta * LN2 < h(eps)
    ok = (not y_over_z) and z_over_y and capacity > 0.0 and window and elapsed < 60.0
    report(2, ok, f"receiver-over-eavesdropper {y_over_z}, reverse {z_over_y}, "
                  f"capacity {capacity:.6f}, window {window}, {elapsed:.1f} s")
    assert not y_over_z
    assert z_over_y
    assert capacity > 0.0
    assert window
    assert elapsed < 60.0


def test_criterion_3_suboptimality_gap():
    """Prefix-simulation frontier sits below the coding frontier on a shared
    grid, with a strict gap above 5e-3 nats somewhere."""
    grid = GridSpec(prob_step=0.005)
    ds = secrecy_frontier(bsc(0.11), bec(0.45), grid)
    sim = secrecy_frontier_sim(bsc(0.11), bec(0.45), grid)
    np.testing.assert_array_equal(ds.r_d, sim.r_d)
    pointwise = bool(np.all(sim.r_s <= ds.r_s + 1e-12))
    gap = float(np.max(ds.r_s - sim.r_s))
    at = float(ds.r_d[int(np.argmax(ds.r_s - sim.r_s))])
    ok = pointwise and gap > 5e-3
    report(3, ok, f"pointwise below {pointwise}, max gap {gap:.6f} at r_d {at:.3f} "
                  f"(threshold 5e-3)")
    assert pointwise
    assert gap > 5e-3


def test_criterion_4_chain_rule_and_nesting():
    """Layered identities over 1000 random chains with alphabets up to 4."""
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(1000):
        chain = random_chain(rng)
        info = informations(chain)
        chain_rule = abs(info.i_xz_given_u - info.i_vz_given_u - info.i_xz_given_v)
        nesting = info.i_xz_given_u - (info.i_vz_given_u + info.h_x_given_v)
        processing = info.i_vy_given_u - info.i_xy_given_u
        worst = max(worst, chain_rule, nesting, processing)
        assert chain_rule <= 1e-10
        assert nesting <= 1e-10
        assert processing <= 1e-10
    report(4, True, f"1000 chains, worst identity residual {worst:.2e}")


def test_criterion_5_exponent_calculus():
    """Exponent zero value, slopes, additivity, and convexity over 200 fixtures."""
    rng = np.random.default_rng(515)
    thetas = np.linspace(0.0, 1.0, 11)
    worst_slope = 0.0
    worst_add = 0.0
    for _ in range(200):
        chain = random_chain(rng)
        info = informations(chain)
        w = chain.w_z
        layer = chain.p_x_given_v
        prior = chain.p_v

        assert superposition_exponent(0.0, w, layer, prior) == 0.0
        assert resolvability_exponent(0.0, w, chain.p_x) == 0.0

        s_single = resolvability_exponent_slope(w, chain.p_x)
        s_super = superposition_exponent_slope(w, layer, prior)
        s_cloud = superposition_exponent_slope(chain.p_z_given_v, chain.p_v_given_u,
                                               chain.p_u)
        d1 = abs(s_single - mutual_information(chain.p_x, w))
        d2 = abs(s_super - info.i_xz_given_v)
        d3 = abs(s_cloud - info.i_vz_given_u)
        worst_slope = max(worst_slope, d1, d2, d3)
        assert max(d1, d2, d3) <= 1e-5

        theta = float(rng.uniform(0.1, 1.0))
        once = superposition_exponent(theta, w, layer, prior)
        twice = superposition_exponent(theta, product_extend(w, 2),
                                       product_extend(layer, 2),
                                       product_extend(prior, 2))
        worst_add = max(worst_add, abs(twice - 2.0 * once))
        assert abs(twice - 2.0 * once) <= 1e-9

        values = [superposition_exponent(float(t), w, layer, prior) for t in thetas]
        assert np.all(np.diff(values, 2) >= -1e-8)
        single_vals = [resolvability_exponent(float(t), w, chain.p_x) for t in thetas]
        assert np.all(np.diff(single_vals, 2) >= -1e-8)
    report(5, True, f"200 fixtures, worst slope residual {worst_slope:.2e}, "
                    f"worst additivity residual {worst_add:.2e}")


def test_criterion_6_resolvability_bound_domination():
    """Mean exact divergence over 200 codebooks stays below the optimized
    two-layer bound for every (n, m) configuration, under 5 minutes."""
    prior = Pmf.uniform(2)
    layer = bsc(0.1)
    w_z = bsc(0.2)
    start = time.perf_counter()
    results = []
    for n in (2, 4, 6):
        for m in (2, 4):
            sim = mc_resolvability(prior, layer, w_z, n, m, m,
                                   trials=200, master_seed=60)
            bound = minimize_superposition_bound(n, m, m, w_z, layer, prior)
            results.append((n, m, sim.mean, bound.total))
            assert sim.mean <= bound.total, (n, m, sim.mean, bound.total)
    elapsed = time.perf_counter() - start
    detail = "; ".join(f"n={n} m={m}: {mean:.4f} <= {total:.4f}"
                       for n, m, mean, total in results)
    report(6, elapsed < 300.0, f"{detail} ({elapsed:.1f} s)")
    assert elapsed < 300.0


def test_criterion_7_leakage_bound_domination():
    """Three-layer code at n=6, sizes (2,4,2,4): mean exact leakage over 200
    codebooks stays below the optimized leakage bound; one confidential
    message leaks exactly zero."""
    chain = BccChain(Pmf.uniform(2), bsc(0.25), bsc(0.1), bsc(0.1), bsc(0.2))
    rep = simulate_bcc(chain, (2, 4, 2, 4), 6, trials=200, master_seed=70)
    bound = minimize_leakage_bound(6, 4, 4, chain)
    single = [exact_leakage(generate_bcc_codebook(chain, (2, 4, 1, 4), 6,
                                                  seed=trial_seed(71, t)))
              for t in range(20)]
    ok = rep.mean_leakage <= bound.total and all(v == 0.0 for v in single)
    report(7, ok, f"mean leakage {rep.mean_leakage:.6f} <= bound {bound.total:.6f}; "
                  f"single-message leakage all zero: {all(v == 0.0 for v in single)}")
    assert rep.mean_leakage <= bound.total
    assert all(v == 0.0 for v in single)


def test_criterion_8_rate_splitting():
    """1000 random member quadruples: the shifted quadruple lands in the
    inner region with slack >= -1e-9 and case labels follow the definitions."""
    rng = np.random.default_rng(888)
    checked = 0
    cases = {"none": 0, "dummy_to_private": 0, "private_to_common": 0}
    worst = math.inf
    while checked < 1000:
        chain = random_chain(rng)
        quad = sample_member_quad(rng, chain)
        if quad is None:
            continue
        checked += 1
        info = informations(chain)
        split = split_rates(chain, quad)
        in_layer = quad.r_1 + quad.r_s <= info.i_vy_given_u
        covered = quad.r_1 >= info.i_vz_given_u
        expected = ("none" if in_layer and covered
                    else "dummy_to_private" if in_layer
                    else "private_to_common")
        assert split.case == expected
        cases[split.case] += 1
        inner = check_inner_bound(chain, split.shifted)
        slack = min(c.slack for c in inner.constraints)
        worst = min(worst, slack)
        assert slack >= -1e-9, (chain, quad, split)
    report(8, True, f"1000 quads split ({cases}), worst inner slack {worst:.2e}")


def test_criterion_9_more_capable_collapse():
    """For 20 random more-capable pairs the no-prefix frontier matches the
    free-prefix frontier within twice the grid step at every budget."""
    rng = np.random.default_rng(909)
    step = 0.01
    grid = GridSpec(prob_step=step)
    worst = 0.0
    for _ in range(20):
        w_y, w_z = random_more_capable_pair(rng)
        assert is_more_capable(w_y, w_z, 0.01)
        free = secrecy_frontier(w_y, w_z, grid)
        fixed = secrecy_frontier(w_y, w_z, grid, v_equals_x=True)
        diff = float(np.max(np.abs(free.r_s - fixed.r_s)))
        worst = max(worst, diff)
        assert diff <= 2 * step, diff
    report(9, True, f"20 pairs, worst frontier deviation {worst:.5f} "
                    f"(tolerance {2 * step})")
