"""Shared random fixtures for the test suite (seeded, reproducible)."""

from __future__ import annotations

import numpy as np

from bccrates import BccChain, Dmc, Pmf


def random_pmf(rng: np.random.Generator, m: int) -> Pmf:
    return Pmf(rng.dirichlet(np.ones(m)))


def random_dmc(rng: np.random.Generator, m_in: int, m_out: int) -> Dmc:
    return Dmc(rng.dirichlet(np.ones(m_out), size=m_in))


def random_chain(rng: np.random.Generator, max_size: int = 4) -> BccChain:
    mu = int(rng.integers(1, max_size + 1))
    mv = int(rng.integers(2, max_size + 1))
    mx = int(rng.integers(2, max_size + 1))
    my = int(rng.integers(2, max_size + 1))
    mz = int(rng.integers(2, max_size + 1))
    return BccChain(
        p_u=random_pmf(rng, mu),
        p_v_given_u=random_dmc(rng, mu, mv),
        p_x_given_v=random_dmc(rng, mv, mx),
        w_y=random_dmc(rng, mx, my),
        w_z=random_dmc(rng, mx, mz),
    )


def random_more_capable_pair(rng: np.random.Generator) -> tuple[Dmc, Dmc]:
    """Binary-input pair where the second channel is a noisier version of the first."""
    my = int(rng.integers(2, 4))
    mz = int(rng.integers(2, 4))
    w_y = random_dmc(rng, 2, my)
    intermediate = random_dmc(rng, my, mz)
    return w_y, w_y.compose(intermediate)
