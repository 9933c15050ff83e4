"""Markov chains U -> V -> X -> (Y, Z) for two-receiver channel analysis.

A :class:`BccChain` bundles the auxiliary layers (time-sharing variable U,
prefix variable V) with the physical channels to the legitimate receiver (Y)
and the eavesdropper (Z).  All derived joints and information measures are
computed exactly from the dense joint law.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .probability import (
    Dmc,
    JointPmf,
    Pmf,
    conditional_entropy,
    conditional_mutual_information,
)

JOINT_AXES = ("u", "v", "x", "y", "z")
MAX_AXIS_SIZE = 8


@dataclass(frozen=True)
class BccChain:
    """Input layers and channel pair forming U -> V -> X -> (Y, Z).

    ``enforce_cardinality=True`` applies the auxiliary-alphabet caps that are
    sufficient for the four-rate region search (|U| <= |X|+3 and a V alphabet
    no larger than |U|*(|X|+1)).
    """

    p_u: Pmf
    p_v_given_u: Dmc
    p_x_given_v: Dmc
    w_y: Dmc
    w_z: Dmc
    enforce_cardinality: bool = False

    def __post_init__(self) -> None:
        if self.p_u.size != self.p_v_given_u.input_size:
            raise ValueError("U alphabet does not match the V|U layer input")
        if self.p_v_given_u.output_size != self.p_x_given_v.input_size:
            raise ValueError("V alphabet does not match the X|V layer input")
        if self.p_x_given_v.output_size != self.w_y.input_size:
            raise ValueError("X alphabet does not match the Y channel input")
        if self.w_y.input_size != self.w_z.input_size:
            raise ValueError("the two channels must share the input alphabet")
        for size in self.sizes:
            if size > MAX_AXIS_SIZE:
                raise ValueError(f"alphabet size {size} exceeds supported cap {MAX_AXIS_SIZE}")
        if self.enforce_cardinality:
            mu, mv, mx = self.p_u.size, self.p_v_given_u.output_size, self.w_y.input_size
            if mu > mx + 3:
                raise ValueError(f"|U|={mu} exceeds cardinality cap |X|+3={mx + 3}")
            if mv > mu * (mx + 1):
                raise ValueError(f"|V|={mv} exceeds cardinality cap |U|*(|X|+1)={mu * (mx + 1)}")

    @property
    def sizes(self) -> tuple[int, int, int, int, int]:
        """Alphabet sizes (|U|, |V|, |X|, |Y|, |Z|)."""
        return (
            self.p_u.size,
            self.p_v_given_u.output_size,
            self.w_y.input_size,
            self.w_y.output_size,
            self.w_z.output_size,
        )

    @property
    def p_v(self) -> Pmf:
        return self.p_v_given_u.output(self.p_u)

    @property
    def p_x(self) -> Pmf:
        return self.p_x_given_v.output(self.p_v)

    @property
    def p_y(self) -> Pmf:
        return self.w_y.output(self.p_x)

    @property
    def p_z(self) -> Pmf:
        return self.w_z.output(self.p_x)

    @property
    def p_y_given_v(self) -> Dmc:
        return self.p_x_given_v.compose(self.w_y)

    @property
    def p_z_given_v(self) -> Dmc:
        return self.p_x_given_v.compose(self.w_z)

    @property
    def p_y_given_u(self) -> Dmc:
        return self.p_v_given_u.compose(self.p_y_given_v)

    @property
    def p_z_given_u(self) -> Dmc:
        return self.p_v_given_u.compose(self.p_z_given_v)

    def has_v_equal_x(self) -> bool:
        """True when the prefix layer is the identity, i.e. V = X."""
        return self.p_x_given_v.is_identity()


def chain_v_equals_x(p_u: Pmf, p_x_given_u: Dmc, w_y: Dmc, w_z: Dmc) -> BccChain:
    """Chain with no prefix layer: V = X, drawn from ``p_x_given_u``."""
    mx = p_x_given_u.output_size
    return BccChain(p_u, p_x_given_u, Dmc.identity(mx), w_y, w_z)


def single_chain(p_v: Pmf, p_x_given_v: Dmc, w_y: Dmc, w_z: Dmc) -> BccChain:
    """Chain with a constant U, for searches where U is pure time sharing."""
    return BccChain(Pmf([1.0]), Dmc([p_v.probs]), p_x_given_v, w_y, w_z)


def build_joint(chain: BccChain) -> JointPmf:
    """Dense joint P(u,v,x,y,z) factored along the chain."""
    probs = np.einsum(
        "u,uv,vx,xy,xz->uvxyz",
        chain.p_u.probs,
        chain.p_v_given_u.matrix,
        chain.p_x_given_v.matrix,
        chain.w_y.matrix,
        chain.w_z.matrix,
    )
    return JointPmf(probs, JOINT_AXES)


@dataclass(frozen=True)
class ChainInformations:
    """Every mutual-information / entropy term used by the region checks (nats)."""

    i_uy: float
    i_uz: float
    i_vy: float
    i_vz: float
    i_xy: float
    i_xz: float
    i_vy_given_u: float
    i_vz_given_u: float
    i_xy_given_u: float
    i_xz_given_u: float
    i_xz_given_v: float
    h_x_given_v: float


def informations(chain: BccChain) -> ChainInformations:
    joint = build_joint(chain)
    cmi = lambda a, b, given=None: conditional_mutual_information(joint, a, b, given)
    return ChainInformations(
        i_uy=cmi("u", "y"),
        i_uz=cmi("u", "z"),
        i_vy=cmi("v", "y"),
        i_vz=cmi("v", "z"),
        i_xy=cmi("x", "y"),
        i_xz=cmi("x", "z"),
        i_vy_given_u=cmi("v", "y", "u"),
        i_vz_given_u=cmi("v", "z", "u"),
        i_xy_given_u=cmi("x", "y", "u"),
        i_xz_given_u=cmi("x", "z", "u"),
        i_xz_given_v=cmi("x", "z", "v"),
        h_x_given_v=conditional_entropy(joint, "x", "v"),
    )
