"""Exact probability and information measures on finite alphabets.

All information quantities are in nats (natural logarithm throughout).
Values are ordinary 64-bit floats, alphabets are ``{0, ..., m-1}``, and
every function here is a pure function of immutable inputs, so concurrent
use from any number of threads is safe.
"""

from __future__ import annotations

import math
from functools import reduce

import numpy as np

NORMALIZATION_TOL = 1e-12
PRODUCT_SIZE_GUARD = 2**24


class GuardExceeded(RuntimeError):
    """A size guard on exact enumeration or array materialization tripped."""


def _xlogx(p: np.ndarray) -> np.ndarray:
    safe = np.where(p > 0.0, p, 1.0)
    return p * np.log(safe)


def _as_prob_vector(probs, tol: float = NORMALIZATION_TOL) -> tuple[np.ndarray, bool]:
    arr = np.array(probs, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("probability vector must be one-dimensional and non-empty")
    if np.any(arr < 0.0):
        raise ValueError(f"negative probability entry (min={arr.min()!r})")
    total = float(arr.sum())
    if abs(total - 1.0) > tol:
        raise ValueError(f"probabilities sum to {total!r}, outside tolerance {tol}")
    renormalized = total != 1.0
    if renormalized:
        arr = arr / total
    arr.setflags(write=False)
    return arr, renormalized


class Pmf:
    """Probability mass function over a finite alphabet ``{0, ..., m-1}``.

    Inputs whose total differs from 1 by at most ``NORMALIZATION_TOL`` are
    renormalized exactly once; the ``renormalized`` attribute records whether
    that happened.  The underlying array is read-only.
    """

    __slots__ = ("probs", "renormalized")

    def __init__(self, probs) -> None:
        self.probs, self.renormalized = _as_prob_vector(probs)

    @property
    def size(self) -> int:
        return int(self.probs.size)

    @classmethod
    def uniform(cls, m: int) -> Pmf:
        return cls(np.full(m, 1.0 / m))

    @classmethod
    def point_mass(cls, m: int, index: int) -> Pmf:
        v = np.zeros(m)
        v[index] = 1.0
        return cls(v)

    def entropy(self) -> float:
        return entropy(self)

    def __repr__(self) -> str:
        return f"Pmf({self.probs.tolist()})"


class Dmc:
    """Discrete memoryless channel as a row-stochastic matrix.

    ``matrix[x, z]`` is the probability of output ``z`` given input ``x``.
    """

    __slots__ = ("matrix", "renormalized")

    def __init__(self, rows) -> None:
        arr = np.array(rows, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("channel matrix must be two-dimensional and non-empty")
        fixed = np.empty_like(arr)
        renorm = False
        for i, row in enumerate(arr):
            vec, r = _as_prob_vector(row)
            fixed[i] = vec
            renorm = renorm or r
        fixed.setflags(write=False)
        self.matrix = fixed
        self.renormalized = renorm

    @property
    def input_size(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def output_size(self) -> int:
        return int(self.matrix.shape[1])

    @classmethod
    def identity(cls, m: int) -> Dmc:
        return cls(np.eye(m))

    def row(self, x: int) -> Pmf:
        return Pmf(self.matrix[x])

    def output(self, input_dist: Pmf) -> Pmf:
        """Push an input distribution through the channel."""
        if input_dist.size != self.input_size:
            raise ValueError(
                f"input size {input_dist.size} does not match channel input {self.input_size}"
            )
        return Pmf(input_dist.probs @ self.matrix)

    def compose(self, then: Dmc) -> Dmc:
        """Cascade ``self`` (A -> B) with ``then`` (B -> C) into an A -> C channel."""
        if self.output_size != then.input_size:
            raise ValueError(
                f"cannot cascade: output size {self.output_size} vs input {then.input_size}"
            )
        return Dmc(self.matrix @ then.matrix)

    def is_identity(self) -> bool:
        return self.input_size == self.output_size and bool(
            np.array_equal(self.matrix, np.eye(self.input_size))
        )

    def __repr__(self) -> str:
        return f"Dmc({self.matrix.tolist()})"


class JointPmf:
    """Dense joint distribution over a tuple of finite alphabets.

    Axes carry string labels so information measures can be requested by
    variable name rather than position.
    """

    __slots__ = ("probs", "axes", "renormalized")

    def __init__(self, probs, axes) -> None:
        arr = np.array(probs, dtype=np.float64)
        axes = tuple(axes)
        if arr.ndim != len(axes):
            raise ValueError(f"array has {arr.ndim} axes but {len(axes)} labels given")
        if len(set(axes)) != len(axes):
            raise ValueError(f"duplicate axis labels: {axes}")
        if np.any(arr < 0.0):
            raise ValueError("negative probability entry in joint")
        total = float(arr.sum())
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"joint sums to {total!r}, outside tolerance")
        renormalized = total != 1.0
        if renormalized:
            arr = arr / total
        arr.setflags(write=False)
        self.probs = arr
        self.axes = axes
        self.renormalized = renormalized

    def axis_index(self, name: str) -> int:
        try:
            return self.axes.index(name)
        except ValueError:
            raise ValueError(f"no axis {name!r} in {self.axes}") from None

    def marginal_array(self, keep) -> np.ndarray:
        """Marginal over all axes not in ``keep``, axes ordered as requested."""
        keep = tuple(keep)
        drop = tuple(i for i, name in enumerate(self.axes) if name not in keep)
        arr = self.probs.sum(axis=drop) if drop else self.probs
        remaining = [name for name in self.axes if name in keep]
        order = [remaining.index(name) for name in keep]
        return arr.transpose(order)

    def marginal(self, keep) -> JointPmf:
        return JointPmf(self.marginal_array(keep), tuple(keep))


def binary_entropy(p: float) -> float:
    """Entropy of a Bernoulli(p) variable in nats, with 0*log(0) = 0."""
    if not -NORMALIZATION_TOL <= p <= 1.0 + NORMALIZATION_TOL:
        raise ValueError(f"probability {p!r} outside [0, 1]")
    p = min(max(p, 0.0), 1.0)
    out = 0.0
    if p > 0.0:
        out -= p * math.log(p)
    if p < 1.0:
        out -= (1.0 - p) * math.log(1.0 - p)
    return out


def binary_convolution(x: float, y: float) -> float:
    """Crossover probability of two cascaded binary symmetric channels."""
    for v in (x, y):
        if not -NORMALIZATION_TOL <= v <= 1.0 + NORMALIZATION_TOL:
            raise ValueError(f"probability {v!r} outside [0, 1]")
    return x * (1.0 - y) + (1.0 - x) * y


def _coerce_vector(p) -> np.ndarray:
    if isinstance(p, Pmf):
        return p.probs
    return np.asarray(p, dtype=np.float64)


def entropy(p) -> float:
    """Shannon entropy in nats of a ``Pmf`` (or raw nonnegative array)."""
    arr = _coerce_vector(p)
    return float(-_xlogx(arr).sum())


def kl_divergence(p, q) -> float:
    """Divergence D(p || q) in nats; ``inf`` where q vanishes on p's support."""
    pa, qa = _coerce_vector(p), _coerce_vector(q)
    if pa.shape != qa.shape:
        raise ValueError(f"alphabet mismatch: {pa.shape} vs {qa.shape}")
    support = pa > 0.0
    if np.any(qa[support] == 0.0):
        return math.inf
    ps, qs = pa[support], qa[support]
    return float(np.sum(ps * (np.log(ps) - np.log(qs))))


def mutual_information(input_dist: Pmf, channel: Dmc) -> float:
    """I(X;Y) in nats for X ~ ``input_dist`` sent through ``channel``."""
    if input_dist.size != channel.input_size:
        raise ValueError(
            f"input size {input_dist.size} does not match channel input {channel.input_size}"
        )
    out = input_dist.probs @ channel.matrix
    h_out = float(-_xlogx(out).sum())
    h_cond = float(np.dot(input_dist.probs, -_xlogx(channel.matrix).sum(axis=1)))
    return h_out - h_cond


def _merged_marginal(joint: JointPmf, a: str, b: str, given) -> np.ndarray:
    if given is None:
        given = ()
    elif isinstance(given, str):
        given = (given,)
    else:
        given = tuple(given)
    names = (a, b) + given
    if len(set(names)) != len(names):
        raise ValueError(f"axes must be distinct, got {names}")
    arr = joint.marginal_array(names)
    return arr.reshape(arr.shape[0], arr.shape[1], -1)


def conditional_mutual_information(joint: JointPmf, a: str, b: str, given=None) -> float:
    """I(A;B|C) in nats from a labelled joint; ``given`` may be absent or a tuple."""
    p3 = _merged_marginal(joint, a, b, given)
    h = lambda arr: float(-_xlogx(np.asarray(arr).ravel()).sum())
    h_ac = h(p3.sum(axis=1))
    h_bc = h(p3.sum(axis=0))
    h_abc = h(p3)
    h_c = h(p3.sum(axis=(0, 1)))
    return h_ac + h_bc - h_abc - h_c


def conditional_entropy(joint: JointPmf, target: str, given) -> float:
    """H(target | given) in nats from a labelled joint."""
    if isinstance(given, str):
        given = (given,)
    else:
        given = tuple(given)
    names = (target,) + given
    if len(set(names)) != len(names):
        raise ValueError(f"axes must be distinct, got {names}")
    arr = joint.marginal_array(names)
    h = lambda a: float(-_xlogx(np.asarray(a).ravel()).sum())
    return h(arr) - h(arr.sum(axis=0))


def product_extend(obj, n: int):
    """i.i.d. n-fold extension of a ``Pmf`` or ``Dmc`` over tuple alphabets.

    Tuples are indexed lexicographically with the first symbol most
    significant.  Guarded so the dense result stays below
    ``PRODUCT_SIZE_GUARD`` entries.
    """
    if n < 1 or int(n) != n:
        raise ValueError(f"extension order must be a positive integer, got {n!r}")
    n = int(n)
    if isinstance(obj, Pmf):
        if obj.size**n > PRODUCT_SIZE_GUARD:
            raise GuardExceeded(f"product alphabet {obj.size}^{n} exceeds guard")
        return Pmf(reduce(np.kron, [obj.probs] * n))
    if isinstance(obj, Dmc):
        if (obj.input_size**n) * (obj.output_size**n) > PRODUCT_SIZE_GUARD:
            raise GuardExceeded(
                f"product channel {obj.input_size}^{n} x {obj.output_size}^{n} exceeds guard"
            )
        return Dmc(reduce(np.kron, [obj.matrix] * n))
    raise TypeError(f"product_extend expects Pmf or Dmc, got {type(obj).__name__}")
