"""Channel-spec ingestion: shorthand families and explicit matrices.

Shorthand forms understood everywhere a channel argument appears:
``bsc:0.1`` (binary symmetric), ``bec:0.45`` (binary erasure, outputs ordered
0, 1, erasure), ``identity:3``, or a path to a JSON file with fields ``kind``
and ``params`` or ``matrix``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

from .probability import Dmc, Pmf


def bsc(eps: float) -> Dmc:
    """Binary symmetric channel with crossover probability ``eps``."""
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"crossover probability {eps!r} outside [0, 1]")
    return Dmc([[1.0 - eps, eps], [eps, 1.0 - eps]])


def bec(delta: float) -> Dmc:
    """Binary erasure channel with erasure probability ``delta``.

    Outputs are indexed (0, 1, erasure).
    """
    if not 0.0 <= delta <= 1.0:
        raise ValueError(f"erasure probability {delta!r} outside [0, 1]")
    return Dmc([[1.0 - delta, 0.0, delta], [0.0, 1.0 - delta, delta]])


@dataclass(frozen=True)
class ChannelSpec:
    """Parsed channel description; ``expand`` yields the matrix form."""

    name: str
    kind: str  # "bsc" | "bec" | "identity" | "explicit"
    params: dict = field(default_factory=dict)
    matrix: tuple | None = None

    def expand(self) -> Dmc:
        if self.kind == "bsc":
            return bsc(float(self.params["eps"]))
        if self.kind == "bec":
            return bec(float(self.params["delta"]))
        if self.kind == "identity":
            return Dmc.identity(int(self.params["size"]))
        if self.kind == "explicit":
            if self.matrix is None:
                raise ValueError("explicit channel spec needs a matrix")
            return Dmc(np.asarray(self.matrix, dtype=float))
        raise ValueError(f"unknown channel kind {self.kind!r}")


def load_channel_file(path: str) -> ChannelSpec:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    kind = data.get("kind")
    if kind is None:
        raise ValueError(f"channel file {path} is missing 'kind'")
    matrix = data.get("matrix")
    return ChannelSpec(
        name=data.get("name", os.path.basename(path)),
        kind=kind,
        params=data.get("params", {}),
        matrix=tuple(tuple(row) for row in matrix) if matrix is not None else None,
    )


def parse_channel(text: str) -> Dmc:
    """Expand a shorthand string or load a JSON channel file.

    ``row:p1,p2,...`` builds a one-input channel (useful as a layer fed by a
    constant variable).
    """
    if ":" in text and not os.path.exists(text):
        kind, _, arg = text.partition(":")
        kind = kind.strip().lower()
        if kind == "bsc":
            return bsc(float(arg))
        if kind == "bec":
            return bec(float(arg))
        if kind == "identity":
            return Dmc.identity(int(arg))
        if kind == "row":
            return Dmc([[float(v) for v in arg.split(",")]])
        raise ValueError(f"unknown channel shorthand {text!r}")
    if os.path.exists(text):
        return load_channel_file(text).expand()
    raise ValueError(f"channel argument {text!r} is neither shorthand nor a file")


def parse_pmf(text: str) -> Pmf:
    """Parse ``uniform:m``, ``point:m:i``, or a comma-separated probability list."""
    if text.startswith("uniform:"):
        return Pmf.uniform(int(text.split(":")[1]))
    if text.startswith("point:"):
        _, m, i = text.split(":")
        return Pmf.point_mass(int(m), int(i))
    return Pmf([float(v) for v in text.split(",")])
