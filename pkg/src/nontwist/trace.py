"""Trace: an ordered polyline of phase points with per-sample energy.

Carrier for everything the package draws or measures: map orbits, flow
integrations, contour polylines, and separatrix branches.  Arrays are frozen
(read-only) after construction; treat a Trace as an immutable value.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ._field import hamiltonian_value

TWO_PI = 2.0 * math.pi

SOURCES = ("map_orbit", "flow", "contour", "separatrix")


def unwrap_angles(xs: np.ndarray) -> np.ndarray:
    """Continuous angle sequence: add +-2*pi whenever a step jumps more than pi.

    Exact for flows and contours (small steps); for map orbits it infers the
    representative step in (-pi, pi], which is the convention the meander
    test relies on.
    """
    xs = np.asarray(xs, dtype=np.float64)
    if xs.size == 0:
        return xs.copy()
    d = np.diff(xs)
    jumps = np.zeros_like(d)
    jumps[d > math.pi] = -TWO_PI
    jumps[d < -math.pi] = TWO_PI
    out = xs.copy()
    out[1:] += np.cumsum(jumps)
    return out


@dataclass(frozen=True)
class Trace:
    """Polyline of (x, y) samples with energies and provenance metadata.

    xs are wrapped to [0, 2*pi); use xs_unwrapped() for the continuous
    version.  metadata records the parameters and settings that produced the
    trace (and, for flow traces, the realized energy drift and its budget).
    """

    xs: np.ndarray
    ys: np.ndarray
    energies: np.ndarray
    source: str
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValueError(f"unknown trace source {self.source!r}")
        if len(self.xs) == 0:
            raise ValueError("a trace must contain at least one point")
        for arr in (self.xs, self.ys, self.energies):
            arr.flags.writeable = False

    @classmethod
    def build(cls, xs, ys, *, params, source, metadata=None) -> "Trace":
        """Assemble a trace, computing per-sample energies from params."""
        xs = np.ascontiguousarray(xs, dtype=np.float64)
        ys = np.ascontiguousarray(ys, dtype=np.float64)
        energies = hamiltonian_value(params.a, params.b, params.k, xs, ys)
        md = {"params": {"a": params.a, "b": params.b, "k": params.k}}
        if metadata:
            md.update(metadata)
        return cls(xs=xs, ys=ys, energies=energies, source=source, metadata=md)

    def __len__(self) -> int:
        return len(self.xs)

    @property
    def points(self):
        """Samples as phase points (arrays xs/ys are the primary storage)."""
        from .maps import PhasePoint

        return [PhasePoint(x, y) for x, y in zip(self.xs.tolist(), self.ys.tolist())]

    def xs_unwrapped(self) -> np.ndarray:
        return unwrap_angles(self.xs)

    def energy_drift(self) -> float:
        """max |H(sample) - H(first sample)| along the trace."""
        return float(np.max(np.abs(self.energies - self.energies[0])))
