"""Interpolating Hamiltonian of the cubic nontwist map.

    H(x, y) = -y^2/2 + a*y^3/3 - b*y^4/4 - k*cos(x)

Its vector field X_H = (F(y), k*sin(x)) interpolates the map and is
reversible under R(x, y) = (-x, y); the fixed lines x = 0 and x = pi of R
are the symmetry lines carrying all symmetric equilibria.  For b < a^2/4
(b != 0) there are six equilibria arranged in three chains stacked in y:
chain I at y = 0, chain II at the small root of b*y^2 - a*y + 1, chain III
at the large root.  Linear stability comes from lambda^2 = k*cos(x)*F'(y).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._field import hamiltonian_value, profile, profile_derivative
from .errors import DomainError
from .maps import Params, PhasePoint

# |lambda^2| at or below this counts as degenerate; absorbs rounding in
# sqrt(a^2 - 4b) near the fold at b = a^2/4.
DEGENERACY_TOL = 1e-12

SYMMETRY_LINES = (0.0, math.pi)

ELLIPTIC = "elliptic"
HYPERBOLIC = "hyperbolic"
DEGENERATE = "degenerate"

CHAIN_I = "I"
CHAIN_II = "II"
CHAIN_III = "III"


@dataclass(frozen=True)
class Equilibrium:
    """Symmetric equilibrium with its linear stability classification.

    label keeps the canonical positional name (P1..P6, or A/B at the fold
    b = a^2/4); stability is always computed from the eigenvalues, never
    copied from the name.
    """

    position: PhasePoint
    stability: str
    eigenvalue_squared: float
    chain: str
    label: str

    @property
    def is_hyperbolic(self) -> bool:
        return self.stability == HYPERBOLIC


def energy(p: Params, pt: PhasePoint) -> float:
    """Hamiltonian value at a phase point."""
    return float(hamiltonian_value(p.a, p.b, p.k, pt.x, pt.y))


def vector_field(p: Params, pt: PhasePoint) -> tuple[float, float]:
    """X_H = (-dH/dy, dH/dx) = (F(y), k*sin(x))."""
    return profile(p.a, p.b, pt.y), p.k * math.sin(pt.x)


def jacobian(p: Params, pt: PhasePoint) -> np.ndarray:
    """Linearization of X_H: [[0, F'(y)], [k*cos(x), 0]]; trace is exactly 0."""
    return np.array(
        [
            [0.0, profile_derivative(p.a, p.b, pt.y)],
            [p.k * math.cos(pt.x), 0.0],
        ]
    )


def reversal(pt: PhasePoint) -> PhasePoint:
    """The reversing involution R(x, y) = (-x mod 2*pi, y)."""
    return PhasePoint(-pt.x, pt.y)


def _classify(lam2: float) -> str:
    if abs(lam2) <= DEGENERACY_TOL:
        return DEGENERATE
    return HYPERBOLIC if lam2 > 0.0 else ELLIPTIC


def _make_eq(p: Params, x: float, y: float, chain: str, label: str) -> Equilibrium:
    cosx = 1.0 if x == 0.0 else -1.0
    lam2 = p.k * cosx * profile_derivative(p.a, p.b, y)
    return Equilibrium(
        position=PhasePoint(x, y),
        stability=_classify(lam2),
        eigenvalue_squared=lam2,
        chain=chain,
        label=label,
    )


def equilibria(p: Params) -> list[Equilibrium]:
    """All symmetric equilibria of X_H, classified by eigenvalue.

    Count follows the sign of a^2 - 4b: six for positive (three chains),
    four at exactly zero (chains II and III collapse onto the degenerate pair
    A(0, 1/sqrt(b)), B(pi, 1/sqrt(b)), reported under chain II), two for
    negative.  Chain membership is keyed to the algebraic root (0, small,
    large), not to the vertical ordering, which flips for b < 0.
    """
    if p.b == 0.0:
        raise DomainError(
            "equilibria need b != 0: the chain II/III roots of b*y^2 - a*y + 1 diverge"
        )
    pi = math.pi
    out = [
        _make_eq(p, 0.0, 0.0, CHAIN_I, "P1"),
        _make_eq(p, pi, 0.0, CHAIN_I, "P2"),
    ]
    disc = p.equilibrium_discriminant
    if disc < 0.0:
        return out
    s = math.sqrt(disc)
    y_small = 2.0 / (p.a + s)
    if disc == 0.0:
        out.append(_make_eq(p, 0.0, y_small, CHAIN_II, "A"))
        out.append(_make_eq(p, pi, y_small, CHAIN_II, "B"))
        return out
    y_large = (p.a + s) / (2.0 * p.b)
    out.append(_make_eq(p, 0.0, y_small, CHAIN_II, "P3"))
    out.append(_make_eq(p, pi, y_small, CHAIN_II, "P4"))
    out.append(_make_eq(p, 0.0, y_large, CHAIN_III, "P5"))
    out.append(_make_eq(p, pi, y_large, CHAIN_III, "P6"))
    return out


def chain_saddle(p: Params, chain: str) -> Equilibrium:
    """The hyperbolic equilibrium of the given chain.

    Raises DomainError when the chain has no hyperbolic member (absent
    chains beyond the fold, or the degenerate pair at a^2 = 4b).
    """
    for eq in equilibria(p):
        if eq.chain == chain and eq.is_hyperbolic:
            return eq
    raise DomainError(f"chain {chain} has no hyperbolic equilibrium at {p}")


def saddle_eigensystem(eq: Equilibrium, p: Params):
    """(lambda, v_unstable, v_stable) of the linearization at a saddle.

    For J = [[0, d], [c, 0]] with lambda = sqrt(c*d) > 0 the eigenvectors
    are (d, +-lambda).  Raises DomainError for non-hyperbolic points.
    """
    d = profile_derivative(p.a, p.b, eq.position.y)
    c = p.k * (1.0 if eq.position.x == 0.0 else -1.0)
    lam2 = c * d
    if lam2 <= DEGENERACY_TOL:
        raise DomainError(
            f"eigenvector seeding needs a hyperbolic point; lambda^2 = {lam2}"
        )
    lam = math.sqrt(lam2)
    nrm = math.hypot(d, lam)
    v_u = (d / nrm, lam / nrm)
    v_s = (d / nrm, -lam / nrm)
    return lam, v_u, v_s
