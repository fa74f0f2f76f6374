"""Reconnection thresholds of the three chains, via equal-saddle-energy residuals.

Two residual surfaces in (a, b, k) decide when neighboring chains reconnect:

  I-II :  6b^2 + a^4 - 6a^2 b + 48 b^3 k + (4ab - a^3) sqrt(a^2-4b) = 0
          (equivalently H(P1h) = H(P4h); the surd form equals
          -24 b^3 (H(P1h) - H(P4h)) identically)
  II-III: k = (a / (24 b^3)) (a^2 - 4b)^{3/2}
          (equivalently H(P4h) = H(P5h); the residual k - k_rec equals
          (H(P4h) - H(P5h)) / 2 identically)

Eliminating k couples them into the triple-reconnection curve

  a^4 - 6 a^2 b + 6 b^2 + a (a^2 - 4b)^{3/2} = 0

whose positive root is b = (2/9) a^2 with k = 9/(64 a^2).  Roots are found by
a sign-change scan plus bisection: the residuals have square-root branch
points at b = a^2/4 and a pole at b = 0, so bracketing beats Newton here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, NumericalError

PAIR_I_II = "I_II"
PAIR_II_III = "II_III"

DIMERISED = "dimerised_pair"
BIRKHOFF = "birkhoff_pair"
AT_RECONNECTION = "at_reconnection"
CHAINS_ABSENT = "chains_absent"

RECONNECTION_TOL = 1e-9

DEFAULT_SCAN_POINTS = 10_000
DEFAULT_BISECT_TOL = 1e-12


def _require_chains(a: float, b: float) -> float:
    """Guard: chains II/III exist (a^2 - 4b >= 0) and b != 0."""
    if b == 0.0:
        raise DomainError("reconnection residuals need b != 0")
    disc = a * a - 4.0 * b
    if disc < 0.0:
        raise DomainError(
            f"chains II and III are absent: a^2 - 4b = {disc} < 0"
        )
    return disc


def residual_I_II(a: float, b: float, k: float) -> float:
    """Reconnection residual of chains I and II; zero iff H(P1h) = H(P4h)."""
    disc = _require_chains(a, b)
    s = math.sqrt(disc)
    return (
        6.0 * b * b
        + a**4
        - 6.0 * a * a * b
        + 48.0 * b**3 * k
        + 4.0 * a * b * s
        - a**3 * s
    )


def k_of_b_II_III(a: float, b: float) -> float:
    """The exact perturbation amplitude at which chains II and III reconnect."""
    disc = _require_chains(a, b)
    return (a / (24.0 * b**3)) * disc * math.sqrt(disc)


def residual_II_III(a: float, b: float, k: float) -> float:
    """k minus the II-III reconnection amplitude; zero iff H(P4h) = H(P5h)."""
    return k - k_of_b_II_III(a, b)


def triple_residual(a: float, b: float) -> float:
    """Triple-reconnection residual; zero iff all three saddle energies match."""
    disc = _require_chains(a, b)
    return a**4 - 6.0 * a * a * b + 6.0 * b * b + a * disc * math.sqrt(disc)


@dataclass(frozen=True)
class ThresholdRoot:
    """One certified root: bracket endpoints have opposite residual signs."""

    b_root: float
    residual_at_root: float
    bracket: tuple[float, float]
    iterations: int

    def as_dict(self) -> dict:
        return {
            "b_root": self.b_root,
            "residual_at_root": self.residual_at_root,
            "bracket": list(self.bracket),
            "iterations": self.iterations,
        }


@dataclass(frozen=True)
class ThresholdReport:
    """Roots of one reconnection residual over a b-interval."""

    kind: str  # "I_II" | "II_III" | "triple"
    a: float
    roots: tuple[ThresholdRoot, ...]
    k: float | None = None  # absent for the triple curve, which solves for k
    k_triple: float | None = None

    def as_dict(self) -> dict:
        out = {"kind": self.kind, "roots": [r.as_dict() for r in self.roots]}
        if self.k_triple is not None:
            out["k_triple"] = self.k_triple
        return out


def solve_threshold(f, b_lo: float, b_hi: float, tol: float = DEFAULT_BISECT_TOL,
                    n_scan: int = DEFAULT_SCAN_POINTS) -> list[ThresholdRoot]:
    """All sign-change roots of f on [b_lo, b_hi], each bisected to |db| <= tol.

    The scan samples n_scan subintervals; samples where f is undefined
    (DomainError, or the b = 0 hole) are skipped, so roots are only reported
    inside brackets where f is defined with opposite signs.  Returns roots in
    ascending order; an empty list means no sign change was found.
    """
    if not (b_lo < b_hi) or not math.isfinite(b_lo) or not math.isfinite(b_hi):
        raise DomainError(f"invalid scan interval [{b_lo}, {b_hi}]")
    if n_scan < 1:
        raise DomainError(f"scan needs at least 1 subinterval, got {n_scan}")

    def sample(x):
        if x == 0.0:
            return None
        try:
            v = f(x)
        except DomainError:
            return None
        if not math.isfinite(v):
            return None
        return v

    roots = []
    width = (b_hi - b_lo) / n_scan
    prev_x = b_lo
    prev_v = sample(b_lo)
    if prev_v == 0.0:
        roots.append(ThresholdRoot(prev_x, 0.0, (prev_x, prev_x), 0))
    for i in range(1, n_scan + 1):
        x = b_hi if i == n_scan else b_lo + i * width
        v = sample(x)
        if v == 0.0:
            # an exact zero on the grid is a root, unless it sits within one
            # scan cell of the b = 0 hole (the I-II residual's b^3 prefactor
            # vanishes there without any energy crossing)
            if abs(x) >= width:
                half = 0.5 * width
                f_lo = sample(x - half)
                f_hi = sample(x + half)
                if (
                    f_lo is not None and f_hi is not None
                    and f_lo != 0.0 and f_hi != 0.0
                    and (f_lo < 0.0) != (f_hi < 0.0)
                ):
                    bracket = (x - half, x + half)
                else:
                    bracket = (x, x)  # tangency or domain edge: no sign bracket
                roots.append(ThresholdRoot(x, 0.0, bracket, 0))
        elif (
            prev_v is not None
            and v is not None
            and prev_v != 0.0
            and (prev_v < 0.0) != (v < 0.0)
            # never bracket across the b = 0 hole: the I-II residual carries
            # a b^3 factor that flips sign there without an energy crossing
            and not (prev_x < 0.0 < x)
        ):
            roots.append(_bisect(f, prev_x, x, prev_v, v, tol))
        prev_x, prev_v = x, v
    return roots


def _bisect(f, lo, hi, f_lo, f_hi, tol) -> ThresholdRoot:
    iterations = 0
    while hi - lo > tol and iterations < 200:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        fm = f(mid)
        iterations += 1
        if fm == 0.0:
            return ThresholdRoot(mid, 0.0, (lo, hi), iterations)
        if (f_lo < 0.0) != (fm < 0.0):
            hi, f_hi = mid, fm
        else:
            lo, f_lo = mid, fm
    root = 0.5 * (lo + hi)
    return ThresholdRoot(root, f(root), (lo, hi), iterations)


def triple_point(a: float, b_lo: float | None = None, b_hi: float | None = None):
    """Solve the triple-reconnection curve for b, then recover k.

    Returns (b, k) with k = k_of_b_II_III(a, b); the I-II residual is checked
    to vanish at the pair before returning (the curve is the elimination of k
    between the two surfaces, so this certifies the algebra numerically).
    """
    if b_lo is None:
        b_lo = 1e-4 * a * a
    if b_hi is None:
        b_hi = 0.25 * a * a
    roots = solve_threshold(lambda b: triple_residual(a, b), b_lo, b_hi)
    if not roots:
        raise NumericalError(
            f"no triple-reconnection root of b in [{b_lo}, {b_hi}] for a={a}"
        )
    if len(roots) > 1:
        raise NumericalError(
            f"expected one triple-reconnection root, found {len(roots)} for a={a}"
        )
    b = roots[0].b_root
    k = k_of_b_II_III(a, b)
    check = residual_I_II(a, b, k)
    if abs(check) > 1e-9:
        raise NumericalError(
            f"triple point failed the I-II cross-check: residual {check} at (b={b}, k={k})"
        )
    return b, k


@dataclass(frozen=True)
class RegimeLabel:
    """Chain-pair regime at one parameter point along a b-sweep."""

    b: float
    chain_pair: str
    regime: str


def _regime_from_residual(res: float, b: float, tol: float) -> str:
    if abs(res) <= tol:
        return AT_RECONNECTION
    # Calibrated once against the figure sequence at (a=1.5, k=0.018):
    # residual * b > 0 is the dimerised side for both pairs, equivalently
    # H(saddle_lower) < H(saddle_upper) marks the dimerised configuration.
    return DIMERISED if res * b > 0.0 else BIRKHOFF


def regime(a: float, k: float, b: float) -> tuple[RegimeLabel, RegimeLabel]:
    """Regime labels for the I-II and II-III pairs at one (a, k, b).

    at_reconnection fires when the residual vanishes to tolerance measured in
    energy units: the I-II residual equals -24 b^3 times the saddle-energy
    difference, so its tolerance carries that factor (otherwise the artifact
    zero of the b^3 prefactor near b = 0 would masquerade as a threshold).
    """
    if b == 0.0:
        raise DomainError("regime undefined at the b = 0 domain hole")
    if a * a - 4.0 * b < 0.0:
        return (
            RegimeLabel(b, PAIR_I_II, CHAINS_ABSENT),
            RegimeLabel(b, PAIR_II_III, CHAINS_ABSENT),
        )
    tol_1 = RECONNECTION_TOL * 24.0 * abs(b) ** 3
    lab1 = _regime_from_residual(residual_I_II(a, b, k), b, tol_1)
    lab2 = _regime_from_residual(residual_II_III(a, b, k), b, RECONNECTION_TOL)
    return RegimeLabel(b, PAIR_I_II, lab1), RegimeLabel(b, PAIR_II_III, lab2)
