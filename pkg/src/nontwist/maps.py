"""The cubic nontwist area-preserving map on the annulus T x R.

The map sends (x, y) to (x', y') with

    y' = y + k*sin(x)
    x' = x + F(y')  (mod 2*pi),      F(y) = y - a*y^2 + b*y^3

evaluated in that order (y first), which makes the update explicit and
exactly area-preserving.  F is the rotation-advance profile; its derivative
F'(y) = 1 - 2*a*y + 3*b*y^2 carries the local twist sign.  For a^2 - 3b >= 0
the profile has two critical ordinates (the twistless circles), which is the
regime everything downstream cares about.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from ._backend import kernels
from .errors import DomainError
from .trace import Trace

TWO_PI = 2.0 * math.pi


def wrap_angle(x: float) -> float:
    """Reduce x to [0, 2*pi) with a floor-based reduction."""
    r = x - TWO_PI * math.floor(x / TWO_PI)
    if r >= TWO_PI:
        r -= TWO_PI
    if r < 0.0:
        r += TWO_PI
    return r


@dataclass(frozen=True)
class Params:
    """Map/Hamiltonian parameter triple (a, b, k).

    a > 0 and b are the shape parameters of the cubic profile, k >= 0 the
    perturbation amplitude.  b may be any real; operations that need b != 0
    or a sign condition on a^2 - 3b / a^2 - 4b guard themselves.
    """

    a: float
    b: float
    k: float = 0.0

    def __post_init__(self):
        if not (self.a > 0.0) or not math.isfinite(self.a):
            raise DomainError(f"parameter a must be positive and finite, got {self.a}")
        if not (self.k >= 0.0) or not math.isfinite(self.k):
            raise DomainError(f"parameter k must be >= 0 and finite, got {self.k}")
        if not math.isfinite(self.b):
            raise DomainError(f"parameter b must be finite, got {self.b}")

    @property
    def twist_discriminant(self) -> float:
        """a^2 - 3b; nonnegative exactly on the nontwist regime."""
        return self.a * self.a - 3.0 * self.b

    @property
    def equilibrium_discriminant(self) -> float:
        """a^2 - 4b; sign controls the 6/4/2 equilibrium count."""
        return self.a * self.a - 4.0 * self.b

    @property
    def is_nontwist(self) -> bool:
        return self.twist_discriminant >= 0.0


@dataclass(frozen=True)
class PhasePoint:
    """Point on the annulus: angle x normalized to [0, 2*pi), momentum y."""

    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", wrap_angle(self.x))


@dataclass(frozen=True)
class LiftPoint:
    """Point of the lift to the universal cover.

    Stored as the wrapped representative plus an exact integer winding count,
    so iterating the lift reproduces the annulus orbit bitwise and the
    unwrapped angle X = x + 2*pi*winding is available without error
    accumulation.
    """

    x: float
    y: float
    winding: int = 0

    def __post_init__(self):
        # normalizing x must not move the point: fold wraps into the winding
        w = int(math.floor(self.x / TWO_PI))
        xn = self.x - TWO_PI * w
        if xn >= TWO_PI:
            xn -= TWO_PI
            w += 1
        if xn < 0.0:
            xn += TWO_PI
            w -= 1
        object.__setattr__(self, "x", xn)
        object.__setattr__(self, "winding", self.winding + w)

    @classmethod
    def from_unwrapped(cls, X: float, y: float) -> "LiftPoint":
        return cls(X, y)

    @property
    def X(self) -> float:
        """Unwrapped angle."""
        return self.x + TWO_PI * self.winding

    @property
    def Y(self) -> float:
        return self.y

    def project(self) -> PhasePoint:
        return PhasePoint(self.x, self.y)


@dataclass(frozen=True)
class TwistlessCircles:
    """The two critical circles of the rotation profile and their rotation numbers."""

    y_c1: float
    y_c2: float
    rho_c1: float
    rho_c2: float


def rotation_profile(p: Params, y: float) -> float:
    """Angle advance per iterate at momentum y: F(y) = y - a*y^2 + b*y^3."""
    return y * (1.0 - y * (p.a - p.b * y))


def twist_derivative(p: Params, y: float) -> float:
    """F'(y) = 1 - 2*a*y + 3*b*y^2; its sign is the local twist sign."""
    return 1.0 - 2.0 * p.a * y + 3.0 * p.b * y * y


def step(p: Params, pt: PhasePoint) -> PhasePoint:
    """One map iterate: y' = y + k*sin(x) first, then x' = x + F(y') mod 2*pi."""
    yp = pt.y + p.k * math.sin(pt.x)
    return PhasePoint(pt.x + rotation_profile(p, yp), yp)


def lift_step(p: Params, lp: LiftPoint) -> LiftPoint:
    """One iterate of the lift: same update, angle accumulates without wrapping."""
    yp = lp.y + p.k * math.sin(lp.x)
    dx = rotation_profile(p, yp)
    t = lp.x + dx
    w = int(math.floor(t / TWO_PI))
    xn = t - TWO_PI * w
    if xn >= TWO_PI:
        xn -= TWO_PI
        w += 1
    if xn < 0.0:
        xn += TWO_PI
        w -= 1
    return LiftPoint(xn, yp, lp.winding + w)


def orbit(p: Params, pt: PhasePoint, n: int) -> Trace:
    """Trace of n map iterates (n+1 points) starting at pt."""
    if n < 0:
        raise DomainError(f"orbit length must be >= 0, got {n}")
    xs, ys, _ = kernels.map_orbit(p.a, p.b, p.k, pt.x, pt.y, n)
    return Trace.build(xs, ys, params=p, source="map_orbit", metadata={"n": n})


def lift_orbit(p: Params, lp: LiftPoint, n: int):
    """Arrays (xs, ys, windings) of n lift iterates; xs wrapped, windings exact."""
    if n < 0:
        raise DomainError(f"orbit length must be >= 0, got {n}")
    xs, ys, ws = kernels.map_orbit(p.a, p.b, p.k, lp.x, lp.y, n)
    return xs, ys, ws + lp.winding


def rotation_number_numeric(p: Params, pt: PhasePoint, n: int) -> float:
    """Finite-n rotation number estimate (X_n - X_0) / (2*pi*n) from the lift.

    This is the raw quotient at the given n, no extrapolation; it converges to
    the rotation number as n grows.  For k = 0 it is exact at every n.
    """
    if n < 1:
        raise DomainError(f"rotation number needs n >= 1, got {n}")
    xs, _, ws = kernels.map_orbit(p.a, p.b, p.k, pt.x, pt.y, n)
    return (float(ws[n]) + (xs[n] - xs[0]) / TWO_PI) / n


def _require_twistless(p: Params) -> float:
    if p.b == 0.0:
        raise DomainError("twistless circles need b != 0 (profile is quadratic)")
    d = p.twist_discriminant
    if d < 0.0:
        raise DomainError(
            f"no twistless circles: a^2 - 3b = {d} < 0 (map is twist everywhere)"
        )
    return d


def twistless_circles(p: Params) -> TwistlessCircles:
    """Ordinates of the two zero-twist circles and the rotation numbers on them.

    C1 sits at (a + sqrt(a^2-3b)) / (3b); C2 at the conjugate root, evaluated
    as 1 / (a + sqrt(a^2-3b)) which is the same number without cancellation.
    At a^2 = 3b the circles coincide at a/(3b).
    """
    d = _require_twistless(p)
    s = math.sqrt(d)
    y1 = (p.a + s) / (3.0 * p.b)
    y2 = 1.0 / (p.a + s)
    return TwistlessCircles(
        y_c1=y1,
        y_c2=y2,
        rho_c1=rotation_profile(p, y1) / TWO_PI,
        rho_c2=rotation_profile(p, y2) / TWO_PI,
    )


def extremal_rotation_numbers(p: Params) -> tuple[float, float]:
    """Closed-form rotation numbers on C1 and C2.

    Evaluated exactly as the closed forms are written (surds over 54*pi*b^2);
    they agree with F(y_Ci)/(2*pi) to roundoff.  For b > 0 the C1 value is the
    local minimum of the rotation number and the C2 value the local maximum.
    """
    d = _require_twistless(p)
    s = math.sqrt(d)
    a = p.a
    b = p.b
    den = 54.0 * math.pi * b * b
    rho1 = (-2.0 * a**3 - 3.0 * a * a * s + 9.0 * a * b + (a * a + 6.0 * b) * s) / den
    rho2 = (-2.0 * a**3 + 3.0 * a * a * s + 9.0 * a * b - (a * a + 6.0 * b) * s) / den
    return rho1, rho2
