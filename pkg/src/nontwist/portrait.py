"""Flow of the interpolating Hamiltonian: integration, separatrices, contours.

Realizes the reconnection phenomenology as data: fixed-step RK4 flow traces
with an energy-drift audit, invariant-manifold branches seeded along saddle
eigenvectors, marching-squares level sets, a meander (non-graph) test, and
the chain-topology probe that classifies two chains as separated or
connected by their manifold approach distance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from ._field import hamiltonian_value
from .errors import DomainError, DriftBudgetError
from .hamiltonian import (
    CHAIN_I,
    CHAIN_II,
    CHAIN_III,
    Equilibrium,
    chain_saddle,
    equilibria,
    saddle_eigensystem,
)
from .maps import Params, PhasePoint
from .reconnection import PAIR_I_II, PAIR_II_III
from .trace import Trace

TWO_PI = 2.0 * math.pi

FORWARD = "forward"
BACKWARD = "backward"

SEPARATED = "separated"
CONNECTED = "connected"
AMBIGUOUS = "ambiguous"

_TERMINAL_NAMES = {
    kernels.EV_BUDGET: "step_budget",
    kernels.EV_RETURNED: "returned_to_saddle",
    kernels.EV_REACHED: "reached_other_saddle",
    kernels.EV_LEFT_WINDOW: "left_window",
}

BRANCH_NAMES = ("unstable+", "unstable-", "stable+", "stable-")


@dataclass(frozen=True)
class Window:
    """Rectangular viewing window on the annulus with a grid resolution."""

    y_min: float
    y_max: float
    x_min: float = 0.0
    x_max: float = TWO_PI
    nx: int = 512
    ny: int = 512

    def __post_init__(self):
        if not (self.y_min < self.y_max):
            raise DomainError(f"window needs y_min < y_max, got [{self.y_min}, {self.y_max}]")
        if not (self.x_min < self.x_max):
            raise DomainError(f"window needs x_min < x_max, got [{self.x_min}, {self.x_max}]")
        if self.nx < 2 or self.ny < 2:
            raise DomainError(f"window grid must be at least 2x2, got {self.nx}x{self.ny}")

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    def contains(self, pt: PhasePoint) -> bool:
        if not (self.y_min <= pt.y <= self.y_max):
            return False
        if self.x_max - self.x_min >= TWO_PI:
            return True
        return self.x_min <= pt.x <= self.x_max

    def as_dict(self) -> dict:
        return {
            "x_min": self.x_min, "x_max": self.x_max,
            "y_min": self.y_min, "y_max": self.y_max,
            "nx": self.nx, "ny": self.ny,
        }


def default_window(p: Params, pad: float = 0.35, nx: int = 512, ny: int = 512) -> Window:
    """Window spanning the full circle and the equilibria's y-extent, padded.

    The padding is a fraction of the y-extent (or 1.0 when only the chain-I
    pair exists and the extent is zero).
    """
    eqs = equilibria(p)
    ys = [eq.position.y for eq in eqs]
    lo, hi = min(ys), max(ys)
    span = hi - lo
    margin = pad * span if span > 0.0 else 1.0
    return Window(y_min=lo - margin, y_max=hi + margin, nx=nx, ny=ny)


def default_drift_budget(h0: float, n_steps: int) -> float:
    """Energy-drift error threshold: 1e-8 * (1 + |H0|) * sqrt(n_steps)."""
    return 1e-8 * (1.0 + abs(h0)) * math.sqrt(n_steps)


def integrate(p: Params, start: PhasePoint, dt: float, n_steps: int,
              direction: str = FORWARD, drift_budget: float | None = None) -> Trace:
    """Classical 4th-order fixed-step integration of +-X_H from start.

    Records every sample with its energy; x is wrapped for storage.  Raises
    DriftBudgetError when max |H - H0| exceeds the budget, which signals dt
    too large for the requested span.
    """
    if dt <= 0.0:
        raise DomainError(f"integration needs dt > 0, got {dt}")
    if n_steps < 1:
        raise DomainError(f"integration needs n_steps >= 1, got {n_steps}")
    if direction not in (FORWARD, BACKWARD):
        raise DomainError(f"direction must be 'forward' or 'backward', got {direction!r}")
    sign = 1.0 if direction == FORWARD else -1.0
    xs, ys = kernels.rk4_path(p.a, p.b, p.k, start.x, start.y, dt, n_steps, sign)
    energies = hamiltonian_value(p.a, p.b, p.k, xs, ys)
    budget = drift_budget
    if budget is None:
        budget = default_drift_budget(float(energies[0]), n_steps)
    drift = float(np.max(np.abs(energies - energies[0])))
    if drift > budget:
        raise DriftBudgetError(
            f"energy drift {drift:.3e} exceeds budget {budget:.3e} "
            f"(dt={dt} is too large for {n_steps} steps)"
        )
    return Trace.build(
        np.mod(xs, TWO_PI), ys, params=p, source="flow",
        metadata={"dt": dt, "n_steps": n_steps, "direction": direction,
                  "drift_budget": budget, "max_drift": drift},
    )


@dataclass(frozen=True)
class SeparatrixBranch:
    """One invariant-manifold branch and how its march terminated."""

    name: str
    trace: Trace
    terminal: str
    reached_label: str | None
    min_distances: dict[str, float]


@dataclass(frozen=True)
class SeparatrixBundle:
    """The four manifold branches of one saddle (unstable +-, stable +-)."""

    saddle: Equilibrium
    branches: tuple[SeparatrixBranch, ...]

    def branch(self, name: str) -> SeparatrixBranch:
        for br in self.branches:
            if br.name == name:
                return br
        raise KeyError(name)

    @property
    def terminal_events(self) -> dict[str, str]:
        return {br.name: br.terminal for br in self.branches}


def separatrices(p: Params, saddle: Equilibrium, eps: float | None = None,
                 step_budget: int = 2_000_000, dt: float = 1e-3,
                 window: Window | None = None, arrival_factor: float = 10.0,
                 arm_factor: float = 100.0, record_stride: int | None = None,
                 target_radii: dict[str, float] | None = None) -> SeparatrixBundle:
    """March the four separatrix branches of a hyperbolic equilibrium.

    Branches start at saddle +- eps along the unstable/stable eigenvector;
    unstable branches integrate forward, stable ones backward.  Each stops on
    the first of: re-entering the arrival ball (arrival_factor * eps) of its
    own saddle after having once left the arming ball (arm_factor * eps),
    entering the arrival ball of a different saddle, leaving the window, or
    exhausting the step budget.  target_radii overrides the arrival radius
    per saddle label (the chain-topology probe uses that).
    """
    eqs = equilibria(p)
    if eps is None:
        eps = 1e-6 * (1.0 + abs(saddle.position.y))
    if window is None:
        window = default_window(p)
    if record_stride is None:
        record_stride = max(1, round(0.04 / dt))
    lam, v_u, v_s = saddle_eigensystem(saddle, p)

    saddles = [eq for eq in eqs if eq.is_hyperbolic]
    labels = [eq.label for eq in saddles]
    if saddle.label not in labels:
        saddles.insert(0, saddle)
        labels.insert(0, saddle.label)
    source_idx = labels.index(saddle.label)
    tx = np.array([eq.position.x for eq in saddles])
    ty = np.array([eq.position.y for eq in saddles])
    radii = np.full(len(saddles), arrival_factor * eps)
    if target_radii:
        for lbl, r in target_radii.items():
            if lbl in labels:
                radii[labels.index(lbl)] = r
    radii2 = radii * radii
    arm_r2 = (arm_factor * eps) ** 2

    x0, y0 = saddle.position.x, saddle.position.y
    seeds = (
        ("unstable+", x0 + eps * v_u[0], y0 + eps * v_u[1], 1.0),
        ("unstable-", x0 - eps * v_u[0], y0 - eps * v_u[1], 1.0),
        ("stable+", x0 + eps * v_s[0], y0 + eps * v_s[1], -1.0),
        ("stable-", x0 - eps * v_s[0], y0 - eps * v_s[1], -1.0),
    )
    branches = []
    for name, sx, sy, direction in seeds:
        code, hit, steps, min_d2, xr, yr = kernels.rk4_branch(
            p.a, p.b, p.k, sx, sy, dt, direction, step_budget,
            tx, ty, radii2, source_idx, arm_r2,
            window.y_min, window.y_max, window.x_min, window.x_max,
            record_stride,
        )
        terminal = _TERMINAL_NAMES[code]
        reached = labels[hit] if code == kernels.EV_REACHED else None
        energies = hamiltonian_value(p.a, p.b, p.k, xr, yr)
        drift = float(np.max(np.abs(energies - energies[0])))
        budget = default_drift_budget(float(energies[0]), max(int(steps), 1))
        if drift > budget:
            raise DriftBudgetError(
                f"separatrix branch {name} of {saddle.label}: energy drift "
                f"{drift:.3e} exceeds budget {budget:.3e} (dt={dt} too large)"
            )
        trace = Trace.build(
            xr, yr, params=p, source="separatrix",
            metadata={
                "saddle": saddle.label, "branch": name, "eps": eps, "dt": dt,
                "direction": FORWARD if direction > 0 else BACKWARD,
                "steps": int(steps), "terminal": terminal,
                "window": window.as_dict(),
                "drift_budget": budget, "max_drift": drift,
            },
        )
        branches.append(SeparatrixBranch(
            name=name, trace=trace, terminal=terminal, reached_label=reached,
            min_distances={lbl: float(math.sqrt(d2)) for lbl, d2 in zip(labels, min_d2)},
        ))
    return SeparatrixBundle(saddle=saddle, branches=tuple(branches))


def level_curves(p: Params, h: float, window: Window) -> list[Trace]:
    """Marching-squares polylines of the level set H(x, y) = h on the window.

    Linear interpolation on cell edges; each connected polyline becomes one
    contour trace.  Saddle cells are disambiguated by the cell-center
    average.  Returns an empty list when the level misses the window.
    """
    xs = np.linspace(window.x_min, window.x_max, window.nx)
    ys = np.linspace(window.y_min, window.y_max, window.ny)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    Z = hamiltonian_value(p.a, p.b, p.k, X, Y)

    above = Z > h
    idx = (
        above[:-1, :-1].astype(np.int8)
        | (above[1:, :-1].astype(np.int8) << 1)
        | (above[1:, 1:].astype(np.int8) << 2)
        | (above[:-1, 1:].astype(np.int8) << 3)
    )
    cells = np.argwhere((idx != 0) & (idx != 15))
    if len(cells) == 0:
        return []

    cell_var = 0.0
    pts: dict[tuple, tuple[float, float]] = {}

    def edge_point(eid):
        pt = pts.get(eid)
        if pt is not None:
            return pt
        kind, i, j = eid
        if kind == 0:  # horizontal edge (i,j)-(i+1,j)
            v1, v2 = Z[i, j], Z[i + 1, j]
            t = (h - v1) / (v2 - v1)
            pt = (xs[i] + t * (xs[i + 1] - xs[i]), ys[j])
        else:  # vertical edge (i,j)-(i,j+1)
            v1, v2 = Z[i, j], Z[i, j + 1]
            t = (h - v1) / (v2 - v1)
            pt = (xs[i], ys[j] + t * (ys[j + 1] - ys[j]))
        pts[eid] = pt
        return pt

    _TABLE = {
        1: ((0, 1),), 2: ((1, 2),), 3: ((0, 2),), 4: ((2, 3),),
        6: ((1, 3),), 7: ((0, 3),), 8: ((3, 0),), 9: ((1, 3),),
        11: ((3, 2),), 12: ((2, 0),), 13: ((1, 2),), 14: ((0, 1),),
    }
    adjacency: dict[tuple, list] = {}
    for i, j in cells:
        case = int(idx[i, j])
        edges = (
            (1, i, j),          # left
            (0, i, j),          # bottom
            (1, i + 1, j),      # right
            (0, i, j + 1),      # top
        )
        corners = (Z[i, j], Z[i + 1, j], Z[i + 1, j + 1], Z[i, j + 1])
        var = max(corners) - min(corners)
        if var > cell_var:
            cell_var = var
        if case in (5, 10):
            center_above = (sum(corners) * 0.25) > h
            if case == 5:
                pairs = ((0, 3), (1, 2)) if center_above else ((0, 1), (2, 3))
            else:
                pairs = ((0, 1), (2, 3)) if center_above else ((0, 3), (1, 2))
        else:
            pairs = _TABLE[case]
        for e1, e2 in pairs:
            a_, b_ = edges[e1], edges[e2]
            adjacency.setdefault(a_, []).append(b_)
            adjacency.setdefault(b_, []).append(a_)

    def walk(start):
        chain = [start]
        visited.add(start)
        cur, prev = start, None
        while True:
            nxt = None
            for cand in adjacency[cur]:
                if cand != prev and cand not in visited:
                    nxt = cand
                    break
            if nxt is None:
                break
            prev, cur = cur, nxt
            visited.add(cur)
            chain.append(cur)
        return chain

    visited: set = set()
    polylines = []
    for start in adjacency:  # open chains first, from their endpoints
        if start not in visited and len(adjacency[start]) == 1:
            polylines.append(walk(start))
    for start in adjacency:  # remaining closed loops
        if start not in visited:
            chain = walk(start)
            chain.append(start)
            polylines.append(chain)

    traces = []
    for chain in polylines:
        if len(chain) < 2:
            continue
        px = np.array([edge_point(e)[0] for e in chain])
        py = np.array([edge_point(e)[1] for e in chain])
        traces.append(Trace.build(
            px, py, params=p, source="contour",
            metadata={"level": h, "window": window.as_dict(),
                      "cell_tolerance": cell_var},
        ))
    return traces


def is_meander(t: Trace, x_tol: float | None = None, y_tol: float | None = None) -> bool:
    """True when the polyline is not a graph over the (unwrapped) angle.

    Two triggers: the unwrapped x-sequence backtracks by more than x_tol in
    both directions (a fold), or two samples share an x-bin of width x_tol
    while differing by more than y_tol in y (a vertical segment).  Meant for
    rotational invariant curves and contour polylines.
    """
    if x_tol is None:
        x_tol = TWO_PI / 1000.0
    if y_tol is None:
        wmeta = t.metadata.get("window")
        if wmeta is not None:
            height = wmeta["y_max"] - wmeta["y_min"]
        else:
            height = max(float(np.max(t.ys) - np.min(t.ys)), 1.0)
        y_tol = 1e-3 * height
    if len(t) < 2:
        return False
    xu = t.xs_unwrapped()
    fold_up = float(np.max(np.maximum.accumulate(xu) - xu))
    fold_dn = float(np.max(xu - np.minimum.accumulate(xu)))
    if min(fold_up, fold_dn) > x_tol:
        return True
    ys = np.asarray(t.ys)
    base = float(np.min(xu))
    for shift in (0.0, 0.5 * x_tol):
        bins = np.floor((xu - base + shift) / x_tol).astype(np.int64)
        order = np.argsort(bins, kind="stable")
        bb = bins[order]
        yy = ys[order]
        starts = np.flatnonzero(np.r_[True, bb[1:] != bb[:-1]])
        ends = np.r_[starts[1:], len(bb)]
        for s, e in zip(starts, ends):
            if e - s >= 2 and float(yy[s:e].max() - yy[s:e].min()) > y_tol:
                return True
    return False


@dataclass(frozen=True)
class PortraitSettings:
    """Settings for portrait generation; defaults reproduce the figure runs."""

    dt: float = 0.05
    t_total: float = 400.0
    seeds_per_line: int = 12
    include_separatrices: bool = True
    drift_budget: float | None = None
    separatrix_dt: float = 1e-3
    separatrix_budget: int = 2_000_000


def default_seeds(p: Params, window: Window, per_line: int = 12) -> list[PhasePoint]:
    """Seeds along the two symmetry lines, evenly spaced over the window height."""
    ys = np.linspace(window.y_min, window.y_max, per_line + 2)[1:-1]
    return [PhasePoint(x0, float(y)) for x0 in (0.0, math.pi) for y in ys]


@dataclass(frozen=True)
class PortraitResult:
    """Traces of one portrait run plus per-seed failures (drift budget hits)."""

    traces: list[Trace]
    bundles: list[SeparatrixBundle]
    failures: list[dict]


def portrait(p: Params, window: Window | None = None,
             seeds: list[PhasePoint] | None = None,
             settings: PortraitSettings | None = None) -> PortraitResult:
    """Phase-portrait dataset: seed traces plus in-window separatrix bundles.

    Each seed is integrated half the total time backward and half forward and
    the halves concatenated into one flow trace.  Per-seed integration
    failures are collected, not raised, so a portrait degrades gracefully.
    Output order is deterministic: seed order, then saddles in equilibria
    order with branches in (unstable+, unstable-, stable+, stable-) order.
    """
    settings = settings or PortraitSettings()
    if window is None:
        window = default_window(p)
    if seeds is None:
        seeds = default_seeds(p, window, settings.seeds_per_line)
    n_half = max(1, round(0.5 * settings.t_total / settings.dt))
    traces: list[Trace] = []
    failures: list[dict] = []
    for i, seed in enumerate(seeds):
        try:
            back = integrate(p, seed, settings.dt, n_half, BACKWARD,
                             drift_budget=settings.drift_budget)
            fwd = integrate(p, seed, settings.dt, n_half, FORWARD,
                            drift_budget=settings.drift_budget)
        except DriftBudgetError as exc:
            failures.append({"seed_index": i, "seed": (seed.x, seed.y), "error": str(exc)})
            continue
        xs = np.concatenate([back.xs[::-1], fwd.xs[1:]])
        ys = np.concatenate([back.ys[::-1], fwd.ys[1:]])
        tr = Trace.build(
            xs, ys, params=p, source="flow",
            metadata={
                "seed_index": i, "seed": (seed.x, seed.y), "dt": settings.dt,
                "t_total": settings.t_total, "window": window.as_dict(),
                "drift_budget": back.metadata["drift_budget"],
                "max_drift": max(back.metadata["max_drift"], fwd.metadata["max_drift"]),
            },
        )
        traces.append(tr)
    bundles: list[SeparatrixBundle] = []
    if settings.include_separatrices and p.b != 0.0:
        for eq in equilibria(p):
            if eq.is_hyperbolic and window.contains(eq.position):
                bundle = separatrices(
                    p, eq, dt=settings.separatrix_dt,
                    step_budget=settings.separatrix_budget, window=window,
                )
                bundles.append(bundle)
                traces.extend(br.trace for br in bundle.branches)
    return PortraitResult(traces=traces, bundles=bundles, failures=failures)


@dataclass(frozen=True)
class TopologyResult:
    """Verdict of the chain-topology probe with its decision distances."""

    verdict: str
    min_approach: float
    connect_radius: float
    separation_floor: float
    bundles: tuple[SeparatrixBundle, SeparatrixBundle]


_PAIR_CHAINS = {PAIR_I_II: (CHAIN_I, CHAIN_II), PAIR_II_III: (CHAIN_II, CHAIN_III)}


def chain_topology(p: Params, pair: str, dt: float = 2e-3,
                   step_budget: int = 2_000_000, eps: float | None = None,
                   connect_factor: float = 0.05, floor_factor: float = 0.25,
                   window: Window | None = None) -> TopologyResult:
    """Separated / connected / ambiguous verdict for a neighboring chain pair.

    Runs the separatrix bundles of both saddles and takes the minimum
    approach of any branch to the opposite saddle.  The decision radii scale
    with the saddles' vertical separation: connected below connect_factor
    of it, separated above floor_factor, ambiguous between (reported with
    the distance).  Scale-relative radii keep the verdict meaningful at
    thresholds known only to a few printed digits, where the manifolds miss
    each other by far more than the seeding offset.
    """
    if pair not in _PAIR_CHAINS:
        raise DomainError(f"unknown chain pair {pair!r}")
    c1, c2 = _PAIR_CHAINS[pair]
    s1 = chain_saddle(p, c1)
    s2 = chain_saddle(p, c2)
    scale = abs(s1.position.y - s2.position.y)
    if scale == 0.0:
        raise DomainError(f"saddles of chains {c1} and {c2} coincide")
    connect_radius = connect_factor * scale
    separation_floor = floor_factor * scale
    bundles = []
    min_approach = math.inf
    for src, other in ((s1, s2), (s2, s1)):
        bundle = separatrices(
            p, src, eps=eps, step_budget=step_budget, dt=dt, window=window,
            target_radii={other.label: connect_radius},
        )
        bundles.append(bundle)
        for br in bundle.branches:
            d = br.min_distances.get(other.label, math.inf)
            if d < min_approach:
                min_approach = d
    if min_approach <= connect_radius:
        verdict = CONNECTED
    elif min_approach >= separation_floor:
        verdict = SEPARATED
    else:
        verdict = AMBIGUOUS
    return TopologyResult(
        verdict=verdict, min_approach=min_approach,
        connect_radius=connect_radius, separation_floor=separation_floor,
        bundles=tuple(bundles),
    )
