"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines.  Tolerances are fixed here, not calibrated elsewhere.
"""
import json
import math
import os
import time

import numpy as np
import pytest

from nontwist import (
    Params,
    PhasePoint,
    chain_topology,
    energy,
    equilibria,
    extremal_rotation_numbers,
    is_meander,
    level_curves,
    lift_orbit,
    LiftPoint,
    orbit,
    portrait,
    residual_I_II,
    rotation_profile,
    twistless_circles,
    Window,
)
from nontwist.cli import main as cli_main
from nontwist.io import read_json
from nontwist.portrait import PortraitSettings

TWO_PI = 2.0 * math.pi
A, K = 1.5, 0.018


def _announce(num, text):
    print(f"ACCEPTANCE {num:02d}: PASS - {text}")


def run_cli(args, cwd):
    old = os.getcwd()
    os.chdir(cwd)
    try:
        return cli_main(args)
    finally:
        os.chdir(old)


def test_c01_first_reconnection_threshold(tmp_path):
    t0 = time.perf_counter()
    code = run_cli(["thresholds", "--a", "1.5", "--k", "0.018",
                    "--b-range", "-3:-1"], tmp_path)
    elapsed = time.perf_counter() - t0
    assert code == 0
    roots = read_json(tmp_path / "thresholds.json")["i_ii"]["roots"]
    assert len(roots) == 1
    assert abs(roots[0]["b_root"] - (-1.9538)) <= 1e-3
    assert elapsed < 1.0, f"took {elapsed:.2f}s"
    _announce(1, f"b_1rec = {roots[0]['b_root']:.6f} (+-1e-3 of -1.9538), {elapsed:.2f}s")


def test_c02_second_reconnection_threshold(tmp_path):
    t0 = time.perf_counter()
    code = run_cli(["thresholds", "--a", "1.5", "--k", "0.018",
                    "--b-range", "0.4:0.56"], tmp_path)
    elapsed = time.perf_counter() - t0
    assert code == 0
    roots = read_json(tmp_path / "thresholds.json")["ii_iii"]["roots"]
    assert len(roots) == 1
    assert abs(roots[0]["b_root"] - 0.53168) <= 1e-4
    assert elapsed < 1.0, f"took {elapsed:.2f}s"
    _announce(2, f"b_2rec = {roots[0]['b_root']:.6f} (+-1e-4 of 0.53168), {elapsed:.2f}s")


def test_c03_triple_point(tmp_path):
    code = run_cli(["thresholds", "--a", "1.5", "--triple"], tmp_path)
    assert code == 0
    triple = read_json(tmp_path / "thresholds.json")["triple"]
    assert abs(triple["b"] - 0.5) <= 1e-9
    assert abs(triple["k"] - 0.0625) <= 1e-9
    assert abs(residual_I_II(1.5, triple["b"], triple["k"])) <= 1e-9
    _announce(3, f"triple point (b, k) = ({triple['b']:.12f}, {triple['k']:.12f})")


def test_c04_equilibrium_census():
    b_values = [-4.0, -1.9538, -0.5, 0.3, 0.5, 0.53168, 0.54, 0.5625, 0.6]
    expected = [6, 6, 6, 6, 6, 6, 6, 4, 2]
    counts = []
    for b in b_values:
        eqs = equilibria(Params(A, b, K))
        counts.append(len(eqs))
        if b == 0.5625:
            degenerate = [eq for eq in eqs if eq.label in ("A", "B")]
            assert len(degenerate) == 2
            for eq in degenerate:
                assert abs(eq.position.y - 1.0 / math.sqrt(0.5625)) <= 1e-12
                assert eq.stability == "degenerate"
    assert counts == expected
    _announce(4, f"census over b = {b_values} -> {counts}")


def test_c05_stability_oracle():
    rng = np.random.default_rng(2024)
    # positive-b side: the canonical (h, e, e, h, h, e) pattern
    done = 0
    while done < 50:
        a = rng.uniform(0.5, 3.0)
        b = rng.uniform(1e-6, a * a / 4 * 0.999999)
        k = rng.uniform(1e-6, 0.1)
        eqs = equilibria(Params(a, b, k))
        if len(eqs) != 6:
            continue
        done += 1
        pattern = tuple(eq.stability[0] for eq in eqs)
        assert pattern == ("h", "e", "e", "h", "h", "e"), (a, b, k, pattern)
    # negative-b side: alternation along each symmetry line survives the
    # label swap of chain III
    done = 0
    while done < 50:
        a = rng.uniform(0.5, 3.0)
        b = rng.uniform(-5.0, -1e-3)
        k = rng.uniform(1e-6, 0.1)
        eqs = equilibria(Params(a, b, k))
        assert len(eqs) == 6
        done += 1
        for line_x in (0.0, math.pi):
            row = sorted(
                (eq for eq in eqs if abs(eq.position.x - line_x) < 1e-9),
                key=lambda eq: eq.position.y,
            )
            assert len(row) == 3
            for lo, hi in zip(row, row[1:]):
                assert lo.stability != hi.stability
    _announce(5, "(h,e,e,h,h,e) on 50 random b>0 draws; alternation on 50 b<0 draws")


def test_c06_reconnection_topology():
    t0 = time.perf_counter()
    verdicts = {}
    for b in (0.50, 0.53168, 0.54):
        verdicts[b] = chain_topology(Params(A, b, K), "II_III").verdict
    elapsed = time.perf_counter() - t0
    assert verdicts == {0.50: "separated", 0.53168: "connected", 0.54: "separated"}
    assert elapsed < 30.0, f"took {elapsed:.1f}s"
    _announce(6, f"II-III topology {verdicts}, {elapsed:.1f}s")


def test_c07_energy_conservation():
    p = Params(A, 0.5, K)
    res = portrait(p)
    drifts = [t.energy_drift() for t in res.traces if t.source == "flow"]
    assert drifts and not res.failures
    worst = max(drifts)
    assert worst <= 1e-8, f"worst drift {worst:.3e}"
    # halve dt, same seeds and total time
    fine = PortraitSettings(dt=PortraitSettings.dt / 2.0)
    res_fine = portrait(p, settings=fine)
    worst_fine = max(t.energy_drift() for t in res_fine.traces if t.source == "flow")
    assert worst_fine > 0.0
    assert worst / worst_fine >= 12.0, (worst, worst_fine)
    _announce(7, f"worst drift {worst:.2e} <= 1e-8; halving dt gives {worst / worst_fine:.1f}x")


def test_c08_rotation_number_oracle():
    rng = np.random.default_rng(77)
    for _ in range(100):
        a = rng.uniform(0.3, 3.0)
        b = rng.uniform(-3.0, 3.0)
        y0 = rng.uniform(-1.5, 2.5)
        x0 = rng.uniform(0.0, TWO_PI)
        p = Params(a, b, 0.0)
        want = rotation_profile(p, y0) / TWO_PI
        for n in (1, 1000):
            xs, _, ws = lift_orbit(p, LiftPoint(x0, y0), n)
            rho = (float(ws[n]) + (xs[n] - xs[0]) / TWO_PI) / n
            assert abs(rho - want) <= 1e-12, (a, b, y0, n, rho, want)
    _announce(8, "k=0 lift quotient equals F(y)/2pi to 1e-12 at n=1 and n=1000, 100 draws")


def test_c09_extremal_rotation_cross_check():
    # verbatim closed forms against the direct profile values; |b| kept off
    # the b -> 0 cancellation regime of the printed surd expressions
    rng = np.random.default_rng(99)
    done = 0
    while done < 100:
        a = rng.uniform(0.05, 5.0)
        b = rng.uniform(-5.0, a * a / 3.0)
        if abs(b) < 1e-3 * max(1.0, a * a):
            continue
        done += 1
        p = Params(a, b)
        tc = twistless_circles(p)
        rho1, rho2 = extremal_rotation_numbers(p)
        assert abs(rho1 - tc.rho_c1) <= 1e-10 * abs(tc.rho_c1)
        assert abs(rho2 - tc.rho_c2) <= 1e-10 * abs(tc.rho_c2)
    _announce(9, "closed forms match F(y_Ci)/2pi to 1e-10 relative on 100 draws")


def test_c10_meander_detection():
    p = Params(A, -4.0, K)
    eqs = {eq.label: eq for eq in equilibria(p)}
    h_mid = 0.5 * (energy(p, eqs["P1"].position) + energy(p, eqs["P4"].position))
    curves = level_curves(p, h_mid, Window(y_min=-0.6, y_max=1.0))
    rotational = [
        c for c in curves
        if c.xs_unwrapped().max() - c.xs_unwrapped().min() >= TWO_PI - 0.1
    ]
    assert rotational
    assert all(is_meander(c) for c in rotational)
    # and no unperturbed circle orbit is ever flagged
    rng = np.random.default_rng(55)
    for _ in range(20):
        p0 = Params(rng.uniform(0.3, 3.0), rng.uniform(-3.0, 3.0), 0.0)
        tr = orbit(p0, PhasePoint(rng.uniform(0, TWO_PI), rng.uniform(-2, 2.5)), 300)
        assert not is_meander(tr)
    _announce(10, "mid-level curve at b=-4 is a meander; k=0 circles are not")
