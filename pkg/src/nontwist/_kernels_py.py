"""Pure-Python kernels: map iteration and RK4 flow marching.

This module is the fallback selected at import time when the compiled
extension (``nontwist._kernels``) is missing.  The two implementations keep
bitwise-identical arithmetic: same evaluation order, same libm calls, no
re-association.  Treat any edit here as an edit to ``_kernels.pyx`` too.

Hot loops live here on purpose; everything above this layer is plain numpy
and dataclasses.
"""
import math

import numpy as np

TWO_PI = 6.283185307179586

# rk4_branch terminal codes
EV_BUDGET = 0
EV_RETURNED = 1
EV_REACHED = 2
EV_LEFT_WINDOW = 3


def map_orbit(a, b, k, x0, y0, n):
    """Iterate the cubic nontwist map n times from (x0, y0), x0 in [0, 2*pi).

    Returns (xs, ys, windings): wrapped angles, momenta, and exact integer
    winding counts so that the lift angle is X_i = xs[i] + 2*pi*windings[i].
    The y update uses the wrapped angle, which makes the projected lift orbit
    agree with the wrapped orbit bitwise.
    """
    xs = np.empty(n + 1, dtype=np.float64)
    ys = np.empty(n + 1, dtype=np.float64)
    ws = np.empty(n + 1, dtype=np.int64)
    sin = math.sin
    floor = math.floor
    x = x0
    y = y0
    wind = 0
    xs[0] = x
    ys[0] = y
    ws[0] = 0
    for i in range(1, n + 1):
        yp = y + k * sin(x)
        dx = yp * (1.0 - yp * (a - b * yp))
        t = x + dx
        w = int(floor(t / TWO_PI))
        xn = t - TWO_PI * w
        if xn >= TWO_PI:
            xn -= TWO_PI
            w += 1
        if xn < 0.0:
            xn += TWO_PI
            w -= 1
        x = xn
        y = yp
        wind += w
        xs[i] = x
        ys[i] = y
        ws[i] = wind
    return xs, ys, ws


def rk4_path(a, b, k, x0, y0, dt, n_steps, direction):
    """Classical fixed-step RK4 on the interpolating-Hamiltonian vector field.

    direction=+1 integrates the field, -1 its negative.  x accumulates
    without wrapping.  Returns (xs, ys) with n_steps+1 samples.
    """
    xs = np.empty(n_steps + 1, dtype=np.float64)
    ys = np.empty(n_steps + 1, dtype=np.float64)
    sin = math.sin
    h = dt * direction
    x = x0
    y = y0
    xs[0] = x
    ys[0] = y
    for i in range(1, n_steps + 1):
        k1x = y * (1.0 - y * (a - b * y))
        k1y = k * sin(x)
        x2 = x + 0.5 * h * k1x
        y2 = y + 0.5 * h * k1y
        k2x = y2 * (1.0 - y2 * (a - b * y2))
        k2y = k * sin(x2)
        x3 = x + 0.5 * h * k2x
        y3 = y + 0.5 * h * k2y
        k3x = y3 * (1.0 - y3 * (a - b * y3))
        k3y = k * sin(x3)
        x4 = x + h * k3x
        y4 = y + h * k3y
        k4x = y4 * (1.0 - y4 * (a - b * y4))
        k4y = k * sin(x4)
        x = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        y = y + (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        xs[i] = x
        ys[i] = y
    return xs, ys


def _circle_d2(x, y, tx, ty):
    d = x - tx
    d = d - TWO_PI * math.floor(d / TWO_PI)
    if d > math.pi:
        d = TWO_PI - d
    dy = y - ty
    return d * d + dy * dy


def rk4_branch(a, b, k, x0, y0, dt, direction, max_steps,
               targets_x, targets_y, radii2, source_idx, arm_r2,
               y_lo, y_hi, x_lo, x_hi, record_stride):
    """March one invariant-manifold branch until a terminal event.

    Events, in priority order per step: entering the detection disk of a
    target (the source target only counts after the branch has once left its
    arming disk of radius sqrt(arm_r2)); leaving the window; exhausting the
    step budget.  Distances use the circle metric in x.

    Returns (code, hit_index, steps_done, min_d2, xs_rec, ys_rec) where
    min_d2 holds the squared minimum approach to every target and the
    recorded points are wrapped, taken every record_stride steps plus the
    terminal point.
    """
    sin = math.sin
    floor = math.floor
    n_t = len(targets_x)
    min_d2 = np.full(n_t, np.inf, dtype=np.float64)
    n_rec_max = max_steps // record_stride + 3
    xr = np.empty(n_rec_max, dtype=np.float64)
    yr = np.empty(n_rec_max, dtype=np.float64)
    check_x = (x_hi - x_lo) < TWO_PI
    h = dt * direction
    x = x0
    y = y0
    xr[0] = x - TWO_PI * floor(x / TWO_PI)
    yr[0] = y
    n_rec = 1
    armed = False
    code = EV_BUDGET
    hit = -1
    step = 0
    while step < max_steps:
        k1x = y * (1.0 - y * (a - b * y))
        k1y = k * sin(x)
        x2 = x + 0.5 * h * k1x
        y2 = y + 0.5 * h * k1y
        k2x = y2 * (1.0 - y2 * (a - b * y2))
        k2y = k * sin(x2)
        x3 = x + 0.5 * h * k2x
        y3 = y + 0.5 * h * k2y
        k3x = y3 * (1.0 - y3 * (a - b * y3))
        k3y = k * sin(x3)
        x4 = x + h * k3x
        y4 = y + h * k3y
        k4x = y4 * (1.0 - y4 * (a - b * y4))
        k4y = k * sin(x4)
        x = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        y = y + (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        step += 1
        if step % record_stride == 0:
            xr[n_rec] = x - TWO_PI * floor(x / TWO_PI)
            yr[n_rec] = y
            n_rec += 1
        done = False
        for j in range(n_t):
            d2 = _circle_d2(x, y, targets_x[j], targets_y[j])
            if d2 < min_d2[j]:
                min_d2[j] = d2
            if j == source_idx:
                if not armed:
                    if d2 > arm_r2:
                        armed = True
                elif d2 <= radii2[j]:
                    code = EV_RETURNED
                    hit = j
                    done = True
            elif d2 <= radii2[j]:
                code = EV_REACHED
                hit = j
                done = True
        if not done:
            if y < y_lo or y > y_hi:
                code = EV_LEFT_WINDOW
                done = True
            elif check_x:
                xw = x - TWO_PI * floor(x / TWO_PI)
                if xw < x_lo or xw > x_hi:
                    code = EV_LEFT_WINDOW
                    done = True
        if done:
            break
    if step % record_stride != 0 or n_rec == 0:
        xr[n_rec] = x - TWO_PI * floor(x / TWO_PI)
        yr[n_rec] = y
        n_rec += 1
    return code, hit, step, min_d2, xr[:n_rec].copy(), yr[:n_rec].copy()
