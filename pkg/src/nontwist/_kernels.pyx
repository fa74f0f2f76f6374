# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: map iteration and RK4 flow marching.

Mirror of ``_kernels_py`` with identical arithmetic (same evaluation order,
same libm).  Compiled without -ffast-math so both backends stay
bitwise-compatible.  Keep the two modules in lockstep.
"""
from libc.math cimport sin, floor

import numpy as np

cdef double TWO_PI = 6.283185307179586
cdef double PI = 3.141592653589793

EV_BUDGET = 0
EV_RETURNED = 1
EV_REACHED = 2
EV_LEFT_WINDOW = 3


def map_orbit(double a, double b, double k, double x0, double y0, long n):
    """Iterate the cubic nontwist map n times; see _kernels_py.map_orbit."""
    xs = np.empty(n + 1, dtype=np.float64)
    ys = np.empty(n + 1, dtype=np.float64)
    ws = np.empty(n + 1, dtype=np.int64)
    cdef double[::1] xv = xs
    cdef double[::1] yv = ys
    cdef long[::1] wv = ws
    cdef double x = x0, y = y0, yp, dx, t, xn
    cdef long wind = 0, w, i
    xv[0] = x
    yv[0] = y
    wv[0] = 0
    for i in range(1, n + 1):
        yp = y + k * sin(x)
        dx = yp * (1.0 - yp * (a - b * yp))
        t = x + dx
        w = <long>floor(t / TWO_PI)
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
        xv[i] = x
        yv[i] = y
        wv[i] = wind
    return xs, ys, ws


def rk4_path(double a, double b, double k, double x0, double y0,
             double dt, long n_steps, double direction):
    """Fixed-step RK4 path, x unwrapped; see _kernels_py.rk4_path."""
    xs = np.empty(n_steps + 1, dtype=np.float64)
    ys = np.empty(n_steps + 1, dtype=np.float64)
    cdef double[::1] xv = xs
    cdef double[::1] yv = ys
    cdef double h = dt * direction
    cdef double x = x0, y = y0
    cdef double k1x, k1y, k2x, k2y, k3x, k3y, k4x, k4y, x2, y2, x3, y3, x4, y4
    cdef long i
    xv[0] = x
    yv[0] = y
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
        xv[i] = x
        yv[i] = y
    return xs, ys


cdef inline double _circle_d2(double x, double y, double tx, double ty):
    cdef double d = x - tx
    cdef double dy = y - ty
    d = d - TWO_PI * floor(d / TWO_PI)
    if d > PI:
        d = TWO_PI - d
    return d * d + dy * dy


def rk4_branch(double a, double b, double k, double x0, double y0,
               double dt, double direction, long max_steps,
               double[::1] targets_x, double[::1] targets_y,
               double[::1] radii2, long source_idx, double arm_r2,
               double y_lo, double y_hi, double x_lo, double x_hi,
               long record_stride):
    """March one manifold branch to a terminal event; see _kernels_py.rk4_branch."""
    cdef long n_t = targets_x.shape[0]
    min_d2_arr = np.full(n_t, np.inf, dtype=np.float64)
    cdef double[::1] min_d2 = min_d2_arr
    cdef long n_rec_max = max_steps // record_stride + 3
    xr_arr = np.empty(n_rec_max, dtype=np.float64)
    yr_arr = np.empty(n_rec_max, dtype=np.float64)
    cdef double[::1] xr = xr_arr
    cdef double[::1] yr = yr_arr
    cdef bint check_x = (x_hi - x_lo) < TWO_PI
    cdef double h = dt * direction
    cdef double x = x0, y = y0
    cdef double k1x, k1y, k2x, k2y, k3x, k3y, k4x, k4y, x2, y2, x3, y3, x4, y4
    cdef double d2, xw
    cdef long n_rec = 1, step = 0, j, hit = -1
    cdef bint armed = False, done = False
    cdef int code = EV_BUDGET
    xr[0] = x - TWO_PI * floor(x / TWO_PI)
    yr[0] = y
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
    return code, hit, step, min_d2_arr, xr_arr[:n_rec].copy(), yr_arr[:n_rec].copy()
