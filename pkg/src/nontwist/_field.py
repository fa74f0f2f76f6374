"""Raw formula evaluations shared by the trace, map, and Hamiltonian layers.

All functions accept scalars or numpy arrays.  The polynomial evaluation
order matches the kernels exactly.
"""
import numpy as np


def profile(a, b, y):
    """F(y) = y - a*y^2 + b*y^3, evaluated as y*(1 - y*(a - b*y))."""
    return y * (1.0 - y * (a - b * y))


def profile_derivative(a, b, y):
    """F'(y) = 1 - 2*a*y + 3*b*y^2."""
    return 1.0 - 2.0 * a * y + 3.0 * b * y * y


def hamiltonian_value(a, b, k, x, y):
    """H(x, y) = -y^2/2 + a*y^3/3 - b*y^4/4 - k*cos(x)."""
    y2 = y * y
    return -y2 / 2.0 + a * y2 * y / 3.0 - b * y2 * y2 / 4.0 - k * np.cos(x)
