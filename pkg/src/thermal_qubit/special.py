"""Overflow-safe hyperbolic helpers.

All functions take real scalars. They never form ``cosh`` or ``sinh`` of a
large argument directly, so they are safe for ``beta*m`` in the hundreds.
"""
import math


def tanh(x):
    return math.tanh(x)


def coth(x):
    if x == 0.0:
        raise ZeroDivisionError("coth(0)")
    return 1.0 / math.tanh(x)


def sech(x):
    t = math.exp(-abs(x))
    return 2.0 * t / (1.0 + t * t)


def sech2(x):
    e = math.exp(-2.0 * abs(x))
    return 4.0 * e / (1.0 + e) ** 2


def csch2(x):
    if x == 0.0:
        raise ZeroDivisionError("csch(0)")
    if abs(x) < 1e-8:
        return 1.0 / (x * x) - 1.0 / 3.0
    e = math.exp(-2.0 * abs(x))
    return 4.0 * e / math.expm1(-2.0 * abs(x)) ** 2


def sinhc(x):
    """``sinh(x)/x`` with the removable point at 0."""
    if abs(x) < 1e-4:
        x2 = x * x
        return 1.0 + x2 / 6.0 + x2 * x2 / 120.0
    return math.sinh(x) / x


def x_coth_x(x):
    """``x*coth(x)``, equal to 1 at x = 0."""
    if abs(x) < 1e-4:
        x2 = x * x
        return 1.0 + x2 / 3.0 - x2 * x2 / 45.0
    return x / math.tanh(x)
