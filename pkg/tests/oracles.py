"""Closed-form reference values used across the test suite.

The ellipsoid curvature formulas are the classical ones for
f(s,t) = (a sin s cos t, b sin s sin t, c cos s); both were re-derived
symbolically (first/second fundamental forms, sympy) before being frozen
here, with the normal oriented outward and convexity counted positive.
"""

from __future__ import annotations

import numpy as np


def ellipsoid_gaussian(a: float, b: float, c: float, p: np.ndarray) -> float:
    x, y, z = p
    nu2 = (x / a**2) ** 2 + (y / b**2) ** 2 + (z / c**2) ** 2
    return 1.0 / ((a * b * c) ** 2 * nu2**2)


def ellipsoid_mean(a: float, b: float, c: float, p: np.ndarray) -> float:
    x, y, z = p
    nu2 = (x / a**2) ** 2 + (y / b**2) ** 2 + (z / c**2) ** 2
    return (a**2 + b**2 + c**2 - (x**2 + y**2 + z**2)) / (
        2.0 * (a * b * c) ** 2 * nu2**1.5)


def lp_gauge(p: float, x: np.ndarray) -> float:
    return float(np.sum(np.abs(x) ** p) ** (1.0 / p))


def torus_gaussian(R: float, r: float, s: float) -> float:
    """K of ((R + r cos s) cos t, (R + r cos s) sin t, r sin s), outward normal."""
    return np.cos(s) / (r * (R + r * np.cos(s)))


def torus_mean(R: float, r: float, s: float) -> float:
    return (R + 2.0 * r * np.cos(s)) / (2.0 * r * (R + r * np.cos(s)))
