"""Small finite-difference helpers used by verification code and tests."""

from __future__ import annotations

from typing import Callable


def central_difference(f: Callable[[float], float], h: float) -> float:
    """Central difference (f(h) - f(-h)) / (2h) of f around 0."""
    return (f(h) - f(-h)) / (2.0 * h)


def richardson_derivative(f: Callable[[float], float], h: float) -> float:
    """Richardson-extrapolated central difference of f at 0 (O(h^4))."""
    d1 = central_difference(f, h)
    d2 = central_difference(f, 0.5 * h)
    return (4.0 * d2 - d1) / 3.0
