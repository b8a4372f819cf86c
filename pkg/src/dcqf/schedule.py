"""Annealing schedule and its analytic time derivative.

lam(t) = sin^2[(pi/2) sin^2(pi t / 2T)].  Both the first and second time
derivatives vanish at t = 0 and t = T, which is what lets the
counterdiabatic term switch off smoothly at the protocol boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


def _check_domain(t: float, T: float) -> None:
    if T <= 0:
        raise ValueError(f"total time T must be positive, got {T}")
    # tiny slack for accumulated grid arithmetic
    if t < -1e-12 * T or t > T * (1 + 1e-12):
        raise ValueError(f"t={t} outside [0, {T}]")


def lambda_value(t: float, T: float) -> float:
    """Schedule value in [0, 1]; exactly 0 at t=0 and 1 at t=T."""
    _check_domain(t, T)
    inner = math.sin(math.pi * t / (2.0 * T)) ** 2
    return math.sin(0.5 * math.pi * inner) ** 2


def lambda_dot(t: float, T: float) -> float:
    """Analytic d(lambda)/dt, by the chain rule.

    With u = pi t / 2T and theta = (pi/2) sin^2(u):
    d(lambda)/dt = (pi^2 / 4T) sin(2 theta) sin(2 u).
    """
    _check_domain(t, T)
    u = math.pi * t / (2.0 * T)
    theta = 0.5 * math.pi * math.sin(u) ** 2
    return (math.pi ** 2 / (4.0 * T)) * math.sin(2.0 * theta) * math.sin(2.0 * u)


@dataclass(frozen=True)
class Schedule:
    """The annealing path for a fixed total evolution time."""

    T: float

    def __post_init__(self):
        if self.T <= 0:
            raise ValueError(f"total time T must be positive, got {self.T}")

    def value(self, t: float) -> float:
        return lambda_value(t, self.T)

    def derivative(self, t: float) -> float:
        return lambda_dot(t, self.T)
