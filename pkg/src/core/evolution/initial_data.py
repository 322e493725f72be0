"""
Builders for initial data on the uniform evolution grid: compactly supported bumps,
sums of rescaled stationary bubbles, and states loaded from snapshot files.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from src.core.evolution.wave_state import WaveState
from src.core.nonlinearity.vector_nonlinearity import VectorNonlinearity
from src.core.stationary.explicit_family import explicit_W
from src.core.stationary.ground_state import fixed_point_amplitude, ground_state

logger = logging.getLogger(__name__)

BUMP_POWER = 8


@dataclass(frozen=True)
class Bump:
    """amplitude * (1 - x^2)^8 with x = (r - center) / width, placed in one component of u or ut."""

    center: float
    width: float
    amplitude: float
    component: int = 0
    field: str = "u"

    def __post_init__(self):
        if self.width <= 0.0:
            raise ValueError(f"Bump width must be positive, got {self.width}")
        if self.field not in ("u", "ut"):
            raise ValueError(f"Bump field must be 'u' or 'ut', got '{self.field}'")

    @property
    def support_radius(self) -> float:
        return self.center + self.width

    def sample(self, r: np.ndarray) -> np.ndarray:
        x = (r - self.center) / self.width
        return np.where(np.abs(x) < 1.0, self.amplitude * (1.0 - x ** 2) ** BUMP_POWER, 0.0)


@dataclass(frozen=True)
class Bubble:
    """
    sign * mu omega W_(lam). omega defaults to the ground-state direction of the nonlinearity;
    an explicit direction must satisfy f(omega) = c omega with c > 0.
    """

    lam: float
    sign: float = 1.0
    direction: Optional[Sequence[float]] = None


def uniform_grid(nr: int, r_max: float) -> np.ndarray:
    if nr < 5:
        raise ValueError(f"Grid needs at least five radii, got {nr}")
    return np.linspace(0.0, r_max, nr)


def bump_state(nr: int, r_max: float, m: int, bumps: Iterable[Bump]) -> WaveState:
    r = uniform_grid(nr, r_max)
    u = np.zeros((nr, m))
    ut = np.zeros((nr, m))
    for bump in bumps:
        if not 0 <= bump.component < m:
            raise ValueError(f"Bump component {bump.component} out of range for m = {m}")
        target = u if bump.field == "u" else ut
        target[:, bump.component] += bump.sample(r)
    return WaveState(0.0, r_max / (nr - 1), u, ut)


def bubble_amplitude(nl: VectorNonlinearity, bubble: Bubble) -> np.ndarray:
    """The vector zeta = mu omega of a bubble, with f(zeta) = zeta."""
    if bubble.direction is None:
        state = ground_state(nl)
        return state.mu * state.omega
    omega = np.asarray(bubble.direction, dtype=float).reshape(nl.m)
    omega = omega / np.linalg.norm(omega)
    return fixed_point_amplitude(nl, omega) * omega


def bubble_state(nl: VectorNonlinearity, nr: int, r_max: float, bubbles: Iterable[Bubble]) -> WaveState:
    """Sum of sign * zeta W_(lambda), at rest."""
    r = uniform_grid(nr, r_max)
    u = np.zeros((nr, nl.m))
    for bubble in bubbles:
        zeta = bubble.sign * bubble_amplitude(nl, bubble)
        u += explicit_W(bubble.lam, r).values * zeta
        logger.debug(f"Added bubble zeta = {zeta} at scale {bubble.lam}")
    return WaveState(0.0, r_max / (nr - 1), u, np.zeros_like(u))
