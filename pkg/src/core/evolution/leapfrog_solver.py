"""
Leapfrog evolution of radial solutions of u_tt - Delta u = f(u) through w = r u.

In w the equation reads w_tt = w_rr + r f(w / r) on r > 0 with w(t, 0) = 0. The
scheme is the kick-drift-kick form of the second-order leapfrog on the uniform
grid, with w(t, 0) = 0 and w(t, R_max) frozen at its initial value.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, NamedTuple, Optional

import numpy as np

from src.core.errors import CFLViolation, DomainTooSmall, NonFiniteState
from src.core.evolution.wave_state import WaveState
from src.core.nonlinearity.vector_nonlinearity import VectorNonlinearity

logger = logging.getLogger(__name__)

DEFAULT_CFL = 0.9
DEFAULT_BLOWUP_THRESHOLD = 1e6


class Outcome(Enum):
    COMPLETED = "Completed"
    BLOWUP_DETECTED = "BlowupDetected"


@dataclass(frozen=True)
class EvolveConfig:
    """
    Attributes:
        nl: Nonlinearity f
        T: Final time
        dt: Time step; None picks the largest step below cfl * dr dividing T
        snapshot_every: Snapshot cadence in steps
        cfl: Courant number bound, in (0, 1]
        blowup_threshold: Sup-norm level of u that stops the run
        check_domain: Require R_max >= support radius + T + 1
    """

    nl: VectorNonlinearity
    T: float
    dt: Optional[float] = None
    snapshot_every: int = 100
    cfl: float = DEFAULT_CFL
    blowup_threshold: float = DEFAULT_BLOWUP_THRESHOLD
    check_domain: bool = True

    def __post_init__(self):
        if self.T < 0.0:
            raise ValueError(f"Final time must be non-negative, got {self.T}")
        if not 0.0 < self.cfl <= 1.0:
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl}")
        if self.dt is not None and self.dt <= 0.0:
            raise ValueError(f"Time step must be positive, got {self.dt}")
        if self.snapshot_every < 1:
            raise ValueError(f"snapshot_every must be a positive integer, got {self.snapshot_every}")
        if self.blowup_threshold <= 0.0:
            raise ValueError(f"blowup_threshold must be positive, got {self.blowup_threshold}")

    def step_count(self, dr: float) -> int:
        """
        Number of steps to reach T.

        Raises:
            CFLViolation: If an explicit dt exceeds cfl * dr
        """
        limit = self.cfl * dr
        if self.dt is not None and self.dt > limit:
            raise CFLViolation(f"dt = {self.dt} exceeds cfl * dr = {limit}")
        if self.T == 0.0:
            return 0
        step = self.dt if self.dt is not None else limit
        return int(np.ceil(self.T / step - 1e-9))


class EvolutionResult(NamedTuple):
    final: WaveState
    snapshots: List[WaveState]
    outcome: Outcome


class LeapfrogSolver:
    """
    One-step map of the scheme in w variables. Performs no CFL or sanity checks.

    Args:
        nl: Nonlinearity
        dr: Radial step
        dt: Time step
    """

    def __init__(self, nl: VectorNonlinearity, dr: float, dt: float):
        self.nl = nl
        self.dr = dr
        self.dt = dt

    def to_w(self, state: WaveState):
        r = state.grid[:, None]
        return r * state.u, r * state.ut

    def to_state(self, w: np.ndarray, wt: np.ndarray, t: float) -> WaveState:
        r = (self.dr * np.arange(w.shape[0]))[:, None]
        u = np.empty_like(w)
        ut = np.empty_like(wt)
        u[1:], ut[1:] = w[1:] / r[1:], wt[1:] / r[1:]
        # even expansion u = a + b r^2 through the first two radii
        u[0] = (4.0 * u[1] - u[2]) / 3.0
        ut[0] = (4.0 * ut[1] - ut[2]) / 3.0
        return WaveState(t, self.dr, u, ut)

    def acceleration(self, w: np.ndarray) -> np.ndarray:
        """w_rr + r f(w / r) at interior radii, zero at both ends."""
        a = np.zeros_like(w)
        a[1:-1] = (w[2:] - 2.0 * w[1:-1] + w[:-2]) / self.dr ** 2
        r = (self.dr * np.arange(1, w.shape[0] - 1))[:, None]
        a[1:-1] += r * self.nl.eval(w[1:-1] / r)
        return a

    def step(self, w: np.ndarray, wt: np.ndarray, a: np.ndarray):
        """
        Advance (w, w_t) by dt given the current acceleration.

        Returns:
            (w, w_t, a) at the new time
        """
        half = wt + 0.5 * self.dt * a
        w = w + self.dt * half
        a = self.acceleration(w)
        wt = half + 0.5 * self.dt * a
        return w, wt, a


def _sup(u: np.ndarray) -> float:
    with np.errstate(invalid="ignore", over="ignore"):
        norms = np.sqrt(np.sum(u * u, axis=1))
    if np.all(np.isnan(norms)):
        return float("nan")
    return float(np.nanmax(norms))


def evolve(cfg: EvolveConfig, initial: WaveState) -> EvolutionResult:
    """
    Evolve initial data to time T (or to blow-up detection).

    Args:
        cfg: Evolution parameters
        initial: Data at t = initial.t

    Returns:
        EvolutionResult(final, snapshots, outcome); snapshots are taken every
        cfg.snapshot_every steps starting with the initial state

    Raises:
        DomainTooSmall: If cfg.check_domain and R_max < support radius + T + 1
        CFLViolation: If cfg.dt > cfg.cfl * dr
        NonFiniteState: If NaN or Inf appears below the blow-up threshold
    """
    if initial.m != cfg.nl.m:
        raise ValueError(f"State has {initial.m} components, nonlinearity '{cfg.nl.name}' has {cfg.nl.m}")
    if not initial.is_finite():
        raise NonFiniteState("Initial data contain NaN or Inf")
    if cfg.check_domain:
        needed = initial.support_radius() + cfg.T + 1.0
        if initial.r_max < needed:
            raise DomainTooSmall(f"R_max = {initial.r_max} < support radius + T + 1 = {needed}")

    steps = cfg.step_count(initial.dr)
    dt = cfg.T / steps if steps else 0.0
    solver = LeapfrogSolver(cfg.nl, initial.dr, dt)
    logger.info(f"Evolving {cfg.nl.name} on {initial.nr} radii to T = {cfg.T}: {steps} steps of dt = {dt:.6g}")

    w, wt = solver.to_w(initial)
    wt[0] = 0.0
    wt[-1] = 0.0
    a = solver.acceleration(w)
    state = initial
    snapshots = [initial]
    t0 = initial.t

    for n in range(1, steps + 1):
        with np.errstate(over="ignore", invalid="ignore"):
            w, wt, a = solver.step(w, wt, a)
            current = solver.to_state(w, wt, t0 + n * dt)

        level = _sup(current.u)
        if level > cfg.blowup_threshold:
            logger.warning(f"Blow-up detected at t = {current.t:.6g}: sup|u| = {level:.3e}")
            final = current if current.is_finite() else state
            return EvolutionResult(final, snapshots, Outcome.BLOWUP_DETECTED)
        if not current.is_finite():
            raise NonFiniteState(f"Non-finite values at t = {current.t:.6g} (step {n})")

        state = current
        if n % cfg.snapshot_every == 0:
            snapshots.append(state)
            logger.info(f"t = {state.t:.6g}: sup|u| = {level:.6g}")

    return EvolutionResult(state, snapshots, Outcome.COMPLETED)
