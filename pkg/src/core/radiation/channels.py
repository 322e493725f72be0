"""
Exterior energy channels of free radial waves.

For radial data (u0, u1) and R >= 0 the free wave satisfies

    sum over t = +-T of int_{r > R + T} (|u_t|^2 + |u_r|^2) r^2 dr
        -> int_R^inf ((d_r (r u0))^2 + r^2 u1^2) dr    as T -> infinity.

Both sides are evaluated with the exact d'Alembert representation, never with the
finite-difference solver.
"""

import logging
from typing import Tuple

import numpy as np

from src.core.errors import DomainTooSmall
from src.core.evolution.wave_state import WaveState
from src.core.radiation.free_wave import FreeWave, composite_gauss

logger = logging.getLogger(__name__)


def channel_rhs(wave: FreeWave, R: float, outer: float) -> float:
    """int_R^outer ((r u0)')^2 + (r u1)^2 dr."""
    if outer <= R:
        return 0.0
    points, weights = composite_gauss(R, outer, wave.data.dr)
    dw0 = wave.w0(points, 1)
    w1 = wave.w1(points)
    density = np.sum(dw0 * dw0, axis=-1) + np.sum(w1 * w1, axis=-1)
    return float(np.sum(density * weights))


def channel_identity_check(data: WaveState, R: float, T_eval: float) -> Tuple[float, float]:
    """
    Both sides of the exterior channel identity at evaluation time T_eval.

    Args:
        data: Compactly supported data at t = 0
        R: Inner radius, R >= 0
        T_eval: Evaluation time, T_eval >= 0

    Returns:
        (lhs, rhs)

    Raises:
        DomainTooSmall: If the data reach R_max or the cone R_max >= support + T_eval fails
    """
    if R < 0.0:
        raise ValueError(f"Channel radius must be non-negative, got {R}")
    support = data.support_radius()
    if support >= data.r_max or support + abs(T_eval) > data.r_max:
        raise DomainTooSmall(
            f"Data supported up to {support} cannot be followed to T = {T_eval} on R_max = {data.r_max}"
        )

    wave = FreeWave(data)
    lhs = 0.0
    for t in (abs(T_eval), -abs(T_eval)):
        lhs += wave.exterior_energy(t, R + abs(T_eval), support + abs(T_eval))
    rhs = channel_rhs(wave, R, support)
    logger.debug(f"Channel identity at R = {R}, T = {T_eval}: lhs {lhs:.12g}, rhs {rhs:.12g}")
    return lhs, rhs
