"""
Exact free radial waves through the one-dimensional d'Alembert formula.

With w = r u, a free radial wave solves w_tt = w_rr on r > 0 with w(t, 0) = 0. Extending
w0 = r u0 and w1 = r u1 oddly to the line,

    w(t, r) = (W0(r + t) + W0(r - t)) / 2 + (P(r + t) - P(r - t)) / 2,

where W0 interpolates the odd extension of w0 and P is an antiderivative of the odd
extension of w1. Interpolation uses natural cubic splines on the data grid. Both are
continued by zero (W0) and by constants (P) beyond the first zero node past the support,
and sampled states vanish exactly beyond support + |t|.
"""

import numpy as np
from scipy.interpolate import CubicSpline

from src.core.errors import DomainTooSmall
from src.core.evolution.wave_state import WaveState

GAUSS_ORDER = 5
_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(GAUSS_ORDER)


def composite_gauss(lo: float, hi: float, step: float):
    """Gauss-Legendre points and weights on cells of size at most step covering [lo, hi]."""
    edges = np.linspace(lo, hi, max(int(np.ceil((hi - lo) / step - 1e-9)), 1) + 1)
    a, b = edges[:-1], edges[1:]
    half = 0.5 * (b - a)
    points = 0.5 * (a + b)[:, None] + half[:, None] * _NODES[None, :]
    weights = half[:, None] * _WEIGHTS[None, :]
    return points, weights


class FreeWave:
    """
    The free evolution of radial data (u0, u1) given at time data.t.

    Args:
        data: Initial data on the uniform grid
    """

    def __init__(self, data: WaveState):
        self.data = data
        self.t0 = data.t
        self.r_max = data.r_max
        self.support = data.support_radius()
        self.cutoff = min(self.support + data.dr, self.r_max)
        r = data.grid
        line = np.concatenate([-r[:0:-1], r])
        w0 = r[:, None] * data.u
        w1 = r[:, None] * data.ut
        odd_w0 = np.concatenate([-w0[:0:-1], w0])
        odd_w1 = np.concatenate([-w1[:0:-1], w1])
        self._w0 = CubicSpline(line, odd_w0, bc_type="natural", axis=0)
        self._w1 = CubicSpline(line, odd_w1, bc_type="natural", axis=0)
        self._p = self._w1.antiderivative()
        self._p_origin = self._p(0.0)

    def _inside(self, x: np.ndarray) -> np.ndarray:
        return np.abs(x) <= self.cutoff

    def w0(self, x, nu: int = 0) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.where(self._inside(x)[..., None], self._w0(np.clip(x, -self.cutoff, self.cutoff), nu), 0.0)

    def w1(self, x, nu: int = 0) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.where(self._inside(x)[..., None], self._w1(np.clip(x, -self.cutoff, self.cutoff), nu), 0.0)

    def primitive(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self._p(np.clip(x, -self.cutoff, self.cutoff)) - self._p_origin

    def w(self, t: float, r) -> np.ndarray:
        """w(t0 + t, r) for t measured from the data time."""
        r = np.asarray(r, dtype=float)
        return 0.5 * (self.w0(r + t) + self.w0(r - t)) + 0.5 * (self.primitive(r + t) - self.primitive(r - t))

    def w_t(self, t: float, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return 0.5 * (self.w0(r + t, 1) - self.w0(r - t, 1)) + 0.5 * (self.w1(r + t) + self.w1(r - t))

    def w_r(self, t: float, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return 0.5 * (self.w0(r + t, 1) + self.w0(r - t, 1)) + 0.5 * (self.w1(r + t) - self.w1(r - t))

    def w_rt(self, t: float, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return 0.5 * (self.w0(r + t, 2) - self.w0(r - t, 2)) + 0.5 * (self.w1(r + t, 1) + self.w1(r - t, 1))

    def state(self, t: float) -> WaveState:
        """(u, u_t) at time t0 + t on the data grid; at r = 0 the limits w_r and w_rt are used."""
        r = self.data.grid
        u = np.empty((r.size, self.data.m))
        ut = np.empty_like(u)
        u[1:] = self.w(t, r[1:]) / r[1:, None]
        ut[1:] = self.w_t(t, r[1:]) / r[1:, None]
        u[0] = self.w_r(t, 0.0)
        ut[0] = self.w_rt(t, 0.0)
        outside = r > self.support + abs(t) + 1e-9 * self.data.dr
        u[outside] = 0.0
        ut[outside] = 0.0
        return WaveState(self.t0 + t, self.data.dr, u, ut)

    def energy_density(self, t: float, r) -> np.ndarray:
        """(|u_t|^2 + |u_r|^2) r^2 = |w_t|^2 + |w_r - w / r|^2 at r > 0."""
        r = np.asarray(r, dtype=float)
        wt = self.w_t(t, r)
        radial = self.w_r(t, r) - self.w(t, r) / r[..., None]
        return np.sum(wt * wt, axis=-1) + np.sum(radial * radial, axis=-1)

    def exterior_energy(self, t: float, R: float, outer: float) -> float:
        """int_R^outer (|u_t|^2 + |u_r|^2) r^2 dr."""
        if outer <= R:
            return 0.0
        points, weights = composite_gauss(R, outer, self.data.dr)
        return float(np.sum(self.energy_density(t, points) * weights))


def dalembert_exact(data: WaveState, t: float) -> WaveState:
    """
    Exact free evolution of data by time t (either sign), sampled on the data grid.

    Raises:
        DomainTooSmall: If the data are not supported in [0, R_max - |t|]
    """
    support = data.support_radius()
    if support + abs(t) > data.r_max:
        raise DomainTooSmall(f"Support radius {support} + |t| = {abs(t)} exceeds R_max = {data.r_max}")
    if t == 0.0:
        return data
    return FreeWave(data).state(t)
