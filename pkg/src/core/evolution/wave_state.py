"""
Radial wave states sampled on the uniform grid r_i = i * dr, i = 0..nr-1.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class WaveState:
    """
    Attributes:
        t: Time of the state
        dr: Uniform radial step
        u: Field values, shape (nr, m)
        ut: Time derivative, shape (nr, m)
    """

    t: float
    dr: float
    u: np.ndarray
    ut: np.ndarray

    def __post_init__(self):
        u = np.array(self.u, dtype=float)
        ut = np.array(self.ut, dtype=float)
        if u.ndim == 1:
            u = u[:, None]
        if ut.ndim == 1:
            ut = ut[:, None]
        if self.dr <= 0.0:
            raise ValueError(f"Radial step must be positive, got {self.dr}")
        if u.shape != ut.shape or u.shape[0] < 5:
            raise ValueError(f"u {u.shape} and ut {ut.shape} must match and hold at least five radii")
        for name, array in (("u", u), ("ut", ut)):
            array.setflags(write=False)
            object.__setattr__(self, name, array)
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "dr", float(self.dr))

    @classmethod
    def zeros(cls, nr: int, dr: float, m: int = 1, t: float = 0.0) -> "WaveState":
        return cls(t, dr, np.zeros((nr, m)), np.zeros((nr, m)))

    @property
    def nr(self) -> int:
        return self.u.shape[0]

    @property
    def m(self) -> int:
        return self.u.shape[1]

    @property
    def r_max(self) -> float:
        return (self.nr - 1) * self.dr

    @property
    def grid(self) -> np.ndarray:
        return self.dr * np.arange(self.nr)

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.u)) and np.all(np.isfinite(self.ut)))

    def sup_norm(self) -> float:
        return float(np.max(np.linalg.norm(self.u, axis=1)))

    def support_radius(self) -> float:
        """Largest radius where u or ut is nonzero (0 for the zero state)."""
        nonzero = np.flatnonzero(np.any(self.u != 0.0, axis=1) | np.any(self.ut != 0.0, axis=1))
        return float(nonzero[-1] * self.dr) if nonzero.size else 0.0

    def with_time(self, t: float) -> "WaveState":
        return WaveState(t, self.dr, self.u, self.ut)

    def reversed(self) -> "WaveState":
        """(u, -ut), the data of the time-reversed solution."""
        return WaveState(self.t, self.dr, self.u, -self.ut)

    def __add__(self, other: "WaveState") -> "WaveState":
        self._check_compatible(other)
        return WaveState(self.t, self.dr, self.u + other.u, self.ut + other.ut)

    def __sub__(self, other: "WaveState") -> "WaveState":
        self._check_compatible(other)
        return WaveState(self.t, self.dr, self.u - other.u, self.ut - other.ut)

    def padded(self, nr: int) -> "WaveState":
        """Extend with zeros to nr radii (compactly supported data only makes sense here)."""
        if nr < self.nr:
            raise ValueError(f"Cannot pad {self.nr} radii down to {nr}")
        u = np.zeros((nr, self.m))
        ut = np.zeros((nr, self.m))
        u[:self.nr], ut[:self.nr] = self.u, self.ut
        return WaveState(self.t, self.dr, u, ut)

    def _check_compatible(self, other: "WaveState"):
        if other.u.shape != self.u.shape or other.dr != self.dr:
            raise ValueError(f"Incompatible states: {self.u.shape}/{self.dr} vs {other.u.shape}/{other.dr}")
