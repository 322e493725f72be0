"""
Storage of radial profiles as CSV tables or CWRP binary files.

CSV columns are r, u1..um, du1..dum, written with 17 significant digits.
The binary layout is a little-endian header (magic, version, m, n) followed by
the grid, the values and the derivatives as <f8 buffers.
"""

import logging
import struct
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from src.core.stationary.radial_profile import RadialProfile

logger = logging.getLogger(__name__)

PROFILE_MAGIC = b"CWRP"
PROFILE_VERSION = 1
PROFILE_HEADER = struct.Struct("<4sIIQ")
FLOAT_FORMAT = "%.17g"

PathLike = Union[str, Path]


def profile_frame(profile: RadialProfile) -> pd.DataFrame:
    columns = {"r": profile.grid}
    for i in range(profile.m):
        columns[f"u{i + 1}"] = profile.values[:, i]
    for i in range(profile.m):
        columns[f"du{i + 1}"] = profile.derivs[:, i]
    return pd.DataFrame(columns)


def write_profile_csv(profile: RadialProfile, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    profile_frame(profile).to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.debug(f"Wrote profile with {profile.n} nodes to {path}")
    return path


def read_profile_csv(path: PathLike) -> RadialProfile:
    """
    Read a profile written by write_profile_csv.

    Raises:
        FileNotFoundError: If the file does not exist
        ValueError: If the u / du columns do not pair up
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Profile file not found: {path}")
    frame = pd.read_csv(path, dtype=float, float_precision="round_trip")
    u_columns = [c for c in frame.columns if c.startswith("u")]
    du_columns = [c for c in frame.columns if c.startswith("du")]
    if "r" not in frame.columns or not u_columns or len(u_columns) != len(du_columns):
        raise ValueError(f"{path} is not a profile table: columns {list(frame.columns)}")
    grid = frame["r"].to_numpy()
    return RadialProfile(grid, frame[u_columns].to_numpy(), frame[du_columns].to_numpy(),
                         regular_at_origin=bool(grid[0] == 0.0))


def write_profile_binary(profile: RadialProfile, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(PROFILE_HEADER.pack(PROFILE_MAGIC, PROFILE_VERSION, profile.m, profile.n))
        for array in (profile.grid, profile.values, profile.derivs):
            f.write(np.ascontiguousarray(array, dtype="<f8").tobytes())
    return path


def read_profile_binary(path: PathLike) -> RadialProfile:
    """
    Read a CWRP file.

    Raises:
        FileNotFoundError: If the file does not exist
        ValueError: On a wrong magic, an unsupported version or a truncated body
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Profile file not found: {path}")
    raw = path.read_bytes()
    if len(raw) < PROFILE_HEADER.size:
        raise ValueError(f"{path} is too short for a profile header")
    magic, version, m, n = PROFILE_HEADER.unpack_from(raw)
    if magic != PROFILE_MAGIC:
        raise ValueError(f"{path} is not a CWRP file (magic {magic!r})")
    if version != PROFILE_VERSION:
        raise ValueError(f"Unsupported CWRP version {version} in {path}")

    body = np.frombuffer(raw, dtype="<f8", offset=PROFILE_HEADER.size)
    if body.size != n * (1 + 2 * m):
        raise ValueError(f"{path} holds {body.size} floats, expected {n * (1 + 2 * m)}")
    grid = body[:n]
    values = body[n:n + n * m].reshape(n, m)
    derivs = body[n + n * m:].reshape(n, m)
    return RadialProfile(grid, values, derivs, regular_at_origin=bool(grid[0] == 0.0))
