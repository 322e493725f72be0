"""
CWWS snapshot files: a packed header (magic, version, m, nr, dr, t) followed by
u and u_t as little-endian float64 arrays of shape (nr, m).
"""

import logging
import re
import struct
from pathlib import Path
from typing import List, Union

import numpy as np

from src.core.evolution.wave_state import WaveState

logger = logging.getLogger(__name__)

SNAPSHOT_MAGIC = b"CWWS"
SNAPSHOT_VERSION = 1
SNAPSHOT_HEADER = struct.Struct("<4sIIQdd")
SNAPSHOT_PATTERN = re.compile(r"^snap_(\d+)\.cwws$")

PathLike = Union[str, Path]


def snapshot_name(step: int) -> str:
    return f"snap_{step:08d}.cwws"


def write_snapshot(state: WaveState, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(SNAPSHOT_HEADER.pack(SNAPSHOT_MAGIC, SNAPSHOT_VERSION, state.m, state.nr, state.dr, state.t))
        f.write(np.ascontiguousarray(state.u, dtype="<f8").tobytes())
        f.write(np.ascontiguousarray(state.ut, dtype="<f8").tobytes())
    return path


def read_snapshot(path: PathLike) -> WaveState:
    """
    Read a CWWS file back into a WaveState.

    Raises:
        FileNotFoundError: If the file does not exist
        ValueError: On a wrong magic, an unsupported version or a truncated body
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Snapshot file not found: {path}")
    raw = path.read_bytes()
    if len(raw) < SNAPSHOT_HEADER.size:
        raise ValueError(f"{path} is too short for a snapshot header")
    magic, version, m, nr, dr, t = SNAPSHOT_HEADER.unpack_from(raw)
    if magic != SNAPSHOT_MAGIC:
        raise ValueError(f"{path} is not a CWWS file (magic {magic!r})")
    if version != SNAPSHOT_VERSION:
        raise ValueError(f"Unsupported CWWS version {version} in {path}")

    body = np.frombuffer(raw, dtype="<f8", offset=SNAPSHOT_HEADER.size)
    if body.size != 2 * nr * m:
        raise ValueError(f"{path} holds {body.size} floats, expected {2 * nr * m}")
    u = body[:nr * m].reshape(nr, m)
    ut = body[nr * m:].reshape(nr, m)
    return WaveState(t, dr, u, ut)


def write_snapshots(states, directory: PathLike, every: int = 1) -> List[Path]:
    """Write states as snap_<step>.cwws, step k of the list being step k * every of the run."""
    directory = Path(directory)
    paths = [write_snapshot(state, directory / snapshot_name(k * every)) for k, state in enumerate(states)]
    logger.info(f"Wrote {len(paths)} snapshots to {directory}")
    return paths


def read_snapshots(directory: PathLike) -> List[WaveState]:
    """All snapshots of a directory, ordered by time."""
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"Snapshot directory not found: {directory}")
    paths = [p for p in directory.iterdir() if SNAPSHOT_PATTERN.match(p.name)]
    states = [read_snapshot(p) for p in paths]
    return sorted(states, key=lambda s: s.t)
