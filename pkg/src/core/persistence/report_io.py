"""
Tabular and JSON artifacts of a run directory.

Every table goes through pandas with 17 significant digits and no timestamps,
so identical runs give byte-identical files.
"""

import json
import logging
from dataclasses import asdict
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np
import pandas as pd

from src.core.evolution.energy_diagnostics import energy, exterior_energy, norm_HH
from src.core.evolution.wave_state import WaveState
from src.core.nonlinearity.vector_nonlinearity import VectorNonlinearity
from src.core.radiation.radiation_field import RadiationField
from src.core.resolution.bound_check import ThreeEnergyBound
from src.core.resolution.profile_fitting import ResolutionReport
from src.core.resolution.virial import VirialSeries

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"

PathLike = Union[str, Path]


def write_table(frame: pd.DataFrame, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.debug(f"Wrote {len(frame)} rows to {path}")
    return path


def write_json(document, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(document, f, indent=2, sort_keys=True, default=_to_builtin)
        f.write("\n")
    return path


def _to_builtin(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def series_frame(snapshots: Sequence[WaveState], nl: VectorNonlinearity,
                 exterior_radii: Iterable[float] = ()) -> pd.DataFrame:
    """
    One row per snapshot: t, E (when nl has a potential), norm_HH, ext_R=<R> per radius, sup_u.

    Exterior radii at or beyond the grid end are reported as NaN.
    """
    exterior_radii = list(exterior_radii)
    rows = []
    for state in snapshots:
        row = {"t": state.t}
        if nl.has_potential:
            row["E"] = energy(nl, state)
        row["norm_HH"] = norm_HH(state)
        for R in exterior_radii:
            row[f"ext_R={R:g}"] = exterior_energy(state, R) if 0.0 <= R < state.r_max else np.nan
        row["sup_u"] = float(np.max(np.abs(state.u)))
        rows.append(row)
    return pd.DataFrame(rows)


def virial_frame(series: VirialSeries) -> pd.DataFrame:
    return pd.DataFrame({
        "t": series.times,
        "y": series.y,
        "ypp_measured": series.ypp_measured,
        "ypp_predicted": series.ypp_predicted,
    })


def radiation_frame(radiation: RadiationField) -> pd.DataFrame:
    columns = {"eta": radiation.eta_grid}
    for i in range(radiation.m):
        columns[f"g{i + 1}"] = radiation.g[:, i]
    return pd.DataFrame(columns)


def three_energy_document(bound: ThreeEnergyBound) -> dict:
    return {
        "energy": bound.energy,
        "max_ratio": bound.max_ratio,
        "tail_ratio": bound.tail_ratio,
        "flagged": bound.flagged,
        "times": bound.times,
        "ratios": bound.ratios,
    }


def resolution_frame(report: ResolutionReport) -> pd.DataFrame:
    return pd.DataFrame([
        {"j": j + 1, "scale": scale, "candidate": match.candidate, "lam": match.lam,
         "residual": match.residual, "energy": match.energy}
        for j, (scale, match) in enumerate(zip(report.scales, report.matches))
    ], columns=["j", "scale", "candidate", "lam", "residual", "energy"])


def write_resolution(report: ResolutionReport, directory: PathLike,
                     radiation: Optional[RadiationField] = None) -> list:
    """resolution.csv with one row per matched scale, resolution.json with the whole report."""
    directory = Path(directory)
    written = [write_table(resolution_frame(report), directory / "resolution.csv"),
               write_json(asdict(report), directory / "resolution.json")]
    if radiation is not None:
        written.append(write_table(radiation_frame(radiation), directory / "radiation.csv"))
    return written


def sweep_frame(summaries: Sequence[dict]) -> pd.DataFrame:
    """One row per sweep member, ordered by member name."""
    return pd.DataFrame([{
        "member": s["name"],
        "value": s.get("value"),
        "outcome": s.get("outcome") or "Error",
        "final_energy": s.get("energy"),
    } for s in sorted(summaries, key=lambda s: s["name"])], columns=["member", "value", "outcome", "final_energy"])
