import concurrent.futures
import logging
from dataclasses import asdict
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from src.cli.cli_response_utils.run_display_manager import RunDisplayManager
from src.core.errors import WaveLabError
from src.core.nonlinearity.property_checks import lipschitz_bound_fit
from src.core.nonlinearity.sphere_grid import sphere_grid
from src.core.nonlinearity.vector_nonlinearity import VectorNonlinearity
from src.core.persistence.report_io import write_json, write_table
from src.core.scenario.reproducibility_manager import ReproducibilityManager
from src.core.scenario.scenario_builder import LoadedConfig, load_config, resolve_config_nonlinearity
from src.core.stationary.diagnostics import ENERGY_CLUSTER_RTOL, check_energy_assumptions, fit_w_family
from src.core.stationary.exterior_fixed_point import (
    LIPSCHITZ_SAMPLES, minimal_contraction_radius, solve_exterior_fixed_point,
)
from src.core.stationary.inward_continuation import R_STOP, ZCase, continue_inward


def atlas_charges(config: LoadedConfig, m: int, seed: int) -> np.ndarray:
    """Charges theta = radius * direction over the configured directions and radii, shape (n, m)."""
    theta = config.document["theta"]
    if "vectors" in theta:
        directions = []
        for k, vector in enumerate(theta["vectors"]):
            vector = np.asarray(vector, dtype=float)
            if vector.shape != (m,) or not np.linalg.norm(vector) > 0.0:
                raise config.error(f"Direction {vector.tolist()} must be a nonzero vector of length {m}",
                                   ("theta", "vectors", k))
            directions.append(vector / np.linalg.norm(vector))
        directions = np.array(directions)
    else:
        directions = sphere_grid(m, int(theta["directions"]), seed)
    radii = np.asarray(theta["radii"], dtype=float)
    return (radii[:, None, None] * directions[None, :, :]).reshape(-1, m)


class AtlasRunner:
    """
    Computes Z_theta over a grid of charges and classifies each solution.

    Per charge: the exterior fixed point is solved on [R, inf) with R the smallest
    radius where the map contracts, then the solution is continued inward and
    labelled case A (blow-up at R_theta), B (singular at 0) or C (finite energy).
    A failing charge is recorded in its row and does not stop the sweep.
    """

    def __init__(self, manager: Optional[ReproducibilityManager] = None):
        self.logger = logging.getLogger(__name__)
        self.manager = manager or ReproducibilityManager()

    def atlas_row(self, nl: VectorNonlinearity, theta: np.ndarray, lipschitz: float,
                  r_stop: float = R_STOP, tol: float = 1e-13) -> Dict[str, Any]:
        row: Dict[str, Any] = {f"theta_{i + 1}": float(theta[i]) for i in range(nl.m)}
        row.update({"theta_norm": float(np.linalg.norm(theta)), "R": np.nan, "case": "error", "R_theta": np.nan,
                    "energy": np.nan, "gradient_energy": np.nan, "w_fit_lam": np.nan, "w_fit_residual": np.nan,
                    "error": ""})
        try:
            R = minimal_contraction_radius(nl, theta, lipschitz=lipschitz)
            row["R"] = R
            outer = solve_exterior_fixed_point(nl, theta, R, tol=tol)
            solution = continue_inward(nl, outer, r_stop=min(r_stop, 0.5 * R))
        except WaveLabError as e:
            self.logger.warning(f"theta = {theta}: {type(e).__name__}: {e}")
            row["error"] = f"{type(e).__name__}: {e}"
            return row

        row["case"] = solution.case.value
        if solution.case is ZCase.A_BLOWUP:
            row["R_theta"] = solution.R_theta
        elif solution.case is ZCase.C_ENERGY:
            row["energy"] = solution.energy if solution.energy is not None else np.nan
            row["gradient_energy"] = solution.gradient_energy
            fit = fit_w_family(solution.profile, theta)
            row["w_fit_lam"] = fit.lam
            row["w_fit_residual"] = fit.residual
        return row

    def build_atlas(self, nl: VectorNonlinearity, charges: np.ndarray, jobs: int = 1,
                    r_stop: float = R_STOP, tol: float = 1e-13) -> pd.DataFrame:
        """One row per charge, in the order of charges."""
        lipschitz = lipschitz_bound_fit(nl, LIPSCHITZ_SAMPLES, seed=0)
        rows: List[Optional[Dict[str, Any]]] = [None] * len(charges)
        with concurrent.futures.ThreadPoolExecutor(max_workers=max(1, jobs)) as executor:
            future_to_index = {
                executor.submit(self.atlas_row, nl, theta, lipschitz, r_stop, tol): k
                for k, theta in enumerate(charges)
            }
            for completed, future in enumerate(concurrent.futures.as_completed(future_to_index), start=1):
                rows[future_to_index[future]] = future.result()
                if completed % 16 == 0 or completed == len(charges):
                    self.logger.info(f"[Progress] {completed}/{len(charges)} charges classified")
        return pd.DataFrame(rows)

    def run(self, config_path, jobs: int = 1, seed: Optional[int] = None, out: Optional[str] = None) -> int:
        config = load_config(config_path, "atlas")
        document = config.document
        seed = int(seed if seed is not None else document.get("seed", 0))
        document["seed"] = seed
        nl = resolve_config_nonlinearity(config)
        run_dir = Path(out or document.get("output_dir", Path("runs") / document.get("name", f"atlas-{nl.name}")))

        charges = atlas_charges(config, nl.m, seed)
        self.logger.info(f"Atlas of {nl.name}: {len(charges)} charges with {jobs} worker(s)")
        frame = self.build_atlas(nl, charges, jobs, float(document.get("r_stop", R_STOP)),
                                 float(document.get("tol", 1e-13)))

        energies = frame.loc[frame["case"] == ZCase.C_ENERGY.value, "energy"].dropna().tolist()
        report = check_energy_assumptions(energies, float(document.get("energy_rtol", ENERGY_CLUSTER_RTOL)))
        assumptions = {**asdict(report), "holds": report.holds,
                       "case_counts": frame["case"].value_counts().sort_index().to_dict()}

        artifacts = [write_table(frame, run_dir / "atlas.csv"), write_json(assumptions, run_dir / "assumptions.json")]
        manifest = self.manager.generate_execution_log(document, seed, None,
                                                       [p.name for p in artifacts], kind="atlas")
        self.manager.write_manifest(run_dir, manifest)
        RunDisplayManager.display_atlas_pretty(frame)
        self.logger.info(f"Atlas of {nl.name}: {len(energies)} finite-energy solutions, "
                         f"energy assumptions {'hold' if report.holds else 'fail'}")
        return 0
