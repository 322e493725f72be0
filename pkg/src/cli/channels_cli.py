import logging
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd

from src.cli.cli_response_utils.run_display_manager import RunDisplayManager
from src.core.errors import WaveLabError
from src.core.evolution.initial_data import Bump, bump_state
from src.core.evolution.wave_state import WaveState
from src.core.persistence.report_io import write_table
from src.core.radiation.channels import channel_identity_check
from src.core.scenario.reproducibility_manager import ReproducibilityManager
from src.core.scenario.scenario_builder import load_config


class ChannelsRunner:
    """Tabulates both sides of the exterior channel identity over lists of radii R and times T."""

    def __init__(self, manager: Optional[ReproducibilityManager] = None):
        self.logger = logging.getLogger(__name__)
        self.manager = manager or ReproducibilityManager()

    def channel_table(self, data: WaveState, radii, times) -> pd.DataFrame:
        """
        One row per (R, T): lhs, rhs, |lhs - rhs| and the gap relative to rhs (0 when rhs vanishes).

        A pair the grid cannot follow is kept with NaN sides and the error message.
        """
        rows = []
        for R in radii:
            for T in times:
                row = {"R": float(R), "T": float(T), "lhs": np.nan, "rhs": np.nan, "gap": np.nan,
                       "relative_gap": np.nan, "error": ""}
                try:
                    lhs, rhs = channel_identity_check(data, float(R), float(T))
                except WaveLabError as e:
                    self.logger.warning(f"Channel identity at R = {R}, T = {T} skipped: {e}")
                    row["error"] = str(e)
                    rows.append(row)
                    continue
                gap = abs(lhs - rhs)
                row.update({"lhs": lhs, "rhs": rhs, "gap": gap, "relative_gap": gap / rhs if rhs > 0.0 else 0.0})
                rows.append(row)
        return pd.DataFrame(rows, columns=["R", "T", "lhs", "rhs", "gap", "relative_gap", "error"])

    def run(self, config_path, seed: Optional[int] = None, out: Optional[str] = None) -> int:
        config = load_config(config_path, "channels")
        document = config.document
        seed = int(seed if seed is not None else document.get("seed", 0))
        document["seed"] = seed
        m = int(document.get("m", 1))
        for k, bump in enumerate(document.get("bumps", [])):
            if bump.get("component", 0) >= m:
                raise config.error(f"Bump component {bump['component']} out of range for m = {m}",
                                   ("bumps", k, "component"))

        bumps = [Bump(float(b["center"]), float(b["width"]), float(b["amplitude"]),
                      int(b.get("component", 0)), b.get("field", "u")) for b in document.get("bumps", [])]
        data = bump_state(int(document["grid"]["nr"]), float(document["grid"]["r_max"]), m, bumps)
        run_dir = Path(out or document.get("output_dir", Path("runs") / document.get("name", "channels")))

        frame = self.channel_table(data, document["R"], document["T"])
        path = write_table(frame, run_dir / "channels.csv")
        manifest = self.manager.generate_execution_log(document, seed, None, [path.name], kind="channels")
        self.manager.write_manifest(run_dir, manifest)
        RunDisplayManager.display_channels_pretty(frame)
        self.logger.info(f"Channel identity tabulated for {len(frame)} (R, T) pairs into {path}")
        return 0
