import concurrent.futures
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from src.cli.cli_response_utils.run_display_manager import RunDisplayManager
from src.core.errors import WaveLabError
from src.core.evolution.energy_diagnostics import energy
from src.core.evolution.leapfrog_solver import Outcome, evolve
from src.core.evolution.wave_state import WaveState
from src.core.persistence.report_io import (
    radiation_frame, series_frame, sweep_frame, three_energy_document, virial_frame, write_json, write_resolution,
    write_table,
)
from src.core.persistence.snapshot_io import read_snapshot, read_snapshots, write_snapshot, write_snapshots
from src.core.radiation.radiation_field import extract_radiation
from src.core.resolution.analyzer import ResolutionAnalyzer
from src.core.resolution.bound_check import check_3E_bound
from src.core.resolution.profile_fitting import DEFAULT_DIRECTIONS, CandidateLibrary
from src.core.resolution.virial import virial_series
from src.core.scenario.reproducibility_manager import ReproducibilityManager
from src.core.scenario.scenario_builder import Scenario, load_config

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_BLOWUP = 2

SNAPSHOT_DIR = "snapshots"
FINAL_STATE = "final.cwws"


def exit_code(outcome: Optional[str]) -> int:
    if outcome == Outcome.COMPLETED.value:
        return EXIT_OK
    if outcome == Outcome.BLOWUP_DETECTED.value:
        return EXIT_BLOWUP
    return EXIT_ERROR


def analysis_states(snapshots: Sequence[WaveState], final: WaveState) -> List[WaveState]:
    """Snapshots followed by the final state when it is not already the last snapshot."""
    states = list(snapshots)
    if not states or final.t > states[-1].t:
        states.append(final)
    return states


class ScenarioRunner:
    """
    Runs scenarios into run directories and re-analyzes stored runs.

    A run directory holds the manifest, the snapshots, the final state and one file per
    configured diagnostic. Each run owns its directory exclusively, so sweep members can
    run concurrently.
    """

    def __init__(self, manager: Optional[ReproducibilityManager] = None):
        self.logger = logging.getLogger(__name__)
        self.manager = manager or ReproducibilityManager()

    def run_diagnostics(self, scenario: Scenario, states: Sequence[WaveState], run_dir: Path) -> List[str]:
        """
        Evaluate the analysis plan of a scenario on a sequence of states.

        Diagnostics that do not apply (no potential, E <= 0, too few snapshots) are
        logged and skipped; the others are written into run_dir.

        Returns:
            Names of the written files, relative to run_dir
        """
        plan = scenario.analysis
        nl = scenario.nl
        written: List[Path] = []

        if plan["energy_series"]:
            written.append(write_table(series_frame(states, nl, plan["exterior_radii"]), run_dir / "series.csv"))

        if plan["virial"]:
            try:
                written.append(write_table(virial_frame(virial_series(states, nl)), run_dir / "virial.csv"))
            except (WaveLabError, ValueError) as e:
                self.logger.warning(f"{scenario.name}: virial series skipped: {e}")

        if plan["three_energy_bound"]:
            try:
                document = three_energy_document(check_3E_bound(states, nl))
            except WaveLabError as e:
                self.logger.warning(f"{scenario.name}: 3E bound skipped: {e}")
                document = {"skipped": str(e)}
            written.append(write_json(document, run_dir / "three_energy.json"))

        resolution = plan["resolution"]
        if plan["radiation"] and not resolution.get("enabled", False):
            try:
                window = int(resolution.get("window", 3))
                written.append(write_table(radiation_frame(extract_radiation(states[-window:])),
                                           run_dir / "radiation.csv"))
            except WaveLabError as e:
                self.logger.warning(f"{scenario.name}: radiation extraction skipped: {e}")

        if resolution.get("enabled", False):
            try:
                written.extend(self._resolve(scenario, states, run_dir, resolution))
            except WaveLabError as e:
                self.logger.warning(f"{scenario.name}: resolution skipped: {e}")

        return sorted(str(path.relative_to(run_dir)) for path in written)

    def _resolve(self, scenario: Scenario, states: Sequence[WaveState], run_dir: Path,
                 resolution: Dict[str, Any]) -> List[Path]:
        nl = scenario.nl
        library = CandidateLibrary.builtin(nl, directions=int(resolution.get("directions", DEFAULT_DIRECTIONS)))
        analyzer = ResolutionAnalyzer(nl, library, window=int(resolution.get("window", 3)),
                                      eps=float(resolution.get("eps", 1e-10)))
        E_total = resolution.get("E_total")
        if E_total is None and nl.has_potential:
            E_total = energy(nl, states[0])
        report = analyzer.analyze(states, E_total=E_total, energies=resolution.get("energies"))
        RunDisplayManager.display_resolution_pretty(report)
        radiation = analyzer.radiation(states) if scenario.analysis["radiation"] else None
        return write_resolution(report, run_dir, radiation)

    def run_scenario(self, scenario: Scenario, value=None) -> Dict[str, Any]:
        """
        Evolve a scenario, run its diagnostics and write the run directory.

        Returns:
            Summary dictionary with name, value, outcome, t_final, energy, sup_u and run_dir
        """
        run_dir = scenario.output_dir
        run_dir.mkdir(parents=True, exist_ok=True)
        cfg = scenario.evolve_config()
        self.logger.info(f"Running scenario '{scenario.name}' into {run_dir}")

        result = evolve(cfg, scenario.initial_state())
        artifacts = [str(p.relative_to(run_dir))
                     for p in write_snapshots(result.snapshots, run_dir / SNAPSHOT_DIR, cfg.snapshot_every)]
        artifacts.append(str(write_snapshot(result.final, run_dir / FINAL_STATE).relative_to(run_dir)))
        artifacts.extend(self.run_diagnostics(scenario, analysis_states(result.snapshots, result.final), run_dir))

        manifest = self.manager.generate_execution_log(scenario.document, scenario.seed, result.outcome.value,
                                                       artifacts)
        self.manager.write_manifest(run_dir, manifest)
        final_energy = energy(scenario.nl, result.final) if scenario.nl.has_potential else None
        self.logger.info(f"Scenario '{scenario.name}': {result.outcome.value} at t = {result.final.t:.6g}")
        return {
            "name": scenario.name,
            "value": value,
            "outcome": result.outcome.value,
            "t_final": result.final.t,
            "energy": final_energy,
            "sup_u": result.final.sup_norm(),
            "run_dir": run_dir,
        }

    def run(self, config_path, seed: Optional[int] = None, out: Optional[str] = None) -> int:
        """Run one scenario file (or re-run a manifest); returns the process exit code."""
        scenario = Scenario.from_file(config_path, seed=seed, output_dir=out)
        summary = self.run_scenario(scenario)
        RunDisplayManager.display_runs_pretty([summary])
        return exit_code(summary["outcome"])

    def _run_member(self, base: Scenario, document: Dict[str, Any], value) -> Dict[str, Any]:
        return self.run_scenario(base.member(document), value)

    def sweep(self, config_path, jobs: int = 1, seed: Optional[int] = None, out: Optional[str] = None) -> int:
        """
        Run every member of a scenario's sweep on a pool of jobs workers.

        A failing member is recorded in the summary and does not stop the others.
        Exit code: 1 if any member failed, else 2 if any member blew up, else 0.
        """
        base = Scenario.from_file(config_path, seed=seed, output_dir=out)
        members = base.sweep_members()
        if not members:
            self.logger.warning(f"Scenario '{base.name}' has no sweep block; running it once")
            members = [(base.name, None, {k: v for k, v in base.document.items() if k != "sweep"})]
        self.logger.info(f"Sweeping '{base.name}' over {len(members)} members with {jobs} worker(s)")

        summaries = []
        with concurrent.futures.ThreadPoolExecutor(max_workers=max(1, jobs)) as executor:
            future_to_member = {
                executor.submit(self._run_member, base, document, value): (name, value)
                for name, value, document in members
            }
            for completed, future in enumerate(concurrent.futures.as_completed(future_to_member), start=1):
                name, value = future_to_member[future]
                try:
                    summaries.append(future.result())
                except (WaveLabError, ValueError) as e:
                    self.logger.warning(f"Sweep member {name} failed: {e}")
                    summaries.append({"name": name, "value": value, "outcome": None, "error": str(e),
                                      "run_dir": base.output_dir / name})
                self.logger.info(f"[Progress] {completed}/{len(members)} sweep members done")

        self._write_sweep_summary(base, summaries)
        RunDisplayManager.display_runs_pretty(summaries)
        codes = [exit_code(s["outcome"]) for s in summaries]
        if EXIT_ERROR in codes:
            return EXIT_ERROR
        return EXIT_BLOWUP if EXIT_BLOWUP in codes else EXIT_OK

    def _write_sweep_summary(self, base: Scenario, summaries: List[Dict[str, Any]]):
        path = write_table(sweep_frame(summaries), base.output_dir / "sweep.csv")
        manifest = self.manager.generate_execution_log(base.document, base.seed, None, [path.name])
        self.manager.write_manifest(base.output_dir, manifest)

    def analyze(self, run_dir, seed: Optional[int] = None) -> int:
        """
        Re-run the configured diagnostics on the states stored in a run directory.

        The scenario is read back from the run's manifest; outputs overwrite the
        diagnostic files in place.
        """
        run_dir = Path(run_dir)
        config = load_config(run_dir, "scenario")
        scenario = Scenario(config, seed=seed, output_dir=run_dir)
        snapshots = read_snapshots(run_dir / SNAPSHOT_DIR)
        final_path = run_dir / FINAL_STATE
        states = analysis_states(snapshots, read_snapshot(final_path)) if final_path.exists() else snapshots
        if not states:
            raise FileNotFoundError(f"No stored states in {run_dir}")
        artifacts = self.run_diagnostics(scenario, states, run_dir)
        self.logger.info(f"Re-analyzed {len(states)} states of '{scenario.name}': {', '.join(artifacts)}")

        manifest = config.manifest
        if manifest is None:
            raise ValueError(f"{run_dir} holds no run manifest")
        manifest["artifacts"] = sorted(set(manifest.get("artifacts", [])) | set(artifacts))
        self.manager.write_manifest(run_dir, manifest)
        summary = {
            "name": scenario.name,
            "outcome": manifest.get("outcome"),
            "t_final": states[-1].t,
            "energy": energy(scenario.nl, states[-1]) if scenario.nl.has_potential else None,
            "sup_u": states[-1].sup_norm(),
            "run_dir": run_dir,
        }
        RunDisplayManager.display_runs_pretty([summary])
        return EXIT_OK
