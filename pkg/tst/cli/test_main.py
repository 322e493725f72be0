import json
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

import numpy as np
import pandas as pd

from src.cli.atlas_cli import AtlasRunner
from src.cli.channels_cli import ChannelsRunner
from src.cli.scenario_cli import EXIT_BLOWUP, EXIT_ERROR, EXIT_OK, ScenarioRunner
from src.core.evolution.initial_data import Bump, bump_state
from src.main import main, validate_config

CONFIG_DIR = Path(__file__).resolve().parents[2] / "config" / "scenarios"

DEFOCUSING_RUN = {
    "name": "defocusing-small",
    "nonlinearity": {"builtin": "scalar-defocusing"},
    "grid": {"nr": 201, "r_max": 20.0},
    "initial_data": {"bumps": [{"center": 3.0, "width": 1.0, "amplitude": 0.5}]},
    "evolve": {"T": 2.0, "cfl": 0.5, "snapshot_every": 10},
    "analysis": {"energy_series": True, "exterior_radii": [2.0], "virial": True, "three_energy_bound": True},
}


class CommandTestCase(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)
        self.display = patch("src.cli.cli_response_utils.run_display_manager.print", create=True)
        self.display.start()

    def tearDown(self):
        self.display.stop()
        self.tmp.cleanup()

    def write(self, document, name="config.json") -> Path:
        path = self.dir / name
        path.write_text(json.dumps(document, indent=2))
        return path


class TestMain(CommandTestCase):

    @patch("src.main.print", create=True)
    def test_no_command(self, _):
        with patch("argparse.ArgumentParser.print_help"):
            self.assertEqual(main([]), EXIT_ERROR)

    @patch("src.main.print", create=True)
    def test_validate(self, mock_print):
        self.assertEqual(main(["validate", "--config", str(CONFIG_DIR / "w-static.json")]), EXIT_OK)
        self.assertTrue(mock_print.call_args[0][0].startswith("valid scenario 'w-static'"))
        code = main(["validate", "--kind", "channels", "--config", str(CONFIG_DIR / "channels-bump.json")])
        self.assertEqual(code, EXIT_OK)

    @patch("src.main.print", create=True)
    def test_validate_failures(self, _):
        bad = self.write(dict(DEFOCUSING_RUN, grid={"nr": 201}))
        self.assertEqual(main(["validate", "--config", str(bad)]), EXIT_ERROR)
        self.assertEqual(main(["validate", "--config", str(self.dir / "missing.json")]), EXIT_ERROR)

    def test_validate_config_descriptions(self):
        self.assertIn("sweep of 4 members", validate_config(CONFIG_DIR / "amplitude-sweep.json"))
        self.assertEqual(validate_config(CONFIG_DIR / "atlas-euclidean-2.json", "atlas"),
                         "atlas of euclidean-2: 64 charges")
        self.assertEqual(validate_config(CONFIG_DIR / "channels-bump.json", "channels"),
                         "channels: 3 radii x 3 times")


class TestScenarioRunner(CommandTestCase):

    def test_run_then_analyze(self):
        run_dir = self.dir / "run"
        code = main(["run", "--config", str(self.write(DEFOCUSING_RUN)), "--out", str(run_dir)])
        self.assertEqual(code, EXIT_OK)

        manifest = json.loads((run_dir / "manifest.json").read_text())
        self.assertEqual(manifest["outcome"], "Completed")
        for name in ("final.cwws", "series.csv", "virial.csv", "three_energy.json",
                     "snapshots/snap_00000000.cwws", "snapshots/snap_00000040.cwws"):
            self.assertIn(name, manifest["artifacts"])
            self.assertTrue((run_dir / name).exists())

        series = pd.read_csv(run_dir / "series.csv")
        np.testing.assert_allclose(series["t"], [0.0, 0.5, 1.0, 1.5, 2.0])
        np.testing.assert_allclose(series["E"], series["E"][0], rtol=1e-2)
        bound = json.loads((run_dir / "three_energy.json").read_text())
        self.assertFalse(bound["flagged"])

        before = (run_dir / "series.csv").read_bytes()
        self.assertEqual(main(["analyze", "--config", str(run_dir)]), EXIT_OK)
        self.assertEqual((run_dir / "series.csv").read_bytes(), before)
        self.assertEqual(json.loads((run_dir / "manifest.json").read_text())["artifacts"], manifest["artifacts"])

    def test_blowup_exit_code(self):
        document = dict(DEFOCUSING_RUN, name="blowup-small", nonlinearity={"builtin": "scalar-focusing"},
                        grid={"nr": 2501, "r_max": 25.0},
                        initial_data={"bumps": [{"center": 0.0, "width": 1.0, "amplitude": 6.0}]},
                        evolve={"T": 20.0, "cfl": 0.5, "snapshot_every": 1000},
                        analysis={"energy_series": True, "three_energy_bound": True})
        code = ScenarioRunner().run(self.write(document), out=self.dir / "blowup")
        self.assertEqual(code, EXIT_BLOWUP)
        bound = json.loads((self.dir / "blowup" / "three_energy.json").read_text())
        self.assertIn("skipped", bound)

    def test_sweep(self):
        document = dict(DEFOCUSING_RUN, sweep={"path": "initial_data.bumps.0.amplitude", "values": [0.2, 0.4]})
        out = self.dir / "sweep"
        code = ScenarioRunner().sweep(self.write(document), jobs=2, out=out)
        self.assertEqual(code, EXIT_OK)

        summary = pd.read_csv(out / "sweep.csv")
        self.assertEqual(list(summary["member"]), ["defocusing-small-000", "defocusing-small-001"])
        self.assertEqual(list(summary["outcome"]), ["Completed", "Completed"])
        self.assertLess(summary["final_energy"][0], summary["final_energy"][1])
        self.assertTrue((out / "defocusing-small-001" / "manifest.json").exists())

    def test_failing_sweep_member(self):
        document = dict(DEFOCUSING_RUN, sweep={"path": "grid.r_max", "values": [20.0, 4.0]})
        code = ScenarioRunner().sweep(self.write(document), out=self.dir / "sweep")
        self.assertEqual(code, EXIT_ERROR)
        summary = pd.read_csv(self.dir / "sweep" / "sweep.csv")
        self.assertEqual(list(summary["outcome"]), ["Completed", "Error"])


class TestChannelsRunner(CommandTestCase):

    def test_channel_table(self):
        data = bump_state(2001, 40.0, 1, [Bump(3.0, 1.9, 1.0)])
        frame = ChannelsRunner().channel_table(data, [0.0, 6.0], [10.0, 38.0])
        self.assertEqual(len(frame), 4)
        far = frame[(frame["R"] == 6.0) & (frame["T"] == 10.0)].iloc[0]
        self.assertEqual(far["lhs"], 0.0)
        self.assertEqual(far["relative_gap"], 0.0)
        late = frame[frame["T"] == 38.0]
        self.assertTrue(late["lhs"].isna().all())
        self.assertTrue(all(late["error"].str.contains("cannot be followed")))

    def test_run(self):
        document = {"name": "channels-small", "grid": {"nr": 2001, "r_max": 40.0},
                    "bumps": [{"center": 3.0, "width": 1.9, "amplitude": 1.0}], "R": [0.0, 1.0], "T": [20.0]}
        out = self.dir / "channels"
        self.assertEqual(ChannelsRunner().run(self.write(document), out=out), EXIT_OK)
        frame = pd.read_csv(out / "channels.csv")
        self.assertEqual(list(frame["R"]), [0.0, 1.0])
        self.assertEqual(json.loads((out / "manifest.json").read_text())["kind"], "channels")


class TestAtlasRunner(CommandTestCase):

    def test_ground_state_charges(self):
        document = {"name": "atlas-small", "nonlinearity": {"builtin": "scalar-focusing"},
                    "theta": {"vectors": [[1.0], [-1.0]], "radii": [float(np.sqrt(3.0))]}}
        out = self.dir / "atlas"
        self.assertEqual(AtlasRunner().run(self.write(document), jobs=2, out=out), EXIT_OK)
        frame = pd.read_csv(out / "atlas.csv")
        np.testing.assert_allclose(frame["theta_1"], [np.sqrt(3.0), -np.sqrt(3.0)])
        self.assertEqual(list(frame["case"]), ["C_energy", "C_energy"])
        np.testing.assert_allclose(frame["w_fit_lam"], 1.0, rtol=1e-3)
        assumptions = json.loads((out / "assumptions.json").read_text())
        self.assertEqual(assumptions["case_counts"], {"C_energy": 2})

    def test_bad_direction(self):
        document = {"nonlinearity": {"builtin": "euclidean-2"}, "theta": {"vectors": [[1.0]], "radii": [1.0]}}
        with patch("src.main.print", create=True):
            self.assertEqual(main(["atlas", "--config", str(self.write(document)), "--out", str(self.dir)]),
                             EXIT_ERROR)


if __name__ == "__main__":
    unittest.main()
