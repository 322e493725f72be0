import json
import tempfile
import unittest
from pathlib import Path

import numpy as np
import pandas as pd

from src.core.evolution.initial_data import Bubble, bubble_state
from src.core.nonlinearity.registry import builtin
from src.core.persistence.report_io import (
    resolution_frame, series_frame, sweep_frame, three_energy_document, write_json, write_resolution, write_table,
)
from src.core.resolution.bound_check import check_3E_bound
from src.core.resolution.profile_fitting import Match, ResolutionReport


class TestReportIO(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)
        self.nl = builtin("scalar-focusing")
        self.state = bubble_state(self.nl, 401, 20.0, [Bubble(1.0)])

    def tearDown(self):
        self.tmp.cleanup()

    def test_series_frame(self):
        frame = series_frame([self.state, self.state.with_time(1.0)], self.nl, exterior_radii=[5.0, 20.0])
        self.assertEqual(list(frame.columns), ["t", "E", "norm_HH", "ext_R=5", "ext_R=20", "sup_u"])
        self.assertTrue(frame["ext_R=20"].isna().all())
        self.assertAlmostEqual(frame["sup_u"][0], 1.0)

    def test_series_without_potential(self):
        nl = builtin("nonpotential-triangular")
        state = bubble_state(builtin("euclidean-2"), 101, 10.0, [Bubble(1.0)])
        frame = series_frame([state], nl)
        self.assertNotIn("E", frame.columns)

    def test_tables_are_reproducible(self):
        frame = series_frame([self.state], self.nl, [2.0])
        first = write_table(frame, self.dir / "a" / "series.csv").read_bytes()
        second = write_table(frame, self.dir / "b" / "series.csv").read_bytes()
        self.assertEqual(first, second)
        loaded = pd.read_csv(self.dir / "a" / "series.csv", float_precision="round_trip")
        np.testing.assert_allclose(loaded.to_numpy(), frame.to_numpy(), rtol=1e-15)

    def test_json_handles_numpy(self):
        bound = check_3E_bound([self.state], self.nl)
        path = write_json(three_energy_document(bound), self.dir / "three_energy.json")
        document = json.loads(path.read_text())
        self.assertEqual(document["times"], [0.0])
        self.assertIs(document["flagged"], False)

    def test_resolution_files(self):
        report = ResolutionReport(t=3.0, J=2, scales=[0.1, 2.0], radiation_mass=0.2,
                                  matches=[Match("ground_state", 0.5, 1e-3, 0.34),
                                           Match("-ground_state", 9.0, 2e-3, 0.34)])
        frame = resolution_frame(report)
        self.assertEqual(list(frame["j"]), [1, 2])
        self.assertEqual(list(frame["candidate"]), ["ground_state", "-ground_state"])

        written = write_resolution(report, self.dir)
        self.assertEqual([p.name for p in written], ["resolution.csv", "resolution.json"])
        document = json.loads((self.dir / "resolution.json").read_text())
        self.assertEqual(document["J"], 2)
        self.assertEqual(document["matches"][1]["lam"], 9.0)

    def test_empty_resolution(self):
        frame = resolution_frame(ResolutionReport(t=0.0, J=0, scales=[]))
        self.assertEqual(len(frame), 0)
        self.assertEqual(list(frame.columns), ["j", "scale", "candidate", "lam", "residual", "energy"])

    def test_sweep_frame(self):
        frame = sweep_frame([{"name": "b", "value": 2.0, "outcome": "Blowup", "energy": -1.0},
                             {"name": "a", "value": 1.0, "outcome": None}])
        self.assertEqual(list(frame["member"]), ["a", "b"])
        self.assertEqual(list(frame["outcome"]), ["Error", "Blowup"])


if __name__ == "__main__":
    unittest.main()
