import tempfile
import unittest
from pathlib import Path

import numpy as np

from src.core.persistence.profile_io import (
    PROFILE_HEADER, read_profile_binary, read_profile_csv, write_profile_binary, write_profile_csv,
)
from src.core.stationary.explicit_family import default_grid, explicit_W


class TestProfileIO(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)
        self.profile = explicit_W(1.0, default_grid(100.0, 16)).embed([0.6, 0.8])

    def tearDown(self):
        self.tmp.cleanup()

    def test_csv_columns_and_values(self):
        path = write_profile_csv(self.profile, self.dir / "nested" / "w.csv")
        header = path.read_text().splitlines()[0]
        self.assertEqual(header, "r,u1,u2,du1,du2")

        loaded = read_profile_csv(path)
        self.assertEqual(loaded.m, 2)
        self.assertTrue(loaded.regular_at_origin)
        np.testing.assert_array_equal(loaded.grid, self.profile.grid)
        np.testing.assert_array_equal(loaded.values, self.profile.values)
        np.testing.assert_array_equal(loaded.derivs, self.profile.derivs)

    def test_binary_is_exact(self):
        path = write_profile_binary(self.profile, self.dir / "w.cwrp")
        self.assertEqual(path.stat().st_size, PROFILE_HEADER.size + 8 * self.profile.n * 5)
        loaded = read_profile_binary(path)
        np.testing.assert_array_equal(loaded.values, self.profile.values)
        np.testing.assert_array_equal(loaded.derivs, self.profile.derivs)

    def test_bad_binary(self):
        path = self.dir / "bad.cwrp"
        path.write_bytes(b"XXXX" + bytes(PROFILE_HEADER.size))
        with self.assertRaises(ValueError):
            read_profile_binary(path)

        good = write_profile_binary(self.profile, self.dir / "w.cwrp")
        truncated = self.dir / "short.cwrp"
        truncated.write_bytes(good.read_bytes()[:-8])
        with self.assertRaises(ValueError):
            read_profile_binary(truncated)

    def test_bad_csv(self):
        path = self.dir / "table.csv"
        path.write_text("r,u1\n0,1\n1,2\n")
        with self.assertRaises(ValueError):
            read_profile_csv(path)

    def test_missing_files(self):
        with self.assertRaises(FileNotFoundError):
            read_profile_csv(self.dir / "none.csv")
        with self.assertRaises(FileNotFoundError):
            read_profile_binary(self.dir / "none.cwrp")


if __name__ == "__main__":
    unittest.main()
