import unittest

from src.core.scenario.scenario_validator import ScenarioSchemaValidator, index_lines

GOOD_SCENARIO = """{
  "name": "small",
  "nonlinearity": {"builtin": "scalar-focusing"},
  "grid": {"nr": 101, "r_max": 10.0},
  "initial_data": {"bumps": [{"center": 2.0, "width": 1.0, "amplitude": 0.1}]},
  "evolve": {"T": 1.0}
}
"""


class TestIndexLines(unittest.TestCase):

    def test_keys_and_items(self):
        text = '{\n  "a": {\n    "b": [1,\n      2]\n  },\n  "c": "x"\n}'
        lines = index_lines(text)
        self.assertEqual(lines[()], 1)
        self.assertEqual(lines[("a",)], 2)
        self.assertEqual(lines[("a", "b")], 3)
        self.assertEqual(lines[("a", "b", 0)], 3)
        self.assertEqual(lines[("a", "b", 1)], 4)
        self.assertEqual(lines[("c",)], 6)

    def test_empty_containers(self):
        lines = index_lines('{"a": {}, "b": []}')
        self.assertEqual(lines[("a",)], 1)
        self.assertEqual(lines[("b",)], 1)


class TestScenarioSchemaValidator(unittest.TestCase):

    def setUp(self):
        self.validator = ScenarioSchemaValidator()

    def test_registry(self):
        schemas = self.validator.list_schemas()
        self.assertEqual([s["schema_id"] for s in schemas], ["atlas", "channels", "scenario"])
        definition = self.validator.get_schema("scenario")["definition"]
        self.assertIn("grid", definition["definitions"])

    def test_valid_document_gets_a_version(self):
        result = self.validator.validate_text(GOOD_SCENARIO, "scenario")
        self.assertTrue(result["valid"])
        self.assertEqual(result["document"]["$schema_version"], "1.0.0")

    def test_unknown_key_is_located(self):
        text = GOOD_SCENARIO.replace('"evolve": {"T": 1.0}', '"evolve": {"T": 1.0, "steps": 4}')
        result = self.validator.validate_text(text, "scenario")
        self.assertFalse(result["valid"])
        error = result["errors"][0]
        self.assertEqual(error["message"], "Unknown key 'steps'")
        self.assertEqual(error["field"], "evolve.steps")
        self.assertEqual(error["line"], 6)

    def test_out_of_range_value_is_located(self):
        text = GOOD_SCENARIO.replace('"nr": 101', '"nr": 3')
        error = self.validator.validate_text(text, "scenario")["errors"][0]
        self.assertEqual(error["field"], "grid.nr")
        self.assertEqual(error["line"], 4)

    def test_missing_required_field(self):
        text = GOOD_SCENARIO.replace(',\n  "evolve": {"T": 1.0}', "")
        result = self.validator.validate_text(text, "scenario")
        self.assertFalse(result["valid"])
        self.assertIn("evolve", result["errors"][0]["message"])

    def test_syntax_error(self):
        result = self.validator.validate_text('{\n  "name": "x",\n}', "scenario")
        self.assertFalse(result["valid"])
        self.assertEqual(result["errors"][0]["line"], 3)

    def test_channels_and_atlas(self):
        channels = {"grid": {"nr": 11, "r_max": 1.0}, "R": [0.0], "T": [1.0]}
        self.assertTrue(self.validator.validate(channels, "channels")["valid"])
        atlas = {"nonlinearity": {"builtin": "euclidean-2"}, "theta": {"radii": [1.0]}}
        self.assertFalse(self.validator.validate(atlas, "atlas")["valid"])

    def test_unknown_schema(self):
        with self.assertRaises(ValueError):
            self.validator.validate({}, "model")
        with self.assertRaises(ValueError):
            self.validator.validate({"$schema_version": "9.9.9"}, "scenario")

    def test_missing_registry(self):
        with self.assertRaises(FileNotFoundError):
            ScenarioSchemaValidator("/nonexistent/registry.json")


if __name__ == "__main__":
    unittest.main()
