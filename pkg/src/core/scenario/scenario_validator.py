"""
ScenarioSchemaValidator for the wave lab configuration files.

Schemas are kept in a versioned JSON registry. Definitions shared by several
schemas (nonlinearity, grid, bump) live once at the top of the registry and are
merged into every schema at load time. Validation errors are attributed to the
dotted path of the offending field and, when the raw text is known, to its line.
"""

import bisect
import json
import logging
import re
from json.decoder import scanstring
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import jsonschema
from jsonschema import SchemaError

logger = logging.getLogger(__name__)

DEFAULT_REGISTRY_PATH = Path(__file__).resolve().parents[3] / "config" / "schema_registry.json"

_WHITESPACE = re.compile(r"\s*")
_SCALAR = re.compile(r"-?(?:\d+(?:\.\d+)?(?:[eE][+-]?\d+)?|Infinity)|NaN|true|false|null")

JsonPath = Tuple[Union[str, int], ...]


def index_lines(text: str) -> Dict[JsonPath, int]:
    """
    Map every key and array item of a JSON text to the 1-based line where it starts.

    A key is attributed to the line of its name rather than of its value.
    The text is assumed to be valid JSON.
    """
    newlines = [i for i, ch in enumerate(text) if ch == "\n"]
    lines: Dict[JsonPath, int] = {}

    def line_at(pos: int) -> int:
        return bisect.bisect_left(newlines, pos) + 1

    def skip(pos: int) -> int:
        return _WHITESPACE.match(text, pos).end()

    def value(pos: int, path: JsonPath) -> int:
        pos = skip(pos)
        lines.setdefault(path, line_at(pos))
        ch = text[pos]
        if ch == "{":
            pos = skip(pos + 1)
            if text[pos] == "}":
                return pos + 1
            while True:
                pos = skip(pos)
                key, after = scanstring(text, pos + 1)
                lines[path + (key,)] = line_at(pos)
                pos = skip(after) + 1
                pos = skip(value(pos, path + (key,)))
                if text[pos] == ",":
                    pos += 1
                    continue
                return pos + 1
        if ch == "[":
            pos = skip(pos + 1)
            if text[pos] == "]":
                return pos + 1
            index = 0
            while True:
                pos = skip(value(pos, path + (index,)))
                if text[pos] == ",":
                    pos += 1
                    index += 1
                    continue
                return pos + 1
        if ch == '"':
            return scanstring(text, pos + 1)[1]
        return _SCALAR.match(text, pos).end()

    value(0, ())
    return lines


def _dotted(path) -> Optional[str]:
    parts = [str(p) for p in path]
    return ".".join(parts) if parts else None


def _unknown_keys(error: jsonschema.ValidationError) -> List[str]:
    if error.validator != "additionalProperties" or not isinstance(error.instance, dict):
        return []
    known = set(error.schema.get("properties", {}))
    return sorted(key for key in error.instance if key not in known)


class ScenarioSchemaValidator:
    """
    Validates configuration documents against schema definitions from a registry.

    Attributes:
        schema_registry_path: Path to the schema registry JSON file
        schemas: Loaded schemas, keyed by schema_id then by version
    """

    def __init__(self, schema_registry_path: Union[str, Path] = DEFAULT_REGISTRY_PATH):
        """
        Args:
            schema_registry_path: Path to the schema registry JSON file

        Raises:
            FileNotFoundError: If the schema registry file doesn't exist
            ValueError: If the schema registry is invalid
        """
        self.schema_registry_path = Path(schema_registry_path)
        self.schemas: Dict[str, Dict[str, Dict[str, Any]]] = {}
        self._load_schemas()

    def _load_schemas(self):
        if not self.schema_registry_path.exists():
            raise FileNotFoundError(f"Schema registry not found at: {self.schema_registry_path}")

        try:
            with open(self.schema_registry_path, "r", encoding="utf-8") as f:
                registry = json.load(f)
        except json.JSONDecodeError as e:
            raise ValueError(f"Invalid JSON in schema registry: {e}")

        if not isinstance(registry, dict):
            raise ValueError("Schema registry must be a JSON object")
        if "registry_name" not in registry:
            raise ValueError("Schema registry must have a 'registry_name' field")
        if "schemas" not in registry or not isinstance(registry["schemas"], list):
            raise ValueError("Schema registry must have a 'schemas' array")

        shared = registry.get("shared_definitions", {})
        for schema_entry in registry["schemas"]:
            if not isinstance(schema_entry, dict):
                logger.warning("Invalid schema entry (not an object), skipping")
                continue

            required_fields = ["schema_id", "schema_version", "schema_definition"]
            if not all(key in schema_entry for key in required_fields):
                logger.warning(f"Schema entry missing required fields {required_fields}, skipping")
                continue

            schema_id = schema_entry["schema_id"]
            schema_version = schema_entry["schema_version"]
            definition = dict(schema_entry["schema_definition"])
            definition["definitions"] = {**shared, **definition.get("definitions", {})}

            try:
                jsonschema.Draft7Validator.check_schema(definition)
            except SchemaError as e:
                logger.error(f"Invalid schema definition for {schema_id}: {e.message}")
                continue

            self.schemas.setdefault(schema_id, {})[schema_version] = {
                "definition": definition,
                "description": schema_entry.get("description", ""),
                "updated_date": schema_entry.get("updated_date"),
            }
            logger.debug(f"Loaded schema: {schema_id} (version {schema_version})")

        logger.debug(f"Loaded {len(self.schemas)} schema types from registry")

    def validate(self, document: Dict[str, Any], schema_id: str,
                 source_text: Optional[str] = None) -> Dict[str, Any]:
        """
        Validate a document against a schema.

        Args:
            document: The parsed document
            schema_id: The ID of the schema to validate against
            source_text: Raw JSON text of the document, for line attribution

        Returns:
            A dictionary with keys:
                - "valid": True if the document is valid
                - "document": The document, with "$schema_version" filled in
                - "errors": List of {"message", "field", "line"}, empty when valid

        Raises:
            ValueError: If the schema ID or the requested version is not found
        """
        if schema_id not in self.schemas:
            raise ValueError(f"Schema ID '{schema_id}' not found in registry")
        if not isinstance(document, dict):
            return {"valid": False, "document": document,
                    "errors": [{"message": "Document must be a JSON object", "field": None, "line": 1}]}

        if "$schema_version" in document:
            schema_version = document["$schema_version"]
            if schema_version not in self.schemas[schema_id]:
                raise ValueError(f"Schema version '{schema_version}' not found for schema ID '{schema_id}'")
        else:
            schema_version = self._get_latest_version(schema_id)
            document = dict(document)
            document["$schema_version"] = schema_version
            logger.debug(f"No schema version specified, using latest version: {schema_version}")

        validator = jsonschema.Draft7Validator(self.schemas[schema_id][schema_version]["definition"])
        lines = index_lines(source_text) if source_text is not None else {}
        errors = []
        for error in sorted(validator.iter_errors(document), key=lambda e: [str(p) for p in e.absolute_path]):
            path = tuple(error.absolute_path)
            unknown = _unknown_keys(error)
            if unknown:
                path = path + (unknown[0],)
                message = f"Unknown key '{unknown[0]}'"
            else:
                message = error.message
            field = _dotted(path)
            errors.append({"message": message, "field": field, "line": lines.get(path)})
            logger.debug(f"Schema '{schema_id}' {schema_version}: {message} at {field or '<root>'}")

        return {"valid": not errors, "errors": errors, "document": document}

    def validate_text(self, text: str, schema_id: str) -> Dict[str, Any]:
        """Parse JSON text and validate it; syntax errors are reported with the decoder's line and column."""
        try:
            document = json.loads(text)
        except json.JSONDecodeError as e:
            return {"valid": False, "document": None,
                    "errors": [{"message": f"Invalid JSON: {e.msg} (column {e.colno})", "field": None,
                                "line": e.lineno}]}
        return self.validate(document, schema_id, source_text=text)

    def validate_file(self, path: Union[str, Path], schema_id: str) -> Dict[str, Any]:
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Configuration file not found: {path}")
        return self.validate_text(path.read_text(encoding="utf-8"), schema_id)

    def get_schema(self, schema_id: str, version: Optional[str] = None) -> Dict[str, Any]:
        """
        Get a schema by ID and optionally version (defaults to latest).

        Raises:
            ValueError: If the schema ID or version is not found
        """
        if schema_id not in self.schemas:
            raise ValueError(f"Schema ID '{schema_id}' not found in registry")
        if version is None:
            version = self._get_latest_version(schema_id)
        elif version not in self.schemas[schema_id]:
            raise ValueError(f"Schema version '{version}' not found for schema ID '{schema_id}'")

        entry = self.schemas[schema_id][version]
        return {
            "schema_id": schema_id,
            "schema_version": version,
            "definition": entry["definition"],
            "description": entry["description"],
            "updated_date": entry["updated_date"],
        }

    def list_schemas(self) -> List[Dict[str, Any]]:
        result = []
        for schema_id, versions in self.schemas.items():
            latest_version = self._get_latest_version(schema_id)
            result.append({
                "schema_id": schema_id,
                "latest_version": latest_version,
                "description": versions[latest_version]["description"],
                "all_versions": sorted(versions, key=lambda v: [int(x) for x in v.split(".")]),
            })
        result.sort(key=lambda x: x["schema_id"])
        return result

    def _get_latest_version(self, schema_id: str) -> str:
        if schema_id not in self.schemas:
            raise ValueError(f"Schema ID '{schema_id}' not found in registry")
        return max(self.schemas[schema_id], key=lambda v: [int(x) for x in v.split(".")])
