"""
Loading of configuration files into runnable scenarios.

A configuration is schema-checked first, then semantically: the nonlinearity must
resolve, bubble directions must be focusing fixed-point directions, bump
components must exist and an explicit dt must respect the CFL bound. Every
failure is raised as ConfigValidationError carrying the field and line at fault.
"""

import copy
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from src.core.errors import ConfigValidationError, UnknownName
from src.core.evolution.initial_data import Bubble, Bump, bubble_state, bump_state
from src.core.evolution.leapfrog_solver import DEFAULT_BLOWUP_THRESHOLD, DEFAULT_CFL, EvolveConfig
from src.core.evolution.wave_state import WaveState
from src.core.nonlinearity.registry import resolve_nonlinearity
from src.core.nonlinearity.vector_nonlinearity import VectorNonlinearity
from src.core.persistence.snapshot_io import read_snapshot
from src.core.scenario.reproducibility_manager import ReproducibilityManager
from src.core.scenario.scenario_validator import ScenarioSchemaValidator, index_lines
from src.core.stationary.ground_state import fixed_point_directions

logger = logging.getLogger(__name__)

DEFAULT_ANALYSIS = {
    "energy_series": True,
    "exterior_radii": [],
    "virial": False,
    "three_energy_bound": False,
    "radiation": False,
    "resolution": {"enabled": False},
}


@dataclass
class LoadedConfig:
    """
    A validated configuration document.

    Attributes:
        document: The document, with "$schema_version" filled in
        schema_id: Schema it was validated against
        base_dir: Directory relative paths inside the document refer to
        lines: Line of every key in the source text (empty for in-memory documents)
        manifest: The manifest it was read from, when re-running a run directory
    """

    document: Dict[str, Any]
    schema_id: str
    base_dir: Path
    lines: Dict[tuple, int] = field(default_factory=dict)
    manifest: Optional[Dict[str, Any]] = None

    def error(self, message: str, path: tuple) -> ConfigValidationError:
        dotted = ".".join(str(p) for p in path) if path else None
        return ConfigValidationError(message, field=dotted, line=self.lines.get(tuple(path)))


def load_config(path: Union[str, Path], schema_id: str,
                validator: Optional[ScenarioSchemaValidator] = None) -> LoadedConfig:
    """
    Read and schema-check a configuration file, or the scenario recorded in a run manifest.

    Args:
        path: Configuration file, manifest file or run directory
        schema_id: Schema to validate against
        validator: Schema validator (defaults to the bundled registry)

    Raises:
        FileNotFoundError: If the file does not exist
        ConfigValidationError: On syntax or schema errors
    """
    validator = validator or ScenarioSchemaValidator()
    manager = ReproducibilityManager()
    path = Path(path)
    if path.is_dir():
        path = path / "manifest.json"
    if not path.exists():
        raise FileNotFoundError(f"Configuration file not found: {path}")

    text = path.read_text(encoding="utf-8")
    manifest = None
    try:
        parsed = json.loads(text)
    except json.JSONDecodeError:
        parsed = None

    if manager.is_manifest(parsed):
        manifest = manager.load_manifest(path)
        schema_id = manifest.get("kind", schema_id)
        result = validator.validate(manifest["scenario"], schema_id)
        prefix = ("scenario",)
    else:
        result = validator.validate_file(path, schema_id)
        prefix = ()

    lines = index_lines(text) if parsed is not None else {}
    if not result["valid"]:
        first = result["errors"][0]
        line = first["line"]
        if manifest is not None:
            parts = first["field"].split(".") if first["field"] else []
            field_path = prefix + tuple(int(p) if p.isdigit() else p for p in parts)
            line = lines.get(field_path)
        extra = f" (+{len(result['errors']) - 1} more)" if len(result["errors"]) > 1 else ""
        raise ConfigValidationError(f"{path}: {first['message']}{extra}", field=first["field"], line=line)

    if manifest is not None:
        lines = {key[1:]: line for key, line in lines.items() if key[:1] == prefix}
    return LoadedConfig(result["document"], schema_id, path.parent, lines, manifest)


def resolve_config_nonlinearity(config: LoadedConfig) -> VectorNonlinearity:
    block = config.document["nonlinearity"]
    try:
        return resolve_nonlinearity(block)
    except UnknownName as e:
        raise config.error(str(e), ("nonlinearity", "builtin"))
    except (ValueError, KeyError) as e:
        raise config.error(f"Invalid custom nonlinearity: {e}", ("nonlinearity", "custom"))


def set_path(document: Dict[str, Any], dotted: str, value) -> Dict[str, Any]:
    """
    Copy of document with the value at a dotted path replaced; list items are addressed by index.

    Raises:
        KeyError: If an intermediate key is missing
        IndexError: If an index is out of range
    """
    updated = copy.deepcopy(document)
    parts = dotted.split(".")
    node = updated
    for part in parts[:-1]:
        node = node[int(part)] if isinstance(node, list) else node[part]
    last = parts[-1]
    if isinstance(node, list):
        node[int(last)] = value
    elif isinstance(node, dict):
        node[last] = value
    else:
        raise TypeError(f"Cannot set '{last}' inside a {type(node).__name__}")
    return updated


class Scenario:
    """
    A validated scenario: nonlinearity, initial data, evolution parameters and analysis plan.

    Args:
        config: Loaded "scenario" configuration
        seed: Seed override (the document's seed, else 0)
        output_dir: Output directory override
    """

    def __init__(self, config: LoadedConfig, seed: Optional[int] = None,
                 output_dir: Optional[Union[str, Path]] = None):
        self.config = config
        self.document = copy.deepcopy(config.document)
        self.name = self.document["name"]
        self.seed = int(seed if seed is not None else self.document.get("seed", 0))
        self.document["seed"] = self.seed
        if output_dir is not None:
            self.output_dir = Path(output_dir)
        else:
            self.output_dir = Path(self.document.get("output_dir", Path("runs") / self.name))
        self.nl = resolve_config_nonlinearity(config)
        self.nr = int(self.document["grid"]["nr"])
        self.r_max = float(self.document["grid"]["r_max"])
        self.analysis = {**DEFAULT_ANALYSIS, **self.document.get("analysis", {})}
        self._check_semantics()

    @classmethod
    def from_file(cls, path: Union[str, Path], seed: Optional[int] = None,
                  output_dir: Optional[Union[str, Path]] = None,
                  validator: Optional[ScenarioSchemaValidator] = None) -> "Scenario":
        return cls(load_config(path, "scenario", validator), seed, output_dir)

    @property
    def dr(self) -> float:
        return self.r_max / (self.nr - 1)

    def _check_semantics(self):
        initial = self.document["initial_data"]
        for k, bump in enumerate(initial.get("bumps", [])):
            if bump.get("component", 0) >= self.nl.m:
                raise self.config.error(f"Bump component {bump['component']} out of range for m = {self.nl.m}",
                                        ("initial_data", "bumps", k, "component"))
        for k, bubble in enumerate(initial.get("bubbles", [])):
            direction = bubble.get("direction")
            if isinstance(direction, list):
                if len(direction) != self.nl.m:
                    raise self.config.error(f"Direction has {len(direction)} components, expected {self.nl.m}",
                                            ("initial_data", "bubbles", k, "direction"))
                if not fixed_point_directions(self.nl, [direction]):
                    raise self.config.error(f"Direction {direction} is not a focusing fixed-point direction",
                                            ("initial_data", "bubbles", k, "direction"))
        if "from_file" in initial and not self._data_path(initial["from_file"]).exists():
            raise self.config.error(f"Initial data file not found: {initial['from_file']}",
                                    ("initial_data", "from_file"))
        if not any(initial.get(key) for key in ("bubbles", "bumps", "from_file")):
            logger.warning(f"Scenario '{self.name}' has zero initial data")

        evolve = self.document["evolve"]
        cfl = evolve.get("cfl", DEFAULT_CFL)
        if "dt" in evolve and evolve["dt"] > cfl * self.dr:
            raise self.config.error(f"dt = {evolve['dt']} exceeds cfl * dr = {cfl * self.dr:.6g}", ("evolve", "dt"))

    def _data_path(self, name: str) -> Path:
        path = Path(name)
        return path if path.is_absolute() else self.config.base_dir / path

    def _bubble_direction(self, bubble: Dict[str, Any], rng: np.random.Generator, index: int):
        direction = bubble.get("direction")
        if direction != "random":
            return direction
        omega = rng.standard_normal(self.nl.m)
        omega /= np.linalg.norm(omega)
        if not fixed_point_directions(self.nl, [omega]):
            raise self.config.error(f"Random direction {omega} is not a fixed-point direction of {self.nl.name}",
                                    ("initial_data", "bubbles", index, "direction"))
        return omega.tolist()

    def bubbles(self) -> List[Bubble]:
        rng = np.random.default_rng(self.seed)
        return [
            Bubble(float(b["lam"]), float(b.get("sign", 1)), self._bubble_direction(b, rng, k))
            for k, b in enumerate(self.document["initial_data"].get("bubbles", []))
        ]

    def bumps(self) -> List[Bump]:
        return [
            Bump(float(b["center"]), float(b["width"]), float(b["amplitude"]),
                 int(b.get("component", 0)), b.get("field", "u"))
            for b in self.document["initial_data"].get("bumps", [])
        ]

    def initial_state(self) -> WaveState:
        """Sum of the configured bubbles, bumps and file-loaded state on the scenario grid."""
        state = bump_state(self.nr, self.r_max, self.nl.m, self.bumps())
        bubbles = self.bubbles()
        if bubbles:
            state = state + bubble_state(self.nl, self.nr, self.r_max, bubbles)

        name = self.document["initial_data"].get("from_file")
        if name:
            loaded = read_snapshot(self._data_path(name))
            if loaded.m != self.nl.m or not np.isclose(loaded.dr, self.dr, rtol=1e-12) or loaded.nr > self.nr:
                raise self.config.error(
                    f"Stored state ({loaded.nr} radii, dr = {loaded.dr}, m = {loaded.m}) does not fit the grid",
                    ("initial_data", "from_file"),
                )
            state = state + loaded.padded(self.nr).with_time(0.0)
        return state

    def evolve_config(self) -> EvolveConfig:
        evolve = self.document["evolve"]
        return EvolveConfig(
            nl=self.nl,
            T=float(evolve["T"]),
            dt=evolve.get("dt"),
            snapshot_every=int(evolve.get("snapshot_every", 100)),
            cfl=float(evolve.get("cfl", DEFAULT_CFL)),
            blowup_threshold=float(evolve.get("blowup_threshold", DEFAULT_BLOWUP_THRESHOLD)),
            check_domain=bool(evolve.get("check_domain", True)),
        )

    def sweep_members(self) -> List[Tuple[str, Any, Dict[str, Any]]]:
        """
        (member name, value, member document) per sweep value; the member documents have no sweep block.

        Raises:
            ConfigValidationError: If the swept path does not exist
        """
        sweep = self.document.get("sweep")
        if not sweep:
            return []
        base = {k: v for k, v in self.document.items() if k != "sweep"}
        members = []
        for k, value in enumerate(sweep["values"]):
            try:
                member = set_path(base, sweep["path"], value)
            except (KeyError, IndexError, ValueError, TypeError):
                raise self.config.error(f"Sweep path '{sweep['path']}' does not exist", ("sweep", "path"))
            member["name"] = f"{self.name}-{k:03d}"
            members.append((member["name"], value, member))
        return members

    def member(self, document: Dict[str, Any], validator: Optional[ScenarioSchemaValidator] = None) -> "Scenario":
        """A scenario for one sweep member document, written under this scenario's output directory."""
        validator = validator or ScenarioSchemaValidator()
        result = validator.validate(document, "scenario")
        if not result["valid"]:
            first = result["errors"][0]
            raise ConfigValidationError(f"Sweep member '{document.get('name')}': {first['message']}",
                                        field=first["field"])
        config = LoadedConfig(result["document"], "scenario", self.config.base_dir)
        return Scenario(config, self.seed, self.output_dir / document["name"])
