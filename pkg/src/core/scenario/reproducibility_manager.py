import hashlib
import json
import logging
import platform
import socket
from datetime import datetime, timezone
from importlib import metadata
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Union

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
TRACKED_PACKAGES = ("critical-wave-lab", "numpy", "scipy", "pandas", "jsonschema", "prettytable")


class ReproducibilityManager:
    """Writes and reads the manifest that makes a run directory re-runnable."""

    def __init__(self, packages: Iterable[str] = TRACKED_PACKAGES):
        self.packages = tuple(packages)

    @staticmethod
    def calculate_hash_digest(document: Dict[str, Any]) -> str:
        """
        SHA256 of the canonical JSON form of a configuration (sorted keys, compact separators).

        Args:
            document: The validated configuration

        Returns:
            str: SHA256 hex digest
        """
        canonical = json.dumps(document, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def record_environment(self) -> Dict[str, Any]:
        """
        Versions of the interpreter and of the numerical stack, plus system info.

        Packages that are not installed are recorded as None.
        """
        versions = {"python": platform.python_version()}
        for package in self.packages:
            try:
                versions[package] = metadata.version(package)
            except metadata.PackageNotFoundError:
                versions[package] = None
        return {
            "versions": versions,
            "system_info": {
                "os": platform.system(),
                "platform": platform.platform(),
                "hostname": socket.gethostname(),
            },
        }

    def generate_execution_log(self, document: Dict[str, Any], seed: int, outcome: Optional[str] = None,
                               artifacts: Iterable[str] = (), kind: str = "scenario") -> Dict[str, Any]:
        """
        Build the manifest of a run.

        Args:
            document: The validated configuration as executed
            seed: Effective seed
            outcome: Run outcome ("Completed", "BlowupDetected", or None for non-evolution runs)
            artifacts: Paths of emitted files, relative to the run directory
            kind: Schema ID of the configuration

        Returns:
            dict: Manifest with config hash, seed, environment and artifact list
        """
        digest = self.calculate_hash_digest(document)
        now = datetime.now(timezone.utc)
        return {
            "execution_id": f"exec_{digest[:8]}_{int(now.timestamp())}",
            "timestamp": now.isoformat(),
            "kind": kind,
            "config_hash": digest,
            "seed": seed,
            "outcome": outcome,
            "scenario": document,
            "environment": self.record_environment(),
            "artifacts": sorted(artifacts),
        }

    def write_manifest(self, run_dir: Union[str, Path], manifest: Dict[str, Any]) -> Path:
        path = Path(run_dir) / MANIFEST_NAME
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(manifest, f, indent=2, sort_keys=True)
            f.write("\n")
        logger.info(f"Wrote manifest {path} (config hash {manifest['config_hash'][:12]})")
        return path

    @staticmethod
    def is_manifest(document: Any) -> bool:
        return isinstance(document, dict) and "config_hash" in document and "scenario" in document

    def load_manifest(self, path: Union[str, Path]) -> Dict[str, Any]:
        """
        Read a manifest, given either its path or the run directory holding it.

        Raises:
            FileNotFoundError: If no manifest is found
            ValueError: If the file is not a manifest
        """
        path = Path(path)
        if path.is_dir():
            path = path / MANIFEST_NAME
        if not path.exists():
            raise FileNotFoundError(f"Manifest not found: {path}")
        with open(path, "r", encoding="utf-8") as f:
            manifest = json.load(f)
        if not self.is_manifest(manifest):
            raise ValueError(f"{path} is not a run manifest")
        if self.calculate_hash_digest(manifest["scenario"]) != manifest["config_hash"]:
            logger.warning(f"Manifest {path}: configuration does not match its recorded hash")
        return manifest
