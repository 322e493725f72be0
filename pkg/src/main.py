import argparse
import logging
import sys

from src.cli.atlas_cli import AtlasRunner, atlas_charges
from src.cli.channels_cli import ChannelsRunner
from src.cli.scenario_cli import EXIT_ERROR, EXIT_OK, ScenarioRunner
from src.core.errors import WaveLabError
from src.core.scenario.scenario_builder import Scenario, load_config, resolve_config_nonlinearity

SCHEMA_KINDS = ("scenario", "atlas", "channels")


def validate_config(config_path, kind: str = "scenario") -> str:
    """
    Schema and semantic validation only; nothing is computed or written.

    Returns:
        A one-line description of the validated configuration

    Raises:
        ConfigValidationError: With the field and line at fault
    """
    if kind == "scenario":
        scenario = Scenario.from_file(config_path)
        members = len(scenario.sweep_members())
        sweep = f", sweep of {members} members" if members else ""
        return (f"scenario '{scenario.name}': {scenario.nl.name}, {scenario.nr} radii, "
                f"dt <= {scenario.evolve_config().cfl * scenario.dr:.6g}{sweep}")

    config = load_config(config_path, kind)
    if kind == "atlas":
        nl = resolve_config_nonlinearity(config)
        charges = atlas_charges(config, nl.m, int(config.document.get("seed", 0)))
        return f"atlas of {nl.name}: {len(charges)} charges"
    return f"channels: {len(config.document['R'])} radii x {len(config.document['T'])} times"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="Configuration file, manifest or run directory")
    common.add_argument("--out", default=None, help="Output directory (overrides the file's output_dir)")
    common.add_argument("--jobs", type=int, default=1, help="Worker threads for sweeps and atlases")
    common.add_argument("--seed", type=int, default=None, help="Seed (overrides the file's seed)")
    common.add_argument("--verbose", action="store_true", help="Log at DEBUG level")

    parser = argparse.ArgumentParser(description="Radial energy-critical wave lab")
    subparsers = parser.add_subparsers(dest="command", help="Command to execute")
    subparsers.add_parser("run", parents=[common], help="Evolve a scenario and run its diagnostics")
    subparsers.add_parser("sweep", parents=[common], help="Run a scenario over the values of its sweep block")
    subparsers.add_parser("atlas", parents=[common], help="Classify Z_theta over a grid of charges")
    subparsers.add_parser("channels", parents=[common], help="Tabulate the exterior channel identity")
    subparsers.add_parser("analyze", parents=[common], help="Re-run diagnostics on a stored run directory")
    validate_parser = subparsers.add_parser("validate", parents=[common], help="Check a configuration only")
    validate_parser.add_argument("--kind", choices=SCHEMA_KINDS, default="scenario", help="Schema to check against")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return EXIT_ERROR

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO)
    logger = logging.getLogger("critical_wave_lab")

    try:
        if args.command == "run":
            return ScenarioRunner().run(args.config, seed=args.seed, out=args.out)
        if args.command == "sweep":
            return ScenarioRunner().sweep(args.config, jobs=args.jobs, seed=args.seed, out=args.out)
        if args.command == "atlas":
            return AtlasRunner().run(args.config, jobs=args.jobs, seed=args.seed, out=args.out)
        if args.command == "channels":
            return ChannelsRunner().run(args.config, seed=args.seed, out=args.out)
        if args.command == "analyze":
            return ScenarioRunner().analyze(args.config, seed=args.seed)
        print(f"valid {validate_config(args.config, args.kind)}")
        return EXIT_OK
    except (WaveLabError, FileNotFoundError, ValueError) as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
