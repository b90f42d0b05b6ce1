"""Command-line interface: ``qkdsim <command> --scenario FILE --out DIR``.

Exit codes: 0 success, 1 usage error or unknown command, 2 domain, parse,
codec, resource or I/O error.
"""
import argparse
import logging
import sys
from typing import List, Optional

from scenarios.application.services import ScenarioApplicationService
from scenarios.domain.entities import ScenarioConfig
from scenarios.infrastructure import scenario_repository
from shared.domain.errors import QkdSimError, UnknownCommandError
from shared.interfaces.commands import CommandRegistry

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ERROR = 2


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _key_value(text: str):
    key, sep, value = text.partition("=")
    if not sep or not key.strip():
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    return key.strip(), value.strip()


def build_parser(registry: CommandRegistry) -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="qkdsim",
        description="Ground-to-satellite QKD uplink simulator: writes results as CSV tables.",
    )
    parser.add_argument("command", help="one of: " + ", ".join(registry.names()))
    parser.add_argument("--scenario", help="scenario file (defaults apply when omitted)")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--seed", type=int, help="Monte Carlo seed (sets sim.rng_seed)")
    parser.add_argument("--set", dest="overrides", action="append", default=[], type=_key_value,
                        metavar="KEY=VALUE", help="override one scenario key; repeatable")
    parser.add_argument("--sweep", type=_key_value, metavar="KEY=V1,V2,...",
                        help="run the command once per value of KEY")
    return parser


def resolve_scenario(args) -> ScenarioConfig:
    scenario = scenario_repository.load_scenario(args.scenario) if args.scenario else ScenarioConfig()
    for key, value in args.overrides:
        scenario = scenario_repository.with_value(scenario, key, value, source="--set")
    if args.seed is not None:
        scenario = scenario_repository.with_value(scenario, "sim.rng_seed", str(args.seed), source="--seed")
    return scenario


def main(registry: CommandRegistry, argv: Optional[List[str]] = None) -> int:
    parser = build_parser(registry)
    try:
        args = parser.parse_args(argv)
        registry.get(args.command)
    except (UsageError, UnknownCommandError) as exc:
        parser.print_usage(sys.stderr)
        print(f"qkdsim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    service = ScenarioApplicationService(registry)
    try:
        scenario = resolve_scenario(args)
        if args.sweep:
            path, values = args.sweep
            written = service.sweep(path, [v for v in values.split(",") if v.strip()], scenario, args.command, args.out)
        else:
            written = [service.run(args.command, scenario, args.out)]
    except (QkdSimError, OSError) as exc:
        logger.debug("Command %s failed", args.command, exc_info=True)
        print(f"qkdsim: error: {exc}", file=sys.stderr)
        return EXIT_ERROR

    for path in written:
        print(path)
    return EXIT_OK
