"""Application services for the Scenarios context."""
import logging
from pathlib import Path
from typing import List, Sequence

from config import get_config
from scenarios.domain.entities import ScenarioConfig
from scenarios.infrastructure import csv_writer, scenario_repository
from shared.interfaces.commands import CommandRegistry

logger = logging.getLogger(__name__)


class ScenarioApplicationService:
    """Runs registered commands on a scenario and writes their CSV tables."""

    def __init__(self, registry: CommandRegistry, config=None):
        self.registry = registry
        self.config = config if config is not None else get_config()

    def header_lines(self, command: str, scenario: ScenarioConfig) -> List[str]:
        lines = [f"qkdsim {self.config.VERSION}", f"command: {command}"]
        lines += [f"override: {key} = {value}" for key, value in scenario.overrides]
        lines += [f"scenario: {key} = {value}" for key, value in scenario_repository.scenario_items(scenario)]
        return lines

    def run(self, command: str, scenario: ScenarioConfig, output_dir, filename: str = None) -> Path:
        """Execute one command and write its table as ``<command>.csv`` under ``output_dir``."""
        spec = self.registry.get(command)
        logger.info("Running %s", command)
        result = spec.handler(scenario)
        path = Path(output_dir) / (filename or f"{command}.csv")
        return csv_writer.write_csv(path, result.columns, result.rows,
                                    self.header_lines(command, scenario), digits=self.config.CSV_DIGITS)

    def sweep(self, parameter_path: str, values: Sequence[str], base_scenario: ScenarioConfig,
              command: str, output_dir) -> List[Path]:
        """Run ``command`` once per value of one scenario key; the base scenario is left unchanged."""
        self.registry.get(command)
        scenarios = [
            scenario_repository.with_value(base_scenario, parameter_path, value, source="--sweep")
            for value in values
        ]
        paths = []
        for scenario in scenarios:
            canonical = scenario.overrides[-1][1]
            logger.info("Sweep point %s = %s", parameter_path, canonical)
            paths.append(self.run(command, scenario, output_dir,
                                  filename=f"{command}__{parameter_path}={canonical}.csv"))
        return paths
