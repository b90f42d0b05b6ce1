#!/usr/bin/env python3
"""qkdsim entry point: registers each context's commands and dispatches."""
import sys

from config import get_config
from data_budget.interfaces.commands import data_budget_commands
from event_sim.interfaces.commands import event_sim_commands
from key_rate.interfaces.commands import key_rate_commands
from link_budget.interfaces.commands import link_commands
from orbit_geometry.interfaces.commands import orbit_commands
from scenarios.interfaces.cli import main
from shared.infrastructure.log_config import configure_logging
from shared.interfaces.commands import CommandRegistry


def create_registry() -> CommandRegistry:
    registry = CommandRegistry()
    registry.register_group(orbit_commands)
    registry.register_group(link_commands)
    registry.register_group(key_rate_commands)
    registry.register_group(event_sim_commands)
    registry.register_group(data_budget_commands)
    return registry


if __name__ == "__main__":
    configure_logging(get_config())
    sys.exit(main(create_registry(), sys.argv[1:]))
