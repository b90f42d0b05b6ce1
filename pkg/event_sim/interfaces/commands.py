"""Command-line commands of the Event Simulation context."""
from event_sim.application.services import EventSimApplicationService
from shared.interfaces.commands import CommandGroup, CommandResult

event_sim_commands = CommandGroup("event_sim")

COMPARISON_COLUMNS = ["metric", "analytic", "mc", "sigma", "z"]


@event_sim_commands.command("montecarlo", help="Monte Carlo metrics against the analytic model")
def montecarlo(scenario) -> CommandResult:
    service = EventSimApplicationService()
    rows = service.compare_with_model(scenario.sim, scenario.source.tau_s)
    return CommandResult(columns=COMPARISON_COLUMNS, rows=[[row[c] for c in COMPARISON_COLUMNS] for row in rows])
