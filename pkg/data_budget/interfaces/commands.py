"""Command-line commands of the Data Budget context."""
from data_budget.application.services import DataBudgetApplicationService
from event_sim.application.services import EventSimApplicationService
from shared.interfaces.commands import CommandGroup, CommandResult

data_budget_commands = CommandGroup("data_budget")
data_budget_service = DataBudgetApplicationService()

REPORT_COLUMNS = ["quantity", "value", "unit"]


@data_budget_commands.command("databudget", help="On-board storage report and time-tag codec sizes")
def databudget(scenario) -> CommandResult:
    rows = data_budget_service.get_report(scenario.budget)
    streams = EventSimApplicationService().simulate(scenario.sim)
    rows += data_budget_service.get_codec_report(streams.alice, scenario.budget.delta_t_s)
    return CommandResult(columns=REPORT_COLUMNS, rows=[[row[c] for c in REPORT_COLUMNS] for row in rows])
