"""Command-line commands of the Link Budget context."""
from link_budget.application.services import LinkBudgetApplicationService
from shared.interfaces.commands import CommandGroup, CommandResult

link_commands = CommandGroup("link_budget")
link_service = LinkBudgetApplicationService()

SWEEP_COLUMNS = [
    "wavelength_m", "fried_r0_m", "fried_r0_link_m", "t_s",
    "slant_range_km", "zenith_rad", "attenuation_db",
]


@link_commands.command("link-sweep", help="Link attenuation over the pass per wavelength and r0")
def link_sweep(scenario) -> CommandResult:
    grid = scenario.sweep
    integration = scenario.integration
    rows = link_service.get_link_sweep(
        scenario.orbit, scenario.link, scenario.atmosphere,
        wavelengths_m=grid.wavelengths_m,
        a_atm0_values_db=grid.a_atm0_values_db,
        fried_r0_values_m=grid.fried_r0_values_m,
        dt_s=integration.dt_s,
        min_elevation_rad=integration.min_elevation_rad,
    )
    return CommandResult(columns=SWEEP_COLUMNS, rows=[[row[c] for c in SWEEP_COLUMNS] for row in rows])
