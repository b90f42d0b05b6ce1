"""Command-line commands of the Orbit Geometry context."""
from orbit_geometry.application.services import OrbitApplicationService
from shared.interfaces.commands import CommandGroup, CommandResult

orbit_commands = CommandGroup("orbit_geometry")
orbit_service = OrbitApplicationService()

PASS_COLUMNS = [
    "t_s", "slant_range_km", "zenith_rad", "elevation_rad", "central_angle_rad",
    "ogs_rate_rad_s", "sat_rate_rad_s", "light_time_s", "point_ahead_rad",
]


@orbit_commands.command("pass-profile", help="Pass geometry, slew rates and point-ahead per time step")
def pass_profile(scenario) -> CommandResult:
    integration = scenario.integration
    rows = orbit_service.get_pass_table(scenario.orbit, integration.dt_s, integration.min_elevation_rad)
    return CommandResult(columns=PASS_COLUMNS, rows=[[row[c] for c in PASS_COLUMNS] for row in rows])
