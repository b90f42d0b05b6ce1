"""Command-line commands of the Key Rate context."""
from key_rate.application.services import KeyRateApplicationService
from shared.interfaces.commands import CommandGroup, CommandResult

key_rate_commands = CommandGroup("key_rate")
key_rate_service = KeyRateApplicationService()

QBER_COLUMNS = ["d_b_cps", "attenuation_db", "eta_b", "q_coinc", "r_coinc_cps", "qber", "snr", "visibility"]
KEYRATE_COLUMNS = ["d_b_cps", "tau_s", "attenuation_db", "qber", "r_dist", "r_secure_cps"]
PASS_KEY_COLUMNS = ["t_s", "attenuation_db", "qber", "r_secure_cps", "cumulative_bits"]
YIELD_COLUMNS = ["fried_r0_m", "days_per_year", "pass_share", "key_per_pass_bits", "bits_per_year"]


def _table(columns, rows) -> CommandResult:
    return CommandResult(columns=columns, rows=[[row[c] for c in columns] for row in rows])


@key_rate_commands.command("qber-sweep", help="QBER, SNR and visibility against attenuation per dark count rate")
def qber_sweep(scenario) -> CommandResult:
    grid = scenario.sweep
    rows = key_rate_service.get_sweep(scenario.source, grid.attenuations_db(), grid.dcr_values_cps)
    return _table(QBER_COLUMNS, rows)


@key_rate_commands.command("keyrate-sweep", help="Secure key rate against attenuation per dark count rate")
def keyrate_sweep(scenario) -> CommandResult:
    grid = scenario.sweep
    rows = key_rate_service.get_sweep(scenario.source, grid.attenuations_db(), grid.dcr_values_cps)
    return _table(KEYRATE_COLUMNS, rows)


@key_rate_commands.command("pass-key", help="Secure key rate and cumulative key over one pass")
def pass_key(scenario) -> CommandResult:
    rows = key_rate_service.pass_key_profile(
        scenario.orbit, scenario.link, scenario.atmosphere, scenario.source, scenario.integration)
    return _table(PASS_KEY_COLUMNS, rows)


@key_rate_commands.command("annual-yield", help="Fried-histogram weighted key per year")
def annual_yield(scenario) -> CommandResult:
    rows = key_rate_service.get_annual_yield(
        scenario.yearly.histogram, scenario.yearly.passes_per_year,
        scenario.orbit, scenario.link, scenario.atmosphere, scenario.source, scenario.integration)
    return _table(YIELD_COLUMNS, rows)
