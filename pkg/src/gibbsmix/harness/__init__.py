"""Monte Carlo harness, the Fourier example and the CLI."""

from .engine import McResult, mc_risk
from .illustration import Illustration, run_illustration
from .scenario import Scenario, ScenarioError, load_scenario, parse_scenario_text, signal_section5

__all__ = [
    "Illustration",
    "McResult",
    "Scenario",
    "ScenarioError",
    "load_scenario",
    "mc_risk",
    "parse_scenario_text",
    "run_illustration",
    "signal_section5",
]
