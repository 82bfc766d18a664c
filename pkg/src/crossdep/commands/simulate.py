"""Run a scenario with and without the rules and report the energy saved."""
import argparse
from pathlib import Path

from crossdep import config
from crossdep.commands import add_model_arguments, positive_integer
from crossdep.homesim import SimParams, load_scenario, report_to_json, report_to_text, run
from crossdep.ruledsl import parse_rules
from crossdep.utils import read_text_file

DEFAULT_RULES = config.RULES_DIRECTORY / "standby_shutdown.rules"


def setup_parser(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--scenario", type=Path, required=True, help="Scenario JSON file.")
    parser.add_argument("--rules", type=Path, default=DEFAULT_RULES,
                        help="Rule file (default: the shipped standby shutdown rule).")
    add_model_arguments(parser)
    parser.add_argument("--horizon", type=positive_integer, default=None,
                        help="Replace the horizon of every predicted_occupied condition.")
    parser.add_argument("--out", choices=["json", "text"], default="text", help="Report format (default: %(default)s).")


def handler(args: argparse.Namespace) -> int:
    scenario = load_scenario(read_text_file(args.scenario), str(args.scenario))
    rules = parse_rules(read_text_file(args.rules), str(args.rules))
    report = run(scenario, rules, SimParams(args.slot, args.theta, args.horizon))

    # Print the report in the requested format.
    output = report_to_json(report) if args.out == "json" else report_to_text(report)
    print(output, end="")
    return 0
