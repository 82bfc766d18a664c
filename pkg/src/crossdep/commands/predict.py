"""Answer one occupancy prediction query from a scenario's history."""
import argparse
from pathlib import Path

from crossdep import config
from crossdep.commands import add_model_arguments, non_negative_integer, positive_integer
from crossdep.homesim import load_scenario, train
from crossdep.utils import read_text_file


def setup_parser(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--scenario", type=Path, required=True, help="Scenario JSON whose history trains the model.")
    parser.add_argument("--room", required=True, help="Room to ask about.")
    parser.add_argument("--at", type=non_negative_integer, required=True, help="Minute of the query.")
    parser.add_argument("--horizon", type=positive_integer, default=config.HORIZON_MINUTES,
                        help="Look-ahead in minutes (default: %(default)s).")
    add_model_arguments(parser)


def handler(args: argparse.Namespace) -> int:
    scenario = load_scenario(read_text_file(args.scenario), str(args.scenario))
    model = train(scenario.history, args.slot, args.theta)
    print("true" if model.predicted_occupied(args.room, args.at, args.horizon) else "false")
    return 0
